#include "zeroscope/hermite.hpp"

#include <cmath>

namespace zeroscope {

namespace {

void check_order(int k) {
  if (k < 0) throw ValidationError("hermite order must be nonnegative");
  if (k > 256) throw ValidationError("hermite order above 256 is not supported");
}

}  // namespace

double hermite_eval(int k, double x) {
  check_order(k);
  const double h0 = std::pow(2.0, 0.25) * std::exp(-kPi * x * x);
  if (k == 0) return h0;
  double prev = h0;
  double cur = x * std::sqrt(4.0 * kPi) * h0;
  for (int j = 1; j < k; ++j) {
    const double next = x * std::sqrt(4.0 * kPi / (j + 1)) * cur -
                        std::sqrt(static_cast<double>(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hermite_eval(int k, const std::vector<double>& xs) {
  check_order(k);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = hermite_eval(k, xs[i]);
  return out;
}

std::complex<double> bargmann_hermite(int k, std::complex<double> z) {
  check_order(k);
  if (k == 0) return {1.0, 0.0};
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  // log-magnitude form avoids overflow of z^k and k! separately
  const double logmag = 0.5 * k * std::log(kPi) + k * std::log(r) - 0.5 * std::lgamma(k + 1.0);
  const double phase = k * std::arg(z);
  return std::polar(std::exp(logmag), phase);
}

std::complex<double> hermite_stft_closed_form(int k, double u, double v) {
  check_order(k);
  const std::complex<double> w(u, -v);
  const double rho2 = u * u + v * v;
  double logmag = -0.5 * kPi * rho2;
  double phase = -kPi * u * v;
  if (k > 0) {
    const double r = std::abs(w);
    if (r == 0.0) return {0.0, 0.0};
    logmag += 0.5 * k * std::log(kPi) + k * std::log(r) - 0.5 * std::lgamma(k + 1.0);
    phase += k * std::arg(w);
  }
  return std::polar(std::exp(logmag), phase);
}

}  // namespace zeroscope
