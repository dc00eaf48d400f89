#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "zeroscope/hermite.hpp"

using namespace zeroscope;

namespace {

void check_rel(double got, double want, double tol) {
  CHECK(std::fabs(got - want) <= tol * std::max(1e-300, std::fabs(want)));
}

}  // namespace

TEST_CASE("values match a high-precision reference") {
  // reference values computed with 50-digit arithmetic
  check_rel(hermite_eval(0, 0.0), 1.1892071150027211, 1e-14);
  check_rel(hermite_eval(0, 0.5), 0.54220486554034242, 1e-14);
  check_rel(hermite_eval(1, 0.3), 0.95321268644547549, 1e-14);
  check_rel(hermite_eval(2, 0.0), -0.84089641525371454, 1e-14);
  check_rel(hermite_eval(3, 1.0), 0.71147173925293362, 1e-13);
  check_rel(hermite_eval(5, 0.7), -0.50043829426309941, 1e-13);
  check_rel(hermite_eval(8, 0.5), 0.23595105157548145, 1e-12);
  check_rel(hermite_eval(8, 1.7), 0.44577591219236995, 1e-12);
  check_rel(hermite_eval(10, 6.0), 8.1536509109035322e-40, 1e-11);
  check_rel(hermite_eval(16, 2.2), 0.71717904287136261, 1e-12);
  check_rel(hermite_eval(32, 0.4), -0.092775776091166364, 1e-11);
  check_rel(hermite_eval(32, 3.1), 0.72920773293280366, 1e-11);
  check_rel(hermite_eval(40, 2.0), 0.11633036558446714, 1e-11);
  check_rel(hermite_eval(64, 1.3), 0.13808049583193681, 1e-10);
  check_rel(hermite_eval(64, 4.1), -0.52134798613883072, 1e-10);
  check_rel(hermite_eval(64, 6.0), 1.2357349714563536e-11, 1e-10);
}

TEST_CASE("vector form agrees with the scalar form") {
  const std::vector<double> xs = {-2.0, -0.5, 0.0, 0.3, 1.7};
  const auto ys = hermite_eval(7, xs);
  REQUIRE(ys.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(ys[i] == hermite_eval(7, xs[i]));
  }
}

TEST_CASE("orthonormality by quadrature") {
  const double h = 1.0 / 512.0;
  const double lo = -8.0, hi = 8.0;
  const int n = static_cast<int>((hi - lo) / h);
  for (int j : {0, 2, 5}) {
    for (int k : {0, 2, 5, 9}) {
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double x = lo + i * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * hermite_eval(j, x) * hermite_eval(k, x);
      }
      acc *= h;
      CHECK(std::fabs(acc - (j == k ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("order validation") {
  CHECK_THROWS_AS(hermite_eval(-1, 0.0), ValidationError);
  CHECK_THROWS_AS(bargmann_hermite(-2, {1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(hermite_stft_closed_form(-1, 0.0, 0.0), ValidationError);
}

TEST_CASE("transform closed form at frozen points") {
  check_rel(std::abs(hermite_stft_closed_form(3, 1.0, 0.0)), 0.47256440586202709, 1e-12);
  check_rel(std::abs(hermite_stft_closed_form(0, 0.5, 0.5)), 0.45593812776599624, 1e-12);
  check_rel(std::norm(hermite_stft_closed_form(8, 1.25, 1.0)), 0.13956452567005485, 1e-12);

  // order zero carries the bare phase twist and Gaussian envelope
  const double u = 0.7, v = 0.3;
  const auto got = hermite_stft_closed_form(0, u, v);
  const double mag = std::exp(-0.5 * kPi * (u * u + v * v));
  CHECK(got.real() == doctest::Approx(mag * std::cos(kPi * u * v)).epsilon(1e-12));
  CHECK(got.imag() == doctest::Approx(-mag * std::sin(kPi * u * v)).epsilon(1e-12));
}

TEST_CASE("entire-transform values") {
  check_rel(bargmann_hermite(2, {1.0, 0.0}).real(), 2.2214414690791831, 1e-12);
  CHECK(bargmann_hermite(2, {1.0, 0.0}).imag() == doctest::Approx(0.0));
  const auto b40 = bargmann_hermite(40, {2.0, 1.0});
  check_rel(std::abs(b40), 0.92592328651065228, 1e-12);
  CHECK(std::arg(b40) == doctest::Approx(-0.30365156150651478).epsilon(1e-10));
  CHECK(bargmann_hermite(0, {0.3, -0.4}) == std::complex<double>(1.0, 0.0));
  CHECK(bargmann_hermite(5, {0.0, 0.0}) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("transform modulus factorizes through the entire transform") {
  for (int k : {1, 4, 11}) {
    const double u = 0.9, v = -0.6;
    const double rho2 = u * u + v * v;
    const double via_b =
        std::exp(-0.5 * kPi * rho2) * std::abs(bargmann_hermite(k, {u, v}));
    check_rel(std::abs(hermite_stft_closed_form(k, u, v)), via_b, 1e-12);
  }
}
