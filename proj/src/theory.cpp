#include "zeroscope/theory.hpp"

#include <cmath>
#include <functional>

namespace zeroscope {

namespace {

// Taylor expansion of the planar-field pair correlation in x = pi r^2 / 2,
// used where the closed form loses digits to cancellation.
double g0_series(double x) {
  const double x2 = x * x;
  double acc = 4.0 / 173745.0;
  acc = acc * x2 - 2764.0 / 16372125.0;
  acc = acc * x2 + 2.0 / 1701.0;
  acc = acc * x2 - 4.0 / 525.0;
  acc = acc * x2 + 2.0 / 45.0;
  acc = acc * x2 - 2.0 / 9.0;
  acc = acc * x2 + 1.0;
  return acc * x;
}

double g0_of_x(double x) {
  if (x < 0.3) return g0_series(x);
  if (x > 25.0) return 1.0;
  const double sh = std::sinh(x);
  const double ch = std::cosh(x);
  return ((sh * sh + x * x) * ch - 2.0 * x * sh) / (sh * sh * sh);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw NumericError("quadrature failed to converge");
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double g0_planar_gaf(double r) {
  if (!(r >= 0.0)) throw ValidationError("pair correlation needs r >= 0");
  return g0_of_x(0.5 * kPi * r * r);
}

double g0_ginibre(double r) {
  if (!(r >= 0.0)) throw ValidationError("pair correlation needs r >= 0");
  return -std::expm1(-kPi * r * r);
}

double g0_poisson(double r) {
  if (!(r >= 0.0)) throw ValidationError("pair correlation needs r >= 0");
  return 1.0;
}

std::pair<TheoryCurve, TheoryCurve> K0_L0(PointProcess process, const std::vector<double>& r) {
  if (r.empty()) throw ValidationError("r grid is empty");
  if (!(r.front() >= 0.0)) throw ValidationError("r grid must start at >= 0");
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw ValidationError("r grid must be strictly increasing");
  }
  std::function<double(double)> g;
  std::string kind;
  switch (process) {
    case PointProcess::Gaf:
      g = g0_planar_gaf;
      kind = "gaf";
      break;
    case PointProcess::Ginibre:
      g = g0_ginibre;
      kind = "ginibre";
      break;
    case PointProcess::Poisson:
      g = g0_poisson;
      kind = "poisson";
      break;
  }
  const auto integrand = [&g](double s) { return 2.0 * kPi * s * g(s); };
  // segment tolerances sum to well under the 1e-10 budget for the cumulative
  const double seg_tol = 1e-13;

  TheoryCurve K{"K0_" + kind, r, std::vector<double>(r.size())};
  TheoryCurve L{"L0_" + kind, r, std::vector<double>(r.size())};
  double acc = integrate(integrand, 0.0, r.front(), seg_tol);
  K.value[0] = acc;
  for (std::size_t i = 1; i < r.size(); ++i) {
    acc += integrate(integrand, r[i - 1], r[i], seg_tol);
    K.value[i] = acc;
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    L.value[i] = std::sqrt(K.value[i] / kPi);
  }
  return {K, L};
}

double horizontal_density_S(double y) {
  if (!(y >= 0.0)) throw ValidationError("horizontal density needs y >= 0");
  const double w = 4.0 * kPi * y * y;
  if (w <= 1e-4) {
    // 1/(2 sqrt(pi)) * (1 + w/4 + w^2/96), next term O(w^3/384)
    return 0.5 / std::sqrt(kPi) * (1.0 + w / 4.0 + w * w / 96.0);
  }
  return y / std::sqrt(-std::expm1(-w));
}

double real_axis_zero_rate() { return 1.0 / std::sqrt(kPi); }

double hole_constant() {
  const double e = std::exp(1.0);
  return -0.75 * e * e;
}

}  // namespace zeroscope
