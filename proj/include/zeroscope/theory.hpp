#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zeroscope/common.hpp"

namespace zeroscope {

enum class PointProcess { Gaf, Ginibre, Poisson };

struct TheoryCurve {
  std::string kind;
  std::vector<double> r;
  std::vector<double> value;
};

// Pair correlation of the zero set of the planar Gaussian analytic field at
// unit intensity.  With x = pi r^2 / 2:
// ((sinh^2 x + x^2) cosh x - 2 x sinh x) / sinh^3 x.
double g0_planar_gaf(double r);

// Ginibre ensemble: 1 - exp(-pi r^2).
double g0_ginibre(double r);

// Unit-rate Poisson: identically 1.
double g0_poisson(double r);

// Ripley K and L for the chosen process at unit intensity, on an increasing
// r grid starting at >= 0.  K by adaptive quadrature of 2 pi s g0(s),
// absolute tolerance 1e-10; L = sqrt(K/pi).
std::pair<TheoryCurve, TheoryCurve> K0_L0(PointProcess process, const std::vector<double>& r);

// Cumulative horizontal intensity of zeros of the symmetric field lying off
// the real axis: S(y) = y / sqrt(1 - exp(-4 pi y^2)), with S(0) taken as the
// limit 1/(2 sqrt(pi)).  y must be nonnegative.
double horizontal_density_S(double y);

// Mean number of real zeros of the symmetric field per unit length of the
// real axis: 1/sqrt(pi).
double real_axis_zero_rate();

// Coefficient of the leading term of log P(no zeros in a disk of area A):
// -3 e^2 / 4 per unit area squared scale.
double hole_constant();

}  // namespace zeroscope
