#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "zeroscope/ppstats.hpp"

namespace zeroscope {

enum class GafKind { Symmetric, Planar };

// One realization of a Gaussian analytic field, truncated to a polynomial
// whose coefficient tail is negligible (relative Poisson-tail bound 1e-12)
// everywhere in the closed disk |z| <= R.  Symmetric fields have real
// coefficients and so are conjugate-symmetric about the real axis.
struct GafSample {
  GafKind kind = GafKind::Planar;
  double R = 0.0;
  std::vector<std::complex<double>> coeffs;  // c_k = a_k pi^{k/2} / sqrt(k!)
};

// Degree cutoff used for radius R: smallest D whose Poisson(pi R^2) tail
// beyond D is at most 1e-12 (exposed for tests).
std::size_t gaf_truncation_degree(double R);

GafSample sample_gaf(GafKind kind, double R, std::uint64_t seed);

// Gaussian-weighted field value exp(-pi |z|^2 / 2) p(z); flat expected
// modulus, handy for plotting and minima scans.  |z| must stay within R.
std::complex<double> eval_scaled(const GafSample& gaf, std::complex<double> z);

// Raw polynomial value and derivative.
std::pair<std::complex<double>, std::complex<double>> eval_series(
    const GafSample& gaf, std::complex<double> z);

struct Region {
  enum class Shape { Disk, Rect };
  Shape shape = Shape::Disk;
  double cx = 0.0, cy = 0.0, radius = 0.0;  // disk
  Window rect;                              // rect

  static Region disk(double cx, double cy, double radius);
  static Region rectangle(const Window& w);

  bool contains(double u, double v) const;  // open interior
  Window bounds() const;
};

// All zeros of the field inside the region (which must keep half a unit of
// margin inside the truncation disk: its points stay within |z| <= R - 0.5).
// Candidates come from a modulus scan at `spacing`, are polished by Newton
// iteration, and the count is checked against the argument-principle winding
// number of the region contour; a finer rescan runs on mismatch, and
// ZeroFindingIncomplete is thrown if the two still disagree.  The returned
// pattern is windowed to the region's bounding rectangle.
PointPattern find_zeros(const GafSample& gaf, const Region& region, double spacing = 0.05);

// Number of zeros inside the region by the argument principle.
long long winding_count(const GafSample& gaf, const Region& region);

// Zeros of a symmetric field on the real segment [x0, x1] (which must stay
// within |x| <= R - 0.5), ascending.  Sign scan at step 0.01, bisection to
// 1e-12.  An empty segment (x0 == x1) gives an empty list.
std::vector<double> real_zeros(const GafSample& gaf, double x0, double x1);

}  // namespace zeroscope
