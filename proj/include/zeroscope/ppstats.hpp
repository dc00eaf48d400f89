#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "zeroscope/common.hpp"

namespace zeroscope {

struct Window {
  double u0 = 0.0, u1 = 0.0;  // horizontal extent [u0, u1]
  double v0 = 0.0, v1 = 0.0;  // vertical extent [v0, v1]

  double width() const { return u1 - u0; }
  double height() const { return v1 - v0; }
  double area() const { return width() * height(); }
  double shorter_side() const { return width() < height() ? width() : height(); }
  bool contains(double u, double v) const {
    return u >= u0 && u <= u1 && v >= v0 && v <= v1;
  }
};

struct PointPattern {
  Window window;
  std::vector<double> u;
  std::vector<double> v;

  std::size_t size() const { return u.size(); }
};

// Sampled summary statistic on an r grid.  Entries can be NaN where the
// border correction ran out of eligible points; `truncated` marks that case.
struct FunctionalCurve {
  std::string statistic;   // "K", "L", "F", "G" or "pcf"
  std::string correction;  // "border", "translation" or "none"
  std::vector<double> r;
  std::vector<double> value;
  std::size_t n_points = 0;  // points in the pattern it was estimated from
  bool truncated = false;
};

// 512 radii from 0 to half the shorter window side.
std::vector<double> default_r_grid(const Window& window, std::size_t steps = 512);

// Points of `pattern` falling in `sub` (which must lie inside the original
// window), re-windowed to `sub`.
PointPattern restrict_pattern(const PointPattern& pattern, const Window& sub);

// Border-corrected Ripley K.  r must be increasing, start at >= 0 and stay
// within half the shorter window side.  Needs at least two points.
FunctionalCurve estimate_K(const PointPattern& pattern, const std::vector<double>& r);

// L(r) = sqrt(K(r)/pi).
FunctionalCurve estimate_L(const PointPattern& pattern, const std::vector<double>& r);

// Border-corrected empty-space function, reference locations on a square
// grid of the given spacing (cell centers).  Works for empty patterns.
FunctionalCurve estimate_F(const PointPattern& pattern, const std::vector<double>& r,
                           double ref_grid_spacing = 0.05);

// Border-corrected nearest-neighbour function.  Needs at least two points.
FunctionalCurve estimate_G(const PointPattern& pattern, const std::vector<double>& r);

// Translation-corrected pair correlation with an Epanechnikov kernel.
// bandwidth omitted -> 0.15 / sqrt(intensity).
FunctionalCurve estimate_pcf(const PointPattern& pattern, const std::vector<double>& r,
                             std::optional<double> bandwidth = std::nullopt);

}  // namespace zeroscope
