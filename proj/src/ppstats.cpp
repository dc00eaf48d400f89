#include "zeroscope/ppstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zeroscope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_window(const Window& w) {
  if (!(w.width() > 0.0) || !(w.height() > 0.0)) {
    throw ValidationError("window must have positive width and height");
  }
}

void check_pattern(const PointPattern& p) {
  check_window(p.window);
  if (p.u.size() != p.v.size()) {
    throw ValidationError("point pattern coordinate arrays differ in length");
  }
  for (std::size_t i = 0; i < p.u.size(); ++i) {
    if (!p.window.contains(p.u[i], p.v[i])) {
      throw ValidationError("point pattern has points outside its window");
    }
  }
}

void check_r_grid(const std::vector<double>& r, const Window& w, double slack = 0.0) {
  if (r.empty()) throw ValidationError("r grid is empty");
  if (!(r.front() >= 0.0)) throw ValidationError("r grid must start at a nonnegative value");
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw ValidationError("r grid must be strictly increasing");
  }
  const double rmax_allowed = 0.5 * w.shorter_side() + slack + 1e-9;
  if (r.back() > rmax_allowed) {
    throw ValidationError("r grid exceeds half the shorter window side");
  }
}

double boundary_distance(const Window& w, double u, double v) {
  return std::min(std::min(u - w.u0, w.u1 - u), std::min(v - w.v0, w.v1 - v));
}

// Cell index buckets for nearest-point queries on a fixed pattern.
class BucketGrid {
 public:
  BucketGrid(const PointPattern& p, double target_cell) : p_(p) {
    cell_ = std::max(target_cell, 1e-12);
    nx_ = std::max<std::size_t>(1, static_cast<std::size_t>(p.window.width() / cell_) + 1);
    ny_ = std::max<std::size_t>(1, static_cast<std::size_t>(p.window.height() / cell_) + 1);
    cells_.resize(nx_ * ny_);
    for (std::size_t i = 0; i < p.size(); ++i) {
      cells_[cell_of(p.u[i], p.v[i])].push_back(i);
    }
  }

  // Distance from (u, v) to the nearest pattern point other than `exclude`.
  double nearest(double u, double v, std::size_t exclude = SIZE_MAX) const {
    if (p_.size() == 0) return kInf;
    const long cx = clampx(static_cast<long>((u - p_.window.u0) / cell_));
    const long cy = clampy(static_cast<long>((v - p_.window.v0) / cell_));
    double best = kInf;
    const long max_ring = static_cast<long>(std::max(nx_, ny_));
    for (long ring = 0; ring <= max_ring; ++ring) {
      if (ring > 0) {
        const double ring_min = (ring - 1) * cell_;
        if (ring_min * ring_min > best) break;
      }
      for (long dx = -ring; dx <= ring; ++dx) {
        for (long dy = -ring; dy <= ring; ++dy) {
          if (std::max(std::labs(dx), std::labs(dy)) != ring) continue;
          const long x = cx + dx, y = cy + dy;
          if (x < 0 || y < 0 || x >= static_cast<long>(nx_) || y >= static_cast<long>(ny_))
            continue;
          for (std::size_t idx : cells_[static_cast<std::size_t>(y) * nx_ + x]) {
            if (idx == exclude) continue;
            const double du = p_.u[idx] - u;
            const double dv = p_.v[idx] - v;
            const double d2 = du * du + dv * dv;
            if (d2 < best) best = d2;
          }
        }
      }
    }
    return std::sqrt(best);
  }

 private:
  std::size_t cell_of(double u, double v) const {
    const long cx = clampx(static_cast<long>((u - p_.window.u0) / cell_));
    const long cy = clampy(static_cast<long>((v - p_.window.v0) / cell_));
    return static_cast<std::size_t>(cy) * nx_ + static_cast<std::size_t>(cx);
  }
  long clampx(long x) const { return std::clamp<long>(x, 0, static_cast<long>(nx_) - 1); }
  long clampy(long y) const { return std::clamp<long>(y, 0, static_cast<long>(ny_) - 1); }

  const PointPattern& p_;
  double cell_;
  std::size_t nx_, ny_;
  std::vector<std::vector<std::size_t>> cells_;
};

struct Fenwick {
  explicit Fenwick(std::size_t n) : tree(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < tree.size(); i += i & (~i + 1)) ++tree[i];
  }
  long long prefix(std::size_t i) const {  // count of indices < i
    long long s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree[i];
    return s;
  }
  std::vector<long long> tree;
};

}  // namespace

std::vector<double> default_r_grid(const Window& window, std::size_t steps) {
  check_window(window);
  if (steps < 2) throw ValidationError("r grid needs at least two points");
  const double rmax = 0.5 * window.shorter_side();
  std::vector<double> r(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    r[i] = rmax * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return r;
}

PointPattern restrict_pattern(const PointPattern& pattern, const Window& sub) {
  check_pattern(pattern);
  check_window(sub);
  if (sub.u0 < pattern.window.u0 - 1e-12 || sub.u1 > pattern.window.u1 + 1e-12 ||
      sub.v0 < pattern.window.v0 - 1e-12 || sub.v1 > pattern.window.v1 + 1e-12) {
    throw ValidationError("sub-window is not contained in the pattern window");
  }
  PointPattern out;
  out.window = sub;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (sub.contains(pattern.u[i], pattern.v[i])) {
      out.u.push_back(pattern.u[i]);
      out.v.push_back(pattern.v[i]);
    }
  }
  return out;
}

FunctionalCurve estimate_K(const PointPattern& pattern, const std::vector<double>& r) {
  check_pattern(pattern);
  check_r_grid(r, pattern.window);
  const std::size_t n = pattern.size();
  if (n < 2) throw InsufficientPoints("K estimator needs at least two points");

  std::vector<double> bdist(n);
  for (std::size_t i = 0; i < n; ++i) {
    bdist[i] = boundary_distance(pattern.window, pattern.u[i], pattern.v[i]);
  }
  // per-point sorted neighbour distances
  std::vector<std::vector<double>> dists(n);
  for (std::size_t i = 0; i < n; ++i) {
    dists[i].reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double du = pattern.u[i] - pattern.u[j];
      const double dv = pattern.v[i] - pattern.v[j];
      dists[i].push_back(std::sqrt(du * du + dv * dv));
    }
    std::sort(dists[i].begin(), dists[i].end());
  }

  FunctionalCurve out;
  out.statistic = "K";
  out.correction = "border";
  out.r = r;
  out.value.resize(r.size());
  out.n_points = n;
  const double area = pattern.window.area();
  for (std::size_t m = 0; m < r.size(); ++m) {
    const double rm = r[m];
    std::size_t eligible = 0;
    long long pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (bdist[i] > rm) {
        ++eligible;
        pairs += std::upper_bound(dists[i].begin(), dists[i].end(), rm) - dists[i].begin();
      }
    }
    if (eligible == 0) {
      out.value[m] = kNaN;
      out.truncated = true;
    } else {
      out.value[m] = area * static_cast<double>(pairs) /
                     (static_cast<double>(n - 1) * static_cast<double>(eligible));
    }
  }
  return out;
}

FunctionalCurve estimate_L(const PointPattern& pattern, const std::vector<double>& r) {
  FunctionalCurve out = estimate_K(pattern, r);
  out.statistic = "L";
  for (double& v : out.value) {
    if (std::isfinite(v)) v = std::sqrt(v / kPi);
  }
  return out;
}

FunctionalCurve estimate_F(const PointPattern& pattern, const std::vector<double>& r,
                           double ref_grid_spacing) {
  check_pattern(pattern);
  check_r_grid(r, pattern.window);
  if (!(ref_grid_spacing > 0.0)) {
    throw ValidationError("reference grid spacing must be positive");
  }
  const Window& w = pattern.window;
  const double h = ref_grid_spacing;
  const long nx = static_cast<long>(std::floor(w.width() / h - 0.5 + 1e-9)) + 1;
  const long ny = static_cast<long>(std::floor(w.height() / h - 0.5 + 1e-9)) + 1;
  if (nx <= 0 || ny <= 0) {
    throw ValidationError("window too small for the reference grid spacing");
  }
  const std::size_t nref = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);

  const double mean_nn = 0.5 / std::sqrt(std::max<double>(pattern.size(), 1) / w.area());
  BucketGrid grid(pattern, std::max(0.25, mean_nn));

  // For each reference location: distance to nearest point and to boundary.
  std::vector<double> dref(nref), bref(nref);
  std::size_t idx = 0;
  for (long iy = 0; iy < ny; ++iy) {
    const double v = w.v0 + (iy + 0.5) * h;
    for (long ix = 0; ix < nx; ++ix, ++idx) {
      const double u = w.u0 + (ix + 0.5) * h;
      dref[idx] = pattern.size() == 0 ? kInf : grid.nearest(u, v);
      bref[idx] = boundary_distance(w, u, v);
    }
  }

  // Count {d <= r and b > r} with one sweep: references sorted by d enter a
  // Fenwick tree over b-ranks as r grows.
  std::vector<double> bsorted = bref;
  std::sort(bsorted.begin(), bsorted.end());
  std::vector<std::size_t> order(nref);
  for (std::size_t i = 0; i < nref; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return dref[a] < dref[b]; });
  Fenwick fen(nref);

  FunctionalCurve out;
  out.statistic = "F";
  out.correction = "border";
  out.r = r;
  out.value.resize(r.size());
  out.n_points = pattern.size();
  std::size_t next = 0;
  for (std::size_t m = 0; m < r.size(); ++m) {
    const double rm = r[m];
    while (next < nref && dref[order[next]] <= rm) {
      const std::size_t brank = static_cast<std::size_t>(
          std::lower_bound(bsorted.begin(), bsorted.end(), bref[order[next]]) -
          bsorted.begin());
      fen.add(brank);
      ++next;
    }
    // eligible references: b > rm
    const std::size_t n_le = static_cast<std::size_t>(
        std::upper_bound(bsorted.begin(), bsorted.end(), rm) - bsorted.begin());
    const std::size_t eligible = nref - n_le;
    if (eligible == 0) {
      out.value[m] = kNaN;
      out.truncated = true;
    } else {
      const long long hits = static_cast<long long>(next) - fen.prefix(n_le);
      out.value[m] = static_cast<double>(hits) / static_cast<double>(eligible);
    }
  }
  return out;
}

FunctionalCurve estimate_G(const PointPattern& pattern, const std::vector<double>& r) {
  check_pattern(pattern);
  check_r_grid(r, pattern.window);
  const std::size_t n = pattern.size();
  if (n < 2) throw InsufficientPoints("G estimator needs at least two points");

  const double mean_nn = 0.5 / std::sqrt(n / pattern.window.area());
  BucketGrid grid(pattern, std::max(0.25, mean_nn));
  std::vector<double> nn(n), bdist(n);
  for (std::size_t i = 0; i < n; ++i) {
    nn[i] = grid.nearest(pattern.u[i], pattern.v[i], i);
    bdist[i] = boundary_distance(pattern.window, pattern.u[i], pattern.v[i]);
  }

  FunctionalCurve out;
  out.statistic = "G";
  out.correction = "border";
  out.r = r;
  out.value.resize(r.size());
  out.n_points = n;
  for (std::size_t m = 0; m < r.size(); ++m) {
    const double rm = r[m];
    std::size_t eligible = 0, hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (bdist[i] > rm) {
        ++eligible;
        if (nn[i] <= rm) ++hits;
      }
    }
    if (eligible == 0) {
      out.value[m] = kNaN;
      out.truncated = true;
    } else {
      out.value[m] = static_cast<double>(hits) / static_cast<double>(eligible);
    }
  }
  return out;
}

FunctionalCurve estimate_pcf(const PointPattern& pattern, const std::vector<double>& r,
                             std::optional<double> bandwidth) {
  check_pattern(pattern);
  const std::size_t n = pattern.size();
  if (n < 2) throw InsufficientPoints("pair correlation needs at least two points");
  const Window& w = pattern.window;
  const double lambda = static_cast<double>(n) / w.area();
  double b = bandwidth.value_or(0.15 / std::sqrt(lambda));
  if (!(b > 0.0)) throw ValidationError("pcf bandwidth must be positive");
  check_r_grid(r, w, b);
  if (r.back() + b >= w.shorter_side()) {
    throw ValidationError("pcf grid plus bandwidth reaches the window size");
  }

  FunctionalCurve out;
  out.statistic = "pcf";
  out.correction = "translation";
  out.r = r;
  out.value.assign(r.size(), 0.0);
  out.n_points = n;

  const double dmax = r.back() + b;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = std::fabs(pattern.u[i] - pattern.u[j]);
      const double dy = std::fabs(pattern.v[i] - pattern.v[j]);
      const double d = std::sqrt(dx * dx + dy * dy);
      if (d > dmax) continue;
      const double trans = (w.width() - dx) * (w.height() - dy);
      if (!(trans > 0.0)) continue;
      const double wgt = 1.0 / trans;
      // grid entries within the kernel support around d
      auto lo = std::lower_bound(r.begin(), r.end(), d - b);
      auto hi = std::upper_bound(r.begin(), r.end(), d + b);
      for (auto it = lo; it != hi; ++it) {
        const double x = (*it - d) / b;
        const double kern = 0.75 * (1.0 - x * x) / b;
        if (kern > 0.0) out.value[it - r.begin()] += kern * wgt;
      }
    }
  }
  for (std::size_t m = 0; m < r.size(); ++m) {
    if (r[m] <= 0.0) {
      out.value[m] = 0.0;
    } else {
      out.value[m] /= 2.0 * kPi * r[m] * lambda * lambda;
    }
  }
  return out;
}

}  // namespace zeroscope
