#include "zeroscope/gaf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zeroscope {

namespace {

using cplx = std::complex<double>;

void check_gaf(const GafSample& gaf) {
  if (gaf.coeffs.empty() || !(gaf.R > 0.0)) {
    throw ValidationError("field sample is empty");
  }
}

double contour_phase(const GafSample& gaf, cplx z) {
  const cplx p = eval_series(gaf, z).first;
  if (p == cplx(0.0, 0.0)) throw NumericError("zero lies on the contour");
  return std::arg(p);
}

// region contour as a closed parametric path on [0, 1]
cplx contour_point(const Region& region, double t) {
  if (region.shape == Region::Shape::Disk) {
    const double ang = 2.0 * kPi * t;
    return {region.cx + region.radius * std::cos(ang),
            region.cy + region.radius * std::sin(ang)};
  }
  const Window& w = region.rect;
  const double s = 4.0 * (t - std::floor(t));
  if (s < 1.0) return {w.u0 + s * w.width(), w.v0};
  if (s < 2.0) return {w.u1, w.v0 + (s - 1.0) * w.height()};
  if (s < 3.0) return {w.u1 - (s - 2.0) * w.width(), w.v1};
  return {w.u0, w.v1 - (s - 3.0) * w.height()};
}

double wrap_phase(double d) { return std::remainder(d, 2.0 * kPi); }

// Accepting a wrapped increment is only sound when the true increment cannot
// reach 2*pi minus the acceptance bar within one interval.  A zero passing at
// distance eps from the contour sweeps just under pi, so the bar plus the
// per-interval baseline drift must stay below pi.
double phase_increment(const GafSample& gaf, const Region& region, double t0, double p0,
                       double t1, double p1, int depth) {
  const double d = wrap_phase(p1 - p0);
  if (std::fabs(d) <= kPi / 3.0) return d;
  if (depth <= 0) throw NumericError("winding contour too close to a zero");
  const double tm = 0.5 * (t0 + t1);
  const double pm = contour_phase(gaf, contour_point(region, tm));
  return phase_increment(gaf, region, t0, p0, tm, pm, depth - 1) +
         phase_increment(gaf, region, tm, pm, t1, p1, depth - 1);
}

void check_region_margin(const GafSample& gaf, const Region& region) {
  const double limit = gaf.R - 0.5 + 1e-9;
  double reach = 0.0;
  if (region.shape == Region::Shape::Disk) {
    if (!(region.radius > 0.0)) throw ValidationError("region radius must be positive");
    reach = std::hypot(region.cx, region.cy) + region.radius;
  } else {
    const Window& w = region.rect;
    if (!(w.width() > 0.0) || !(w.height() > 0.0)) {
      throw ValidationError("region rectangle is degenerate");
    }
    for (double u : {w.u0, w.u1}) {
      for (double v : {w.v0, w.v1}) {
        reach = std::max(reach, std::hypot(u, v));
      }
    }
  }
  if (reach > limit) {
    throw OutOfSafeRegion("region leaves the truncation disk margin (|z| <= R - 0.5)");
  }
}

struct Candidate {
  double u, v;
};

std::vector<cplx> polish_candidates(const GafSample& gaf, const Region& region,
                                    const std::vector<Candidate>& cands) {
  std::vector<cplx> roots;
  for (const auto& c : cands) {
    cplx z(c.u, c.v);
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const auto [p, dp] = eval_series(gaf, z);
      if (dp == cplx(0.0, 0.0)) break;
      const cplx step = p / dp;
      z -= step;
      if (std::abs(z) > gaf.R) break;
      if (std::abs(step) < 1e-12) {
        ok = true;
        break;
      }
    }
    if (ok && region.contains(z.real(), z.imag())) roots.push_back(z);
  }
  return roots;
}

std::vector<cplx> dedupe(std::vector<cplx> roots) {
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<cplx> out;
  for (const cplx& z : roots) {
    bool fresh = true;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (z.real() - it->real() > 1e-6) break;
      if (std::abs(z - *it) <= 1e-6) {
        fresh = false;
        break;
      }
    }
    if (fresh) out.push_back(z);
  }
  return out;
}

std::vector<Candidate> scan_minima(const GafSample& gaf, const Region& region,
                                   double spacing) {
  const Window b = region.bounds();
  const double margin = 2.0 * spacing;
  const double u0 = b.u0 - margin, u1 = b.u1 + margin;
  const double v0 = b.v0 - margin, v1 = b.v1 + margin;
  const std::size_t nu = static_cast<std::size_t>(std::ceil((u1 - u0) / spacing)) + 1;
  const std::size_t nv = static_cast<std::size_t>(std::ceil((v1 - v0) / spacing)) + 1;
  const double limit2 = gaf.R * gaf.R;

  std::vector<double> w(nu * nv);
  for (std::size_t j = 0; j < nv; ++j) {
    const double v = v0 + j * spacing;
    for (std::size_t i = 0; i < nu; ++i) {
      const double u = u0 + i * spacing;
      if (u * u + v * v > limit2) {
        w[j * nu + i] = std::numeric_limits<double>::infinity();
      } else {
        w[j * nu + i] = std::abs(eval_scaled(gaf, {u, v}));
      }
    }
  }
  std::vector<Candidate> cands;
  for (std::size_t j = 0; j < nv; ++j) {
    for (std::size_t i = 0; i < nu; ++i) {
      const double c = w[j * nu + i];
      if (!std::isfinite(c)) continue;
      bool is_min = true;
      for (long dj = -1; dj <= 1 && is_min; ++dj) {
        for (long di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const long ii = static_cast<long>(i) + di;
          const long jj = static_cast<long>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<long>(nu) || jj >= static_cast<long>(nv))
            continue;
          if (!(c < w[jj * nu + ii])) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) cands.push_back({u0 + i * spacing, v0 + j * spacing});
    }
  }
  return cands;
}

}  // namespace

std::size_t gaf_truncation_degree(double R) {
  if (!(R >= 0.5) || !(R <= 16.0)) {
    throw ValidationError("truncation radius must lie in [0.5, 16]");
  }
  const double lam = kPi * R * R;
  const double log_tol = std::log(1e-12);
  for (std::size_t d = static_cast<std::size_t>(lam);; ++d) {
    // tail P(X > d) = pmf(d+1) * sum_i prod ratios
    const double k1 = static_cast<double>(d + 1);
    const double log_pmf = k1 * std::log(lam) - lam - std::lgamma(k1 + 1.0);
    double term = 1.0, total = 1.0;
    for (double k = k1 + 1.0; term > 1e-20 * total; k += 1.0) {
      term *= lam / k;
      total += term;
    }
    if (log_pmf + std::log(total) <= log_tol) return d;
  }
}

GafSample sample_gaf(GafKind kind, double R, std::uint64_t seed) {
  const std::size_t degree = gaf_truncation_degree(R);
  GafSample out;
  out.kind = kind;
  out.R = R;
  out.coeffs.resize(degree + 1);
  Rng rng(seed);
  const double half = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 0; k <= degree; ++k) {
    const double kk = static_cast<double>(k);
    const double scale = std::exp(0.5 * (kk * std::log(kPi) - std::lgamma(kk + 1.0)));
    if (kind == GafKind::Symmetric) {
      out.coeffs[k] = {rng.gaussian() * scale, 0.0};
    } else {
      const double re = rng.gaussian() * half;
      const double im = rng.gaussian() * half;
      out.coeffs[k] = {re * scale, im * scale};
    }
  }
  return out;
}

std::pair<cplx, cplx> eval_series(const GafSample& gaf, cplx z) {
  check_gaf(gaf);
  cplx p(0.0, 0.0), dp(0.0, 0.0);
  for (std::size_t i = gaf.coeffs.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + gaf.coeffs[i];
  }
  return {p, dp};
}

cplx eval_scaled(const GafSample& gaf, cplx z) {
  check_gaf(gaf);
  if (std::abs(z) > gaf.R + 1e-12) {
    throw OutOfSafeRegion("evaluation point outside the truncation disk");
  }
  const double damp = std::exp(-0.5 * kPi * std::norm(z));
  return damp * eval_series(gaf, z).first;
}

Region Region::disk(double cx, double cy, double radius) {
  Region r;
  r.shape = Shape::Disk;
  r.cx = cx;
  r.cy = cy;
  r.radius = radius;
  return r;
}

Region Region::rectangle(const Window& w) {
  Region r;
  r.shape = Shape::Rect;
  r.rect = w;
  return r;
}

bool Region::contains(double u, double v) const {
  if (shape == Shape::Disk) {
    const double du = u - cx, dv = v - cy;
    return du * du + dv * dv < radius * radius;
  }
  return u > rect.u0 && u < rect.u1 && v > rect.v0 && v < rect.v1;
}

Window Region::bounds() const {
  if (shape == Shape::Disk) {
    return {cx - radius, cx + radius, cy - radius, cy + radius};
  }
  return rect;
}

long long winding_count(const GafSample& gaf, const Region& region) {
  check_gaf(gaf);
  check_region_margin(gaf, region);
  constexpr int kSegments = 1024;
  std::vector<double> phases(kSegments + 1);
  for (int i = 0; i <= kSegments; ++i) {
    const double t = static_cast<double>(i) / kSegments;
    phases[i] = contour_phase(gaf, contour_point(region, t));
  }
  double total = 0.0;
  for (int i = 0; i < kSegments; ++i) {
    const double t0 = static_cast<double>(i) / kSegments;
    const double t1 = static_cast<double>(i + 1) / kSegments;
    total += phase_increment(gaf, region, t0, phases[i], t1, phases[i + 1], 48);
  }
  const double w = total / (2.0 * kPi);
  const long long rounded = std::llround(w);
  if (std::fabs(w - static_cast<double>(rounded)) > 0.05) {
    throw NumericError("winding number did not converge to an integer");
  }
  return rounded;
}

PointPattern find_zeros(const GafSample& gaf, const Region& region, double spacing) {
  check_gaf(gaf);
  check_region_margin(gaf, region);
  if (!(spacing > 0.0) || spacing > 0.25) {
    throw ValidationError("scan spacing must lie in (0, 0.25]");
  }

  std::vector<cplx> roots =
      dedupe(polish_candidates(gaf, region, scan_minima(gaf, region, spacing)));
  const long long expected = winding_count(gaf, region);
  if (static_cast<long long>(roots.size()) != expected) {
    auto finer = polish_candidates(gaf, region, scan_minima(gaf, region, spacing / 4.0));
    finer.insert(finer.end(), roots.begin(), roots.end());
    roots = dedupe(std::move(finer));
  }
  if (static_cast<long long>(roots.size()) != expected) {
    throw ZeroFindingIncomplete(roots.size(), expected,
                                "zero search found " + std::to_string(roots.size()) +
                                    " roots but the winding count expects " +
                                    std::to_string(expected));
  }

  PointPattern out;
  out.window = region.bounds();
  out.u.reserve(roots.size());
  out.v.reserve(roots.size());
  for (const cplx& z : roots) {
    out.u.push_back(z.real());
    out.v.push_back(z.imag());
  }
  return out;
}

std::vector<double> real_zeros(const GafSample& gaf, double x0, double x1) {
  check_gaf(gaf);
  if (gaf.kind != GafKind::Symmetric) {
    throw ValidationError("real-axis zeros are defined for the symmetric field only");
  }
  if (!(x0 <= x1)) throw ValidationError("interval endpoints are out of order");
  const double limit = gaf.R - 0.5 + 1e-9;
  if (x0 < -limit || x1 > limit) {
    throw OutOfSafeRegion("interval leaves the truncation disk margin (|x| <= R - 0.5)");
  }
  if (x0 == x1) return {};

  const auto f = [&gaf](double x) {
    double p = 0.0;
    for (std::size_t i = gaf.coeffs.size(); i-- > 0;) {
      p = p * x + gaf.coeffs[i].real();
    }
    return p;
  };

  const double step = 0.01;
  std::vector<double> xs;
  for (double x = x0; x < x1; x += step) xs.push_back(x);
  xs.push_back(x1);

  std::vector<double> roots;
  double fa = f(xs[0]);
  if (fa == 0.0) roots.push_back(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double fb = f(xs[i]);
    if (fb == 0.0) {
      roots.push_back(xs[i]);
    } else if (fa != 0.0 && ((fa < 0.0) != (fb < 0.0))) {
      double lo = xs[i - 1], hi = xs[i];
      double flo = fa;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((flo < 0.0) != (fm < 0.0)) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    fa = fb;
  }
  std::vector<double> out;
  for (double rt : roots) {
    if (out.empty() || rt - out.back() > 1e-10) out.push_back(rt);
  }
  return out;
}

}  // namespace zeroscope
