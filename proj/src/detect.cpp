#include "zeroscope/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zeroscope/theory.hpp"

namespace zeroscope {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double resolve_r_max(const TestConfig& cfg) {
  const double half = 0.5 * crop_window(cfg.grid).shorter_side();
  const double r_max = cfg.r_max < 0.0 ? half : cfg.r_max;
  if (!(cfg.r_min >= 0.0)) throw ValidationError("r_min must be nonnegative");
  if (!(r_max > cfg.r_min)) throw ValidationError("r_max must exceed r_min");
  if (r_max > half + 1e-9) {
    throw ValidationError("r_max exceeds half the shorter crop side");
  }
  return r_max;
}

void check_cfg(const TestConfig& cfg) {
  if (cfg.m < 1) throw ValidationError("the test needs at least one simulation");
  if (cfg.k < 1 || cfg.k > cfg.m) throw ValidationError("rank k must lie in [1, m]");
  resolve_r_max(cfg);
}

void check_data_window(const PointPattern& data, const GridSpec& grid) {
  const Window crop = crop_window(grid);
  const double tol = 1e-6;
  if (std::fabs(data.window.u0 - crop.u0) > tol || std::fabs(data.window.u1 - crop.u1) > tol ||
      std::fabs(data.window.v0 - crop.v0) > tol || std::fabs(data.window.v1 - crop.v1) > tol) {
    throw ValidationError("pattern window does not match the grid's crop rectangle");
  }
}

FunctionalCurve stat_curve(const PointPattern& p, Statistic stat,
                           const std::vector<double>& r) {
  return stat == Statistic::L ? estimate_L(p, r) : estimate_F(p, r, 0.05);
}

PointPattern null_pattern(const TestConfig& cfg, std::uint64_t seed) {
  const Signal noise = white_noise(cfg.grid.N + 1, cfg.grid.fs, seed, SignalKind::Real);
  return extract_zeros(spectrogram(noise, cfg.grid, 1));
}

std::vector<FunctionalCurve> null_curves(const TestConfig& cfg, std::uint64_t first_seed,
                                         const std::vector<double>& r, unsigned threads) {
  std::vector<FunctionalCurve> sims(cfg.m);
  parallel_chunks(sims.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      sims[i] = stat_curve(null_pattern(cfg, first_seed + i), cfg.statistic, r);
    }
  });
  return sims;
}

FunctionalCurve reference_curve(const TestConfig& cfg, const std::vector<double>& r,
                                const FunctionalCurve& data_curve,
                                const std::vector<FunctionalCurve>& sims) {
  FunctionalCurve ref;
  ref.statistic = data_curve.statistic;
  ref.correction = "none";
  ref.r = r;
  ref.value.assign(r.size(), 0.0);
  if (cfg.null_curve == NullCurve::Theoretical) {
    if (cfg.statistic == Statistic::F) {
      throw Unsupported(
          "no closed-form empty-space reference; use the pointwise-average null");
    }
    ref.value = K0_L0(PointProcess::Gaf, r).second.value;
    return ref;
  }
  for (std::size_t j = 0; j < r.size(); ++j) {
    double acc = data_curve.value[j];
    std::size_t count = std::isfinite(acc) ? 1 : 0;
    if (count == 0) acc = 0.0;
    for (const auto& c : sims) {
      if (std::isfinite(c.value[j])) {
        acc += c.value[j];
        ++count;
      }
    }
    ref.value[j] = count == 0 ? kNaN : acc / static_cast<double>(count);
  }
  return ref;
}

// regularized incomplete beta by Lentz's continued fraction
double betacf(double a, double b, double x) {
  constexpr double eps = 1e-15, fpmin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw NumericError("incomplete beta failed to converge");
}

double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double beta_quantile(double q, double a, double b) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (betai(a, b, mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double test_statistic(const FunctionalCurve& s_hat, const FunctionalCurve& s_ref, Norm norm,
                      double r_min, double r_max) {
  if (s_hat.r.size() != s_ref.r.size() || !std::equal(s_hat.r.begin(), s_hat.r.end(),
                                                      s_ref.r.begin())) {
    throw ValidationError("curves are on different r grids");
  }
  if (!(r_min >= 0.0) || !(r_max > r_min)) {
    throw ValidationError("test statistic needs 0 <= r_min < r_max");
  }
  std::size_t lo = 0, hi = s_hat.r.size();
  while (lo < hi && s_hat.r[lo] < r_min - 1e-12) ++lo;
  while (hi > lo && s_hat.r[hi - 1] > r_max + 1e-12) --hi;
  if (hi - lo < 2) {
    throw ValidationError("integration range covers fewer than two grid points");
  }
  if (norm == Norm::Sup) {
    double best = -1.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = std::fabs(s_hat.value[i] - s_ref.value[i]);
      if (std::isfinite(d) && d > best) best = d;
    }
    if (best < 0.0) throw NumericError("no finite curve values in the test range");
    return best;
  }
  double acc = 0.0;
  bool any = false;
  for (std::size_t i = lo; i + 1 < hi; ++i) {
    const double d0 = s_hat.value[i] - s_ref.value[i];
    const double d1 = s_hat.value[i + 1] - s_ref.value[i + 1];
    if (!std::isfinite(d0) || !std::isfinite(d1)) continue;
    acc += 0.5 * (d0 * d0 + d1 * d1) * (s_hat.r[i + 1] - s_hat.r[i]);
    any = true;
  }
  if (!any) throw NumericError("no finite curve values in the test range");
  return std::sqrt(acc);
}

EnvelopeTestResult envelope_test(const PointPattern& data, const TestConfig& cfg,
                                 int threads) {
  check_cfg(cfg);
  check_data_window(data, cfg.grid);
  const double r_max = resolve_r_max(cfg);
  const std::vector<double> r = default_r_grid(crop_window(cfg.grid));
  const unsigned nthreads = resolve_threads(threads);

  const FunctionalCurve data_curve = stat_curve(data, cfg.statistic, r);
  const std::vector<FunctionalCurve> sims = null_curves(cfg, cfg.seed + 1, r, nthreads);
  const FunctionalCurve ref = reference_curve(cfg, r, data_curve, sims);

  EnvelopeTestResult res;
  res.alpha = static_cast<double>(cfg.k) / static_cast<double>(cfg.m + 1);
  res.t_exp = test_statistic(data_curve, ref, cfg.norm, cfg.r_min, r_max);
  res.t_sorted.resize(sims.size());
  for (std::size_t i = 0; i < sims.size(); ++i) {
    res.t_sorted[i] = test_statistic(sims[i], ref, cfg.norm, cfg.r_min, r_max);
  }
  std::sort(res.t_sorted.begin(), res.t_sorted.end(), std::greater<>());
  res.rank = 1;
  for (double t : res.t_sorted) {
    if (t >= res.t_exp) ++res.rank;
  }
  res.reject = res.t_exp > res.t_sorted[cfg.k - 1];
  return res;
}

std::vector<EnvelopeRow> envelope_curves(const PointPattern& data, const TestConfig& cfg,
                                         const std::vector<double>& r_max_grid,
                                         int threads) {
  check_cfg(cfg);
  check_data_window(data, cfg.grid);
  if (r_max_grid.empty()) throw ValidationError("r_max grid is empty");
  const double half = 0.5 * crop_window(cfg.grid).shorter_side();
  for (std::size_t i = 0; i < r_max_grid.size(); ++i) {
    if (!(r_max_grid[i] > 0.0) || r_max_grid[i] > half + 1e-9) {
      throw ValidationError("r_max grid values must lie in (0, half crop side]");
    }
    if (i > 0 && !(r_max_grid[i] > r_max_grid[i - 1])) {
      throw ValidationError("r_max grid must be strictly increasing");
    }
  }
  const std::vector<double> r = default_r_grid(crop_window(cfg.grid));
  const unsigned nthreads = resolve_threads(threads);

  const FunctionalCurve data_curve = stat_curve(data, cfg.statistic, r);
  const std::vector<FunctionalCurve> sims = null_curves(cfg, cfg.seed + 1, r, nthreads);
  const FunctionalCurve ref = reference_curve(cfg, r, data_curve, sims);

  std::vector<EnvelopeRow> rows;
  rows.reserve(r_max_grid.size());
  std::vector<double> ts(sims.size());
  for (double rm : r_max_grid) {
    EnvelopeRow row;
    row.r_max = rm;
    row.t_exp = test_statistic(data_curve, ref, cfg.norm, 0.0, rm);
    for (std::size_t i = 0; i < sims.size(); ++i) {
      ts[i] = test_statistic(sims[i], ref, cfg.norm, 0.0, rm);
    }
    std::nth_element(ts.begin(), ts.begin() + (cfg.k - 1), ts.end(), std::greater<>());
    row.t_k = ts[cfg.k - 1];
    rows.push_back(row);
  }
  return rows;
}

std::vector<PowerEstimate> estimate_power(const Signal& signal, const TestConfig& cfg,
                                          double snr, int reps, double confidence,
                                          int n_rmax_tests, bool fresh_null, int threads) {
  check_cfg(cfg);
  if (reps < 1) throw ValidationError("power estimation needs at least one repetition");
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw ValidationError("confidence must lie in (0, 1)");
  }
  if (n_rmax_tests < 1) throw ValidationError("n_rmax_tests must be positive");
  if (signal.samples.size() < cfg.grid.N + 1) {
    throw ValidationError("signal shorter than the grid needs");
  }
  const double half = 0.5 * crop_window(cfg.grid).shorter_side();
  std::vector<double> rmaxes(n_rmax_tests);
  for (int j = 0; j < n_rmax_tests; ++j) {
    rmaxes[j] = half * static_cast<double>(j + 1) / static_cast<double>(n_rmax_tests);
  }
  const std::vector<double> r = default_r_grid(crop_window(cfg.grid));
  const unsigned nthreads = resolve_threads(threads);

  std::vector<FunctionalCurve> shared_sims;
  if (!fresh_null) {
    shared_sims = null_curves(cfg, cfg.seed + 1, r, nthreads);
  }

  const std::size_t nr = rmaxes.size();
  std::vector<std::uint8_t> rejected(static_cast<std::size_t>(reps) * nr, 0);
  parallel_chunks(static_cast<std::size_t>(reps), nthreads, [&](std::size_t b, std::size_t e) {
    for (std::size_t rep = b; rep < e; ++rep) {
      const std::uint64_t data_seed =
          fresh_null ? cfg.seed + rep * (cfg.m + 1)
                     : cfg.seed + static_cast<std::uint64_t>(cfg.m) + 1 + rep;
      const Signal noise =
          white_noise(cfg.grid.N + 1, cfg.grid.fs, data_seed, SignalKind::Real);
      const Signal mixed = mix_snr(signal, noise, snr);
      const PointPattern pattern = extract_zeros(spectrogram(mixed, cfg.grid, 1));
      const FunctionalCurve data_curve = stat_curve(pattern, cfg.statistic, r);
      std::vector<FunctionalCurve> local_sims;
      if (fresh_null) local_sims = null_curves(cfg, data_seed + 1, r, 1);
      const std::vector<FunctionalCurve>& sims = fresh_null ? local_sims : shared_sims;
      const FunctionalCurve ref = reference_curve(cfg, r, data_curve, sims);
      std::vector<double> ts(sims.size());
      for (std::size_t j = 0; j < nr; ++j) {
        const double t_exp = test_statistic(data_curve, ref, cfg.norm, cfg.r_min, rmaxes[j]);
        for (std::size_t i = 0; i < sims.size(); ++i) {
          ts[i] = test_statistic(sims[i], ref, cfg.norm, cfg.r_min, rmaxes[j]);
        }
        std::nth_element(ts.begin(), ts.begin() + (cfg.k - 1), ts.end(), std::greater<>());
        rejected[rep * nr + j] = t_exp > ts[cfg.k - 1] ? 1 : 0;
      }
    }
  });

  const double adj_confidence = 1.0 - (1.0 - confidence) / n_rmax_tests;
  std::vector<PowerEstimate> out(nr);
  for (std::size_t j = 0; j < nr; ++j) {
    int count = 0;
    for (int rep = 0; rep < reps; ++rep) count += rejected[rep * nr + j];
    PowerEstimate& p = out[j];
    p.snr = snr;
    p.r_max = rmaxes[j];
    p.rejections = count;
    p.reps = reps;
    p.beta_hat = static_cast<double>(count) / reps;
    std::tie(p.ci_lo, p.ci_hi) = clopper_pearson(count, reps, adj_confidence);
    p.bonferroni_m = n_rmax_tests;
  }
  return out;
}

std::pair<double, double> clopper_pearson(int successes, int trials, double confidence) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw ValidationError("invalid binomial counts");
  }
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw ValidationError("confidence must lie in (0, 1)");
  }
  const double alpha = 1.0 - confidence;
  const double s = successes, n = trials;
  double lo = 0.0, hi = 1.0;
  if (successes > 0) {
    lo = beta_quantile(0.5 * alpha, s, n - s + 1.0);
  }
  if (successes < trials) {
    hi = beta_quantile(1.0 - 0.5 * alpha, s + 1.0, n - s);
  }
  return {lo, hi};
}

}  // namespace zeroscope
