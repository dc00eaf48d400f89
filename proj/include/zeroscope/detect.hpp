#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "zeroscope/ppstats.hpp"
#include "zeroscope/signal.hpp"
#include "zeroscope/stft.hpp"

namespace zeroscope {

enum class Statistic { L, F };
enum class Norm { Sup, Two };
enum class NullCurve { Theoretical, PointwiseAverage };

// Monte Carlo rank envelope test configuration.  The observed pattern is
// compared against m simulated white-noise patterns on the same grid; the
// test rejects when the observed deviation exceeds the k-th largest
// simulated one, for an exact level alpha = k / (m + 1) under the null.
struct TestConfig {
  Statistic statistic = Statistic::F;
  Norm norm = Norm::Two;
  double r_min = 0.0;
  double r_max = -1.0;  // < 0 picks half the shorter crop side
  int m = 199;
  int k = 10;
  NullCurve null_curve = NullCurve::PointwiseAverage;
  GridSpec grid;
  std::uint64_t seed = 1;
};

struct EnvelopeTestResult {
  double alpha = 0.0;
  double t_exp = 0.0;
  std::vector<double> t_sorted;  // simulated statistics, descending
  int rank = 0;                  // 1 + number of simulated >= observed
  bool reject = false;
};

// Deviation of an estimated curve from a reference on [r_min, r_max]:
// sup norm of the difference, or the L2 norm by trapezoid rule.  The curves
// must share their r grid; non-finite entries are skipped.
double test_statistic(const FunctionalCurve& s_hat, const FunctionalCurve& s_ref, Norm norm,
                      double r_min, double r_max);

// Envelope test of `data` (a zero pattern on cfg.grid's crop window).
// Null patterns come from real white noise with substream seeds
// cfg.seed + 1 .. cfg.seed + m.
EnvelopeTestResult envelope_test(const PointPattern& data, const TestConfig& cfg,
                                 int threads = 0);

struct EnvelopeRow {
  double r_max = 0.0;
  double t_exp = 0.0;
  double t_k = 0.0;  // k-th largest simulated statistic
};

// Observed and critical statistics as the upper integration limit sweeps a
// grid of r_max values (r_min pinned to 0); the same simulations back every
// row.
std::vector<EnvelopeRow> envelope_curves(const PointPattern& data, const TestConfig& cfg,
                                         const std::vector<double>& r_max_grid,
                                         int threads = 0);

struct PowerEstimate {
  double snr = 0.0;
  double r_max = 0.0;
  int rejections = 0;
  int reps = 0;
  double beta_hat = 0.0;
  double ci_lo = 0.0;  // Clopper-Pearson, Bonferroni-adjusted confidence
  double ci_hi = 0.0;
  int bonferroni_m = 1;
};

// Rejection rate of the envelope test against `signal` mixed into fresh
// white noise at the given snr, for n_rmax_tests equally spaced r_max values
// ending at half the crop side.  Confidence intervals are Clopper-Pearson at
// confidence' = 1 - (1 - confidence) / n_rmax_tests.  With fresh_null, every
// repetition simulates its own null batch; otherwise one batch is shared.
std::vector<PowerEstimate> estimate_power(const Signal& signal, const TestConfig& cfg,
                                          double snr, int reps, double confidence,
                                          int n_rmax_tests, bool fresh_null = true,
                                          int threads = 0);

// Exact binomial confidence interval.
std::pair<double, double> clopper_pearson(int successes, int trials, double confidence);

}  // namespace zeroscope
