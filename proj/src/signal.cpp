#include "zeroscope/signal.hpp"

#include <algorithm>
#include <cmath>

namespace zeroscope {

namespace {

void check_fs(double fs) {
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    throw ValidationError("sample rate must be positive and finite");
  }
}

}  // namespace

Signal white_noise(std::size_t n, double fs, std::uint64_t seed, SignalKind kind) {
  if (n == 0) throw ValidationError("white_noise: n must be positive");
  check_fs(fs);
  Rng rng(seed);
  const double sigma = std::sqrt(1.0 / fs);
  Signal out;
  out.fs = fs;
  out.kind = kind;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = sigma * rng.gaussian();
    if (kind == SignalKind::Complex) {
      const double im = sigma * rng.gaussian();
      out.samples[i] = {re, im};
    } else {
      out.samples[i] = {re, 0.0};
    }
  }
  return out;
}

Signal linear_chirp(const ChirpSpec& spec, std::size_t n, double fs) {
  if (n == 0) throw ValidationError("linear_chirp: n must be positive");
  check_fs(fs);
  if (!(spec.t_end > spec.t_start)) {
    throw ValidationError("linear_chirp: t_end must exceed t_start");
  }
  if (spec.f0 < 0.0 || spec.f1 < 0.0 || spec.f0 > fs / 2 || spec.f1 > fs / 2) {
    throw ValidationError("linear_chirp: frequencies must lie in [0, fs/2]");
  }
  if (spec.taper_fraction < 0.0 || spec.taper_fraction >= 0.5) {
    throw ValidationError("linear_chirp: taper_fraction must lie in [0, 0.5)");
  }
  const double dur = spec.t_end - spec.t_start;
  const double slope = (spec.f1 - spec.f0) / dur;
  const double taper = spec.taper_fraction * dur;
  Signal out;
  out.fs = fs;
  out.kind = SignalKind::Real;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    if (t < spec.t_start || t > spec.t_end) {
      out.samples[i] = {0.0, 0.0};
      continue;
    }
    const double tau = t - spec.t_start;
    const double phase = 2.0 * kPi * (spec.f0 * tau + 0.5 * slope * tau * tau);
    double amp = 1.0;
    if (taper > 0.0) {
      const double from_edge = std::min(tau, dur - tau);
      if (from_edge < taper) {
        amp = 0.5 * (1.0 - std::cos(kPi * from_edge / taper));
      }
    }
    out.samples[i] = {amp * std::cos(phase), 0.0};
  }
  return out;
}

double support_power(const Signal& signal) {
  double acc = 0.0;
  std::size_t count = 0;
  for (const auto& x : signal.samples) {
    const double p = std::norm(x);
    if (p > 0.0) {
      acc += p;
      ++count;
    }
  }
  if (count == 0) throw ValidationError("support_power: signal is identically zero");
  return acc / static_cast<double>(count);
}

Signal mix_snr(const Signal& signal, const Signal& noise, double snr) {
  if (signal.samples.size() != noise.samples.size()) {
    throw ValidationError("mix_snr: signal and noise lengths differ");
  }
  if (signal.fs != noise.fs) {
    throw ValidationError("mix_snr: signal and noise sample rates differ");
  }
  if (!(snr >= 0.0) || !std::isfinite(snr)) {
    throw ValidationError("mix_snr: snr must be finite and nonnegative");
  }
  const double dt = 1.0 / signal.fs;
  const double c = snr == 0.0 ? 0.0 : std::sqrt(snr * dt / support_power(signal));
  Signal out;
  out.fs = signal.fs;
  out.kind = (signal.kind == SignalKind::Complex || noise.kind == SignalKind::Complex)
                 ? SignalKind::Complex
                 : SignalKind::Real;
  out.samples.resize(signal.samples.size());
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = c * signal.samples[i] + noise.samples[i];
  }
  return out;
}

}  // namespace zeroscope
