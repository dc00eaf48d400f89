#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "zeroscope/common.hpp"

namespace zeroscope {

enum class SignalKind { Real, Complex };

// Uniformly sampled signal.  Real signals keep zero imaginary parts so a
// single container serves both kinds; `kind` records which one it is.
struct Signal {
  double fs = 0.0;
  SignalKind kind = SignalKind::Real;
  std::vector<std::complex<double>> samples;

  std::size_t size() const { return samples.size(); }
};

// White Gaussian noise at sample rate fs.  Each real sample has variance
// dt = 1/fs; complex samples get independent real and imaginary parts with
// variance dt each.  Same seed, same samples, regardless of thread count.
Signal white_noise(std::size_t n, double fs, std::uint64_t seed, SignalKind kind);

struct ChirpSpec {
  double f0 = 0.0;            // Hz at t_start
  double f1 = 0.0;            // Hz at t_end
  double t_start = 0.0;       // seconds
  double t_end = 0.0;         // seconds, > t_start
  double taper_fraction = 0;  // cosine taper share of each end, in [0, 0.5)
};

// Real unit-amplitude linear chirp supported on [t_start, t_end], zero
// outside, with a cosine (Tukey) taper over taper_fraction of the support at
// each end.  Frequencies must stay within [0, fs/2].
Signal linear_chirp(const ChirpSpec& spec, std::size_t n, double fs);

// c * signal + noise with c = sqrt(snr * dt / P), where P is the mean power
// of `signal` over its support and dt the per-sample noise variance of white
// noise at fs.  So snr is the ratio of mixed signal power (on the support) to
// the nominal noise variance.  Lengths and sample rates must match; snr >= 0.
Signal mix_snr(const Signal& signal, const Signal& noise, double snr);

// Mean of |x_m|^2 over samples where the signal is nonzero (its support).
double support_power(const Signal& signal);

}  // namespace zeroscope
