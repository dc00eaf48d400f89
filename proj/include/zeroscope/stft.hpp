#pragma once

#include <cstddef>
#include <vector>

#include "zeroscope/ppstats.hpp"
#include "zeroscope/signal.hpp"

namespace zeroscope {

// Raster geometry for the Gaussian-window spectrogram.  Time step and
// frequency step are tied through fs = a * sqrt(K), which renders the zero
// set isotropic in the (u, v) = (t * a, f / a) plane; raster site (n, k)
// sits at (n / sqrt(K), k / sqrt(K)) there.
struct GridSpec {
  std::size_t N = 0;  // frames 0..N
  std::size_t K = 0;  // FFT length, even; bins 0..K/2 kept
  double a = 1.0;     // window width parameter
  double fs = 0.0;    // samples per second, = a * sqrt(K)

  static GridSpec from_a(std::size_t N, std::size_t K, double a);
  static GridSpec from_fs(std::size_t N, std::size_t K, double fs);

  double dt() const { return 1.0 / fs; }
  double dnu() const { return fs / static_cast<double>(K); }

  // Lowest cropped bin: first row at or above one vertical unit, clear of
  // the time-axis depletion strip.
  std::size_t crop_k0() const;
  std::size_t crop_k1() const { return K / 2; }
  std::size_t crop_n0() const { return K / 2; }
  std::size_t crop_n1() const { return N - K / 2; }
};

struct TFPoint {
  double u = 0.0;
  double v = 0.0;
};

// Raster site -> isotropic plane coordinates.  n <= N, k <= K/2.
TFPoint sample_to_tf(std::size_t n, std::size_t k, const GridSpec& grid);

// Crop rectangle in plane coordinates.
Window crop_window(const GridSpec& grid);

struct Spectrogram {
  GridSpec grid;
  std::vector<double> values;  // (N+1) x (K/2+1) row-major, frame-major

  double at(std::size_t n, std::size_t k) const {
    return values[n * (grid.K / 2 + 1) + k];
  }
};

// Gaussian-window spectrogram of the first N+1 samples.  The window is the
// sampled unit-energy Gaussian; values carry the dt^2 scaling that matches
// the continuous transform of a band-limited interpolant.  Requires
// signal length >= N+1 and signal fs equal to grid fs.
Spectrogram spectrogram(const Signal& signal, const GridSpec& grid, int threads = 0);

// Strict local minima of the raster over its interior, kept if they fall in
// the crop rectangle; returned in plane coordinates with the crop rectangle
// as the observation window.
PointPattern extract_zeros(const Spectrogram& spg);

// As above but without the crop filter, windowed to the full raster extent.
PointPattern extract_zeros_full(const Spectrogram& spg);

// h_k sampled on the grid (length N+1), centred mid-raster, scaled to unit
// energy at rate fs.  Its spectrogram matches the closed form.
Signal sampled_hermite(int k, const GridSpec& grid);

}  // namespace zeroscope
