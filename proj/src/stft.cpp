#include "zeroscope/stft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "zeroscope/hermite.hpp"

namespace zeroscope {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_grid(const GridSpec& g) {
  if (g.K < 16 || g.K % 2 != 0) throw ValidationError("K must be even and at least 16");
  if (g.N < g.K) throw ValidationError("N must be at least K");
  if (!(g.a > 0.0) || !std::isfinite(g.a)) throw ValidationError("a must be positive");
  if (!(g.fs > 0.0) || !std::isfinite(g.fs)) throw ValidationError("fs must be positive");
  const double want = g.a * std::sqrt(static_cast<double>(g.K));
  if (std::fabs(g.fs - want) > 1e-9 * want) {
    throw ValidationError("grid requires fs = a * sqrt(K)");
  }
}

}  // namespace

GridSpec GridSpec::from_a(std::size_t N, std::size_t K, double a) {
  GridSpec g;
  g.N = N;
  g.K = K;
  g.a = a;
  g.fs = a * std::sqrt(static_cast<double>(K));
  check_grid(g);
  return g;
}

GridSpec GridSpec::from_fs(std::size_t N, std::size_t K, double fs) {
  GridSpec g;
  g.N = N;
  g.K = K;
  g.fs = fs;
  g.a = fs / std::sqrt(static_cast<double>(K));
  check_grid(g);
  return g;
}

std::size_t GridSpec::crop_k0() const {
  const double ell = a * std::sqrt(static_cast<double>(K));
  return static_cast<std::size_t>(std::ceil(ell - 1e-9));
}

TFPoint sample_to_tf(std::size_t n, std::size_t k, const GridSpec& grid) {
  check_grid(grid);
  if (n > grid.N || k > grid.K / 2) {
    throw ValidationError("raster index outside the grid");
  }
  const double s = std::sqrt(static_cast<double>(grid.K));
  return {static_cast<double>(n) / s, static_cast<double>(k) / s};
}

Window crop_window(const GridSpec& grid) {
  check_grid(grid);
  const double s = std::sqrt(static_cast<double>(grid.K));
  Window w;
  w.u0 = static_cast<double>(grid.crop_n0()) / s;
  w.u1 = static_cast<double>(grid.crop_n1()) / s;
  w.v0 = static_cast<double>(grid.crop_k0()) / s;
  w.v1 = static_cast<double>(grid.crop_k1()) / s;
  return w;
}

Spectrogram spectrogram(const Signal& signal, const GridSpec& grid, int threads) {
  check_grid(grid);
  if (signal.samples.size() < grid.N + 1) {
    throw ValidationError("signal shorter than the grid needs (N+1 samples)");
  }
  if (std::fabs(signal.fs - grid.fs) > 1e-9 * grid.fs) {
    throw ValidationError("signal sample rate does not match the grid");
  }

  const std::size_t K = grid.K;
  const std::size_t N = grid.N;
  const std::size_t nk = K / 2 + 1;
  const double dt = grid.dt();
  const double dt2 = dt * dt;

  std::vector<double> window(K);
  const double amp = std::pow(2.0 * grid.a * grid.a, 0.25);
  for (std::size_t j = 0; j < K; ++j) {
    const double js = static_cast<double>(j) - static_cast<double>(K) / 2.0;
    window[j] = amp * std::exp(-kPi * js * js / static_cast<double>(K));
  }

  Spectrogram out;
  out.grid = grid;
  out.values.resize((N + 1) * nk);

  fftw_plan plan;
  fftw_complex* pin;
  fftw_complex* pout;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    pin = fftw_alloc_complex(K);
    pout = fftw_alloc_complex(K);
    plan = fftw_plan_dft_1d(static_cast<int>(K), pin, pout, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw NumericError("FFT plan creation failed");

  const unsigned nthreads = resolve_threads(threads);
  parallel_chunks(N + 1, nthreads, [&](std::size_t begin, std::size_t end) {
    fftw_complex* in;
    fftw_complex* out_buf;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      in = fftw_alloc_complex(K);
      out_buf = fftw_alloc_complex(K);
    }
    for (std::size_t n = begin; n < end; ++n) {
      for (std::size_t j = 0; j < K; ++j) {
        const long long m = static_cast<long long>(n) - static_cast<long long>(K / 2) +
                            static_cast<long long>(j);
        if (m < 0 || m > static_cast<long long>(N)) {
          in[j][0] = 0.0;
          in[j][1] = 0.0;
        } else {
          const auto& x = signal.samples[static_cast<std::size_t>(m)];
          in[j][0] = x.real() * window[j];
          in[j][1] = x.imag() * window[j];
        }
      }
      fftw_execute_dft(plan, in, out_buf);
      double* row = &out.values[n * nk];
      for (std::size_t k = 0; k < nk; ++k) {
        row[k] = dt2 * (out_buf[k][0] * out_buf[k][0] + out_buf[k][1] * out_buf[k][1]);
      }
    }
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_free(in);
      fftw_free(out_buf);
    }
  });

  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(pin);
    fftw_free(pout);
  }
  return out;
}

namespace {

PointPattern zeros_impl(const Spectrogram& spg, bool crop) {
  const GridSpec& g = spg.grid;
  check_grid(g);
  const std::size_t nk = g.K / 2 + 1;
  if (spg.values.size() != (g.N + 1) * nk) {
    throw ValidationError("spectrogram values do not match its grid");
  }
  std::size_t n_lo = 1, n_hi = g.N - 1, k_lo = 1, k_hi = g.K / 2 - 1;
  Window win;
  const double s = std::sqrt(static_cast<double>(g.K));
  if (crop) {
    if (g.crop_k0() + 2 > g.crop_k1() || g.crop_n0() + 2 > g.crop_n1()) {
      throw ValidationError("crop region smaller than 3x3 raster sites");
    }
    n_lo = std::max(n_lo, g.crop_n0());
    n_hi = std::min(n_hi, g.crop_n1());
    k_lo = std::max(k_lo, g.crop_k0());
    k_hi = std::min(k_hi, g.crop_k1());
    win = crop_window(g);
  } else {
    win = Window{0.0, static_cast<double>(g.N) / s, 0.0, static_cast<double>(g.K / 2) / s};
  }

  PointPattern out;
  out.window = win;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      const double c = spg.at(n, k);
      bool is_min = true;
      for (int dn = -1; dn <= 1 && is_min; ++dn) {
        for (int dk = -1; dk <= 1; ++dk) {
          if (dn == 0 && dk == 0) continue;
          if (!(c < spg.at(n + dn, k + dk))) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) {
        out.u.push_back(static_cast<double>(n) / s);
        out.v.push_back(static_cast<double>(k) / s);
      }
    }
  }
  return out;
}

}  // namespace

PointPattern extract_zeros(const Spectrogram& spg) { return zeros_impl(spg, true); }

PointPattern extract_zeros_full(const Spectrogram& spg) { return zeros_impl(spg, false); }

Signal sampled_hermite(int k, const GridSpec& grid) {
  check_grid(grid);
  Signal out;
  out.fs = grid.fs;
  out.kind = SignalKind::Real;
  out.samples.resize(grid.N + 1);
  const double s = std::sqrt(static_cast<double>(grid.K));
  const double amp = std::sqrt(grid.a);
  const double centre = static_cast<double>(grid.N) / 2.0;
  for (std::size_t m = 0; m <= grid.N; ++m) {
    const double x = (static_cast<double>(m) - centre) / s;
    out.samples[m] = {amp * hermite_eval(k, x), 0.0};
  }
  return out;
}

}  // namespace zeroscope
