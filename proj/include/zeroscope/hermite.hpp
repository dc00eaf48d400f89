#pragma once

#include <complex>
#include <vector>

#include "zeroscope/common.hpp"

namespace zeroscope {

// Orthonormal Hermite functions h_k for the convention in which
// h_0(x) = 2^{1/4} exp(-pi x^2) and
// h_{k+1}(x) = x sqrt(4 pi/(k+1)) h_k(x) - sqrt(k/(k+1)) h_{k-1}(x).
// Stable in double for k <= 64 on |x| <= 6.

double hermite_eval(int k, double x);
std::vector<double> hermite_eval(int k, const std::vector<double>& xs);

// Bargmann transform of h_k: pi^{k/2} z^k / sqrt(k!).
std::complex<double> bargmann_hermite(int k, std::complex<double> z);

// Gaussian-window short-time transform of h_k at (u, v):
// e^{-i pi u v} e^{-pi (u^2+v^2)/2} pi^{k/2} (u - i v)^k / sqrt(k!).
std::complex<double> hermite_stft_closed_form(int k, double u, double v);

}  // namespace zeroscope
