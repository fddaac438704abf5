// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ecgbench::fft {

using Complex = std::complex<double>;

/// Unnormalised forward DFT, X[k] = sum x[n] exp(-2 pi i k n / N). Backed by FFTW; safe to call
/// from several threads.
std::vector<Complex> forward(std::span<const Complex> x);
std::vector<Complex> forward(std::span<const double> x);

/// Unnormalised inverse DFT (no 1/N factor).
std::vector<Complex> inverse(std::span<const Complex> x);

}  // namespace ecgbench::fft
