// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ecgbench::represent {

/// Row-major real image.
struct Image2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  std::string encoding;
  std::vector<double> row_axis;  // frequency bins (Hz) or sample indices
  std::vector<double> col_axis;  // frame times (s) or sample indices

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

enum class GafMode { summation, difference };

/// Hann-windowed magnitude STFT: rows = win_len/2 + 1 bins, cols = floor((n - win_len)/hop) + 1.
Image2D stft_spectrogram(std::span<const double> x, double fs, std::size_t win_len, std::size_t hop);

/// Gramian angular field after min-max rescaling to [-1, 1]. Throws ConstantSignal.
Image2D gaf(std::span<const double> x, GafMode mode);

/// Recurrence plot of scalar states (no delay embedding): R_ij = 1 iff |x_i - x_j| <= epsilon.
Image2D recurrence_plot(std::span<const double> x, double epsilon);

/// 8-bit binary PGM (P5) after per-image min-max scaling.
void write_pgm(const Image2D& image, const std::filesystem::path& path);

}  // namespace ecgbench::represent
