// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/represent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "ecgbench/error.hpp"
#include "ecgbench/fft.hpp"

namespace ecgbench::represent {

Image2D stft_spectrogram(std::span<const double> x, double fs, std::size_t win_len, std::size_t hop) {
  require(hop >= 1, ErrorCode::InvalidArgument, "hop must be >= 1");
  require(win_len >= 2 && win_len <= x.size(), ErrorCode::WindowTooLong,
          "window of " + std::to_string(win_len) + " on " + std::to_string(x.size()) + " samples");
  require(fs > 0.0, ErrorCode::InvalidArgument, "sampling rate must be positive");

  // Periodic Hann.
  std::vector<double> window(win_len);
  for (std::size_t i = 0; i < win_len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(win_len));
  }

  Image2D img;
  img.encoding = "stft";
  img.rows = win_len / 2 + 1;
  img.cols = (x.size() - win_len) / hop + 1;
  img.data.assign(img.rows * img.cols, 0.0);
  for (std::size_t r = 0; r < img.rows; ++r) img.row_axis.push_back(static_cast<double>(r) * fs / static_cast<double>(win_len));

  std::vector<double> frame(win_len);
  for (std::size_t c = 0; c < img.cols; ++c) {
    const std::size_t start = c * hop;
    for (std::size_t i = 0; i < win_len; ++i) frame[i] = x[start + i] * window[i];
    const auto spectrum = fft::forward(std::span<const double>(frame));
    for (std::size_t r = 0; r < img.rows; ++r) img.at(r, c) = std::abs(spectrum[r]);
    img.col_axis.push_back((static_cast<double>(start) + static_cast<double>(win_len) / 2.0) / fs);
  }
  return img;
}

Image2D gaf(std::span<const double> x, GafMode mode) {
  require(x.size() >= 2, ErrorCode::InvalidArgument, "gaf needs at least 2 samples");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double span = *hi - *lo;
  require(span > 0.0, ErrorCode::ConstantSignal, "gaf of a constant signal");

  const std::size_t n = x.size();
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = ((x[i] - *hi) + (x[i] - *lo)) / span;
    phi[i] = std::acos(std::clamp(scaled, -1.0, 1.0));
  }

  Image2D img;
  img.encoding = mode == GafMode::summation ? "gasf" : "gadf";
  img.rows = img.cols = n;
  img.data.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    img.row_axis.push_back(static_cast<double>(i));
    for (std::size_t j = 0; j < n; ++j) {
      img.at(i, j) = mode == GafMode::summation ? std::cos(phi[i] + phi[j]) : std::sin(phi[i] - phi[j]);
    }
  }
  img.col_axis = img.row_axis;
  return img;
}

Image2D recurrence_plot(std::span<const double> x, double epsilon) {
  require(epsilon >= 0.0, ErrorCode::InvalidArgument, "epsilon must be >= 0");
  const std::size_t n = x.size();
  Image2D img;
  img.encoding = "recurrence";
  img.rows = img.cols = n;
  img.data.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    img.row_axis.push_back(static_cast<double>(i));
    for (std::size_t j = 0; j < n; ++j) img.at(i, j) = std::abs(x[i] - x[j]) <= epsilon ? 1.0 : 0.0;
  }
  img.col_axis = img.row_axis;
  return img;
}

void write_pgm(const Image2D& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + path.string());
  out << "P5\n" << image.cols << ' ' << image.rows << "\n255\n";
  double lo = 0.0, hi = 0.0;
  if (!image.data.empty()) {
    const auto [a, b] = std::minmax_element(image.data.begin(), image.data.end());
    lo = *a;
    hi = *b;
  }
  const double span = hi - lo;
  for (double v : image.data) {
    const double scaled = span > 0.0 ? (v - lo) / span : 0.0;
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * scaled))));
  }
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace ecgbench::represent
