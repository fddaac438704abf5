// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecgbench/types.hpp"

namespace ecgbench::dsp {

enum class FilterKind {
  butterworth_bandpass,
  butterworth_highpass,
  fir_bandpass,
  notch,
  moving_average,
  median,
  savitzky_golay,
};

enum class PhaseMode { zero_phase, causal };
enum class Normalization { zscore, minmax };

std::string_view to_string(FilterKind kind);
std::string_view to_string(PhaseMode mode);
std::string_view to_string(Normalization method);
std::optional<FilterKind> parse_filter_kind(std::string_view name);
std::optional<PhaseMode> parse_phase_mode(std::string_view name);
std::optional<Normalization> parse_normalization(std::string_view name);

/// One filtering stage. Only the parameters relevant to `kind` are read.
struct FilterSpec {
  FilterKind kind = FilterKind::butterworth_bandpass;
  int order = 3;
  double low_hz = 0.5;
  double high_hz = 40.0;
  double cut_hz = 0.5;          // butterworth_highpass
  double notch_hz = 50.0;
  double q = 30.0;              // notch quality factor
  double transition_hz = 1.0;   // fir_bandpass transition width
  int window_len = 5;           // moving_average, median, savitzky_golay
  int poly_order = 2;           // savitzky_golay
  PhaseMode phase = PhaseMode::zero_phase;

  bool operator==(const FilterSpec&) const = default;
};

/// Checks the spec against a sampling rate. Throws BandOutOfRange or InvalidArgument.
void validate_filter(const FilterSpec& spec, double fs);

struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  bool stable() const;
};

/// Second-order sections with a0 normalised to 1.
struct BiquadCascade {
  std::vector<Biquad> sections;
  double gain = 1.0;

  bool stable() const;
  std::complex<double> response(double freq_hz, double fs) const;
  double magnitude(double freq_hz, double fs) const { return std::abs(response(freq_hz, fs)); }
};

struct Band {
  double low_hz = 0.0;
  double high_hz = 0.0;
};

/// Butterworth band-pass via analog prototype, band transform and pre-warped bilinear transform.
BiquadCascade design_butterworth_bandpass(int order, Band band, double fs);
BiquadCascade design_butterworth_highpass(int order, double cut_hz, double fs);
BiquadCascade design_butterworth_lowpass(int order, double cut_hz, double fs);
BiquadCascade design_notch(double notch_hz, double q, double fs);

/// Hamming-windowed sinc band-pass; odd length round(3.3 fs / transition), unity gain at band centre.
std::vector<double> design_fir_bandpass(Band band, double transition_hz, double fs);

/// Savitzky-Golay weights that evaluate, at offset `eval_pos` from the window centre, the
/// least-squares polynomial fitted over a centred window of `window_len` samples.
std::vector<double> savgol_weights(int window_len, int poly_order, int eval_pos);

/// Single causal pass with zero initial state.
Signal lfilter(const BiquadCascade& cascade, std::span<const double> x);
Signal lfilter(std::span<const double> taps, std::span<const double> x);

/// Forward-backward filtering with odd-extension padding and steady-state initial conditions.
/// The forward-backward and backward-forward passes are averaged so the operator is exactly
/// time-reversal symmetric.
Signal filtfilt(const BiquadCascade& cascade, std::span<const double> x);
Signal filtfilt(std::span<const double> taps, std::span<const double> x);

Signal apply_filter(const FilterSpec& spec, std::span<const double> x, double fs);

/// DFT-domain resampling to `target_len` samples.
Signal resample_fourier(std::span<const double> x, std::size_t target_len);

/// Throws ZeroVariance for a constant input.
Signal normalize(std::span<const double> x, Normalization method);

struct PreprocessSettings {
  std::vector<FilterSpec> filters{FilterSpec{}};
  Normalization normalization = Normalization::zscore;
  std::size_t beat_length = 128;
  std::size_t channel = 0;

  bool operator==(const PreprocessSettings&) const = default;
};

/// Filtered single-channel signal ready for detection and segmentation.
struct CleanSignal {
  Provenance provenance;
  double fs = 0.0;
  Signal samples;
  std::vector<std::string> steps;
};

CleanSignal preprocess(const Recording& rec, const PreprocessSettings& cfg);

}  // namespace ecgbench::dsp
