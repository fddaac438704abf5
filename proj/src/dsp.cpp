// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ecgbench/error.hpp"
#include "ecgbench/fft.hpp"

namespace ecgbench::dsp {

using Complex = std::complex<double>;
using std::numbers::pi;

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::butterworth_bandpass: return "butterworth_bandpass";
    case FilterKind::butterworth_highpass: return "butterworth_highpass";
    case FilterKind::fir_bandpass: return "fir_bandpass";
    case FilterKind::notch: return "notch";
    case FilterKind::moving_average: return "moving_average";
    case FilterKind::median: return "median";
    case FilterKind::savitzky_golay: return "savitzky_golay";
  }
  return "?";
}

std::string_view to_string(PhaseMode mode) {
  return mode == PhaseMode::zero_phase ? "zero_phase" : "causal";
}

std::string_view to_string(Normalization method) {
  return method == Normalization::zscore ? "zscore" : "minmax";
}

std::optional<FilterKind> parse_filter_kind(std::string_view name) {
  for (auto k : {FilterKind::butterworth_bandpass, FilterKind::butterworth_highpass,
                 FilterKind::fir_bandpass, FilterKind::notch, FilterKind::moving_average,
                 FilterKind::median, FilterKind::savitzky_golay}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<PhaseMode> parse_phase_mode(std::string_view name) {
  if (name == "zero_phase") return PhaseMode::zero_phase;
  if (name == "causal") return PhaseMode::causal;
  return std::nullopt;
}

std::optional<Normalization> parse_normalization(std::string_view name) {
  if (name == "zscore") return Normalization::zscore;
  if (name == "minmax") return Normalization::minmax;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Design

bool Biquad::stable() const { return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2; }

bool BiquadCascade::stable() const {
  return std::all_of(sections.begin(), sections.end(), [](const Biquad& s) { return s.stable(); });
}

Complex BiquadCascade::response(double freq_hz, double fs) const {
  const Complex zinv = std::polar(1.0, -2.0 * pi * freq_hz / fs);
  Complex h = gain;
  for (const auto& s : sections) {
    h *= (s.b0 + zinv * (s.b1 + zinv * s.b2)) / (1.0 + zinv * (s.a1 + zinv * s.a2));
  }
  return h;
}

namespace {

struct Zpk {
  std::vector<Complex> zeros;
  std::vector<Complex> poles;
  double gain = 1.0;
};

Zpk butterworth_prototype(int order) {
  Zpk proto;
  for (int k = 1; k <= order; ++k) {
    proto.poles.push_back(std::polar(1.0, pi * (2.0 * k + order - 1.0) / (2.0 * order)));
  }
  return proto;
}

Complex product(const std::vector<Complex>& v, Complex shift, double sign) {
  Complex p = 1.0;
  for (auto z : v) p *= shift + sign * z;
  return p;
}

Zpk bilinear(const Zpk& analog, double fs) {
  const double fs2 = 2.0 * fs;
  Zpk digital;
  for (auto z : analog.zeros) digital.zeros.push_back((fs2 + z) / (fs2 - z));
  for (auto p : analog.poles) digital.poles.push_back((fs2 + p) / (fs2 - p));
  while (digital.zeros.size() < digital.poles.size()) digital.zeros.emplace_back(-1.0, 0.0);
  digital.gain = analog.gain *
                 (product(analog.zeros, fs2, -1.0) / product(analog.poles, fs2, -1.0)).real();
  return digital;
}

double prewarp(double freq_hz, double fs) { return 2.0 * fs * std::tan(pi * freq_hz / fs); }

// Conjugate pairs first, then real poles two at a time; zeros at +1 and elsewhere interleaved so
// band-pass sections each get one zero at DC and one at Nyquist.
BiquadCascade to_sections(const Zpk& zpk) {
  constexpr double tol = 1e-12;
  std::vector<std::vector<Complex>> pole_groups;
  std::vector<Complex> real_poles;
  for (auto p : zpk.poles) {
    if (std::abs(p.imag()) <= tol * std::max(1.0, std::abs(p))) {
      real_poles.emplace_back(p.real(), 0.0);
    } else if (p.imag() > 0.0) {
      pole_groups.push_back({p, std::conj(p)});
    }
  }
  std::sort(real_poles.begin(), real_poles.end(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  for (std::size_t i = 0; i < real_poles.size(); i += 2) {
    std::vector<Complex> g{real_poles[i]};
    if (i + 1 < real_poles.size()) g.push_back(real_poles[i + 1]);
    pole_groups.push_back(std::move(g));
  }

  std::vector<Complex> at_dc, others;
  for (auto z : zpk.zeros) {
    (std::abs(z - Complex(1.0, 0.0)) < 1e-9 ? at_dc : others).push_back(z);
  }
  std::vector<Complex> zeros;
  for (std::size_t i = 0; i < std::max(at_dc.size(), others.size()); ++i) {
    if (i < at_dc.size()) zeros.push_back(at_dc[i]);
    if (i < others.size()) zeros.push_back(others[i]);
  }

  BiquadCascade cascade;
  cascade.gain = zpk.gain;
  std::size_t zi = 0;
  for (const auto& group : pole_groups) {
    Biquad s;
    if (group.size() == 2) {
      s.a1 = -(group[0] + group[1]).real();
      s.a2 = (group[0] * group[1]).real();
    } else {
      s.a1 = -group[0].real();
      s.a2 = 0.0;
    }
    const std::size_t take = std::min<std::size_t>(group.size(), zeros.size() - zi);
    if (take == 2) {
      s.b1 = -(zeros[zi] + zeros[zi + 1]).real();
      s.b2 = (zeros[zi] * zeros[zi + 1]).real();
    } else if (take == 1) {
      s.b1 = -zeros[zi].real();
    }
    zi += take;
    cascade.sections.push_back(s);
  }
  return cascade;
}

void check_order(int order) {
  require(order >= 1 && order <= 8, ErrorCode::InvalidArgument,
          "butterworth order must be in [1, 8], got " + std::to_string(order));
}

void check_edge(double f, double fs, const char* what) {
  require(fs > 0.0, ErrorCode::InvalidArgument, "sampling rate must be positive");
  require(f > 0.0 && f < fs / 2.0, ErrorCode::BandOutOfRange,
          std::string(what) + " " + std::to_string(f) + " Hz outside (0, " +
              std::to_string(fs / 2.0) + ") Hz");
}

}  // namespace

BiquadCascade design_butterworth_bandpass(int order, Band band, double fs) {
  check_order(order);
  check_edge(band.low_hz, fs, "low edge");
  check_edge(band.high_hz, fs, "high edge");
  require(band.low_hz < band.high_hz, ErrorCode::BandOutOfRange, "low edge must be below high edge");

  const double wl = prewarp(band.low_hz, fs);
  const double wh = prewarp(band.high_hz, fs);
  const double bw = wh - wl;
  const double w0 = std::sqrt(wl * wh);

  const Zpk proto = butterworth_prototype(order);
  Zpk analog;
  for (auto p : proto.poles) {
    const Complex scaled = p * (bw / 2.0);
    const Complex root = std::sqrt(scaled * scaled - w0 * w0);
    analog.poles.push_back(scaled + root);
    analog.poles.push_back(scaled - root);
  }
  analog.zeros.assign(static_cast<std::size_t>(order), Complex(0.0, 0.0));
  analog.gain = proto.gain * std::pow(bw, order);
  return to_sections(bilinear(analog, fs));
}

BiquadCascade design_butterworth_highpass(int order, double cut_hz, double fs) {
  check_order(order);
  check_edge(cut_hz, fs, "cutoff");
  const double wc = prewarp(cut_hz, fs);
  const Zpk proto = butterworth_prototype(order);
  Zpk analog;
  for (auto p : proto.poles) analog.poles.push_back(wc / p);
  analog.zeros.assign(static_cast<std::size_t>(order), Complex(0.0, 0.0));
  analog.gain = proto.gain / product(proto.poles, 0.0, -1.0).real();
  return to_sections(bilinear(analog, fs));
}

BiquadCascade design_butterworth_lowpass(int order, double cut_hz, double fs) {
  check_order(order);
  check_edge(cut_hz, fs, "cutoff");
  const double wc = prewarp(cut_hz, fs);
  const Zpk proto = butterworth_prototype(order);
  Zpk analog;
  for (auto p : proto.poles) analog.poles.push_back(wc * p);
  analog.gain = proto.gain * std::pow(wc, order);
  return to_sections(bilinear(analog, fs));
}

BiquadCascade design_notch(double notch_hz, double q, double fs) {
  check_edge(notch_hz, fs, "notch frequency");
  require(q > 0.0, ErrorCode::InvalidArgument, "notch q must be positive");
  const double w0 = 2.0 * pi * notch_hz / fs;
  const double beta = std::tan(w0 / q / 2.0);
  const double g = 1.0 / (1.0 + beta);
  Biquad s;
  s.b0 = 1.0;
  s.b1 = -2.0 * std::cos(w0);
  s.b2 = 1.0;
  s.a1 = -2.0 * g * std::cos(w0);
  s.a2 = 2.0 * g - 1.0;
  return BiquadCascade{{s}, g};
}

std::vector<double> design_fir_bandpass(Band band, double transition_hz, double fs) {
  check_edge(band.low_hz, fs, "low edge");
  check_edge(band.high_hz, fs, "high edge");
  require(band.low_hz < band.high_hz, ErrorCode::BandOutOfRange, "low edge must be below high edge");
  require(transition_hz > 0.0, ErrorCode::InvalidArgument, "transition width must be positive");

  auto n = static_cast<std::size_t>(std::lround(3.3 * fs / transition_hz));
  if (n % 2 == 0) ++n;
  n = std::max<std::size_t>(n, 3);
  const double mid = (static_cast<double>(n) - 1.0) / 2.0;
  const double fl = band.low_hz / fs;
  const double fh = band.high_hz / fs;
  auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(pi * x) / (pi * x); };

  std::vector<double> taps(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = static_cast<double>(i) - mid;
    const double w = 0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(i) / (static_cast<double>(n) - 1.0));
    taps[i] = w * (2.0 * fh * sinc(2.0 * fh * m) - 2.0 * fl * sinc(2.0 * fl * m));
  }
  const double fc = 0.5 * (band.low_hz + band.high_hz);
  Complex h = 0.0;
  for (std::size_t i = 0; i < n; ++i) h += taps[i] * std::polar(1.0, -2.0 * pi * fc / fs * static_cast<double>(i));
  const double scale = 1.0 / std::abs(h);
  for (auto& t : taps) t *= scale;
  return taps;
}

std::vector<double> savgol_weights(int window_len, int poly_order, int eval_pos) {
  require(window_len >= 1 && window_len % 2 == 1, ErrorCode::InvalidArgument,
          "savitzky_golay window must be odd and positive");
  require(poly_order >= 0 && poly_order < window_len, ErrorCode::InvalidArgument,
          "savitzky_golay poly_order must be < window_len");
  const int half = window_len / 2;
  const auto cols = static_cast<std::size_t>(poly_order + 1);

  // Normal equations (A^T A) c = e(eval_pos), then weights = A c.
  std::vector<double> m(cols * cols, 0.0), rhs(cols);
  for (int i = -half; i <= half; ++i) {
    for (std::size_t r = 0; r < cols; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        m[r * cols + c] += std::pow(i, static_cast<double>(r + c));
      }
    }
  }
  for (std::size_t r = 0; r < cols; ++r) rhs[r] = std::pow(eval_pos, static_cast<double>(r));

  for (std::size_t col = 0; col < cols; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < cols; ++r) {
      if (std::abs(m[r * cols + col]) > std::abs(m[pivot * cols + col])) pivot = r;
    }
    for (std::size_t c = 0; c < cols; ++c) std::swap(m[col * cols + c], m[pivot * cols + c]);
    std::swap(rhs[col], rhs[pivot]);
    for (std::size_t r = 0; r < cols; ++r) {
      if (r == col) continue;
      const double f = m[r * cols + col] / m[col * cols + col];
      for (std::size_t c = col; c < cols; ++c) m[r * cols + c] -= f * m[col * cols + c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> coef(cols);
  for (std::size_t r = 0; r < cols; ++r) coef[r] = rhs[r] / m[r * cols + r];

  std::vector<double> w(static_cast<std::size_t>(window_len));
  for (int i = -half; i <= half; ++i) {
    double v = 0.0;
    for (std::size_t r = 0; r < cols; ++r) v += coef[r] * std::pow(i, static_cast<double>(r));
    w[static_cast<std::size_t>(i + half)] = v;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Filtering

namespace {

// Direct form II transposed, optionally primed with the steady state of a constant input.
Signal run_cascade(const BiquadCascade& cascade, std::span<const double> x, bool steady_state) {
  const std::size_t ns = cascade.sections.size();
  std::vector<double> s1(ns, 0.0), s2(ns, 0.0);
  if (steady_state && !x.empty()) {
    double level = cascade.gain * x[0];
    for (std::size_t k = 0; k < ns; ++k) {
      const auto& s = cascade.sections[k];
      const double out = level * (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
      s2[k] = s.b2 * level - s.a2 * out;
      s1[k] = s.b1 * level - s.a1 * out + s2[k];
      level = out;
    }
  }
  Signal y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    double v = cascade.gain * x[n];
    for (std::size_t k = 0; k < ns; ++k) {
      const auto& s = cascade.sections[k];
      const double out = s.b0 * v + s1[k];
      s1[k] = s.b1 * v - s.a1 * out + s2[k];
      s2[k] = s.b2 * v - s.a2 * out;
      v = out;
    }
    y[n] = v;
  }
  return y;
}

Signal run_fir(std::span<const double> taps, std::span<const double> x, bool steady_state) {
  Signal y(x.size(), 0.0);
  const double before = (steady_state && !x.empty()) ? x[0] : 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) {
      acc += taps[k] * (k <= n ? x[n - k] : before);
    }
    y[n] = acc;
  }
  return y;
}

template <class Pass>
Signal forward_backward(std::span<const double> x, std::size_t padlen, Pass pass) {
  const std::size_t n = x.size();
  require(n > padlen, ErrorCode::SignalTooShort,
          "zero-phase filtering needs more than " + std::to_string(padlen) + " samples, got " +
              std::to_string(n));
  Signal ext;
  ext.reserve(n + 2 * padlen);
  for (std::size_t i = padlen; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= padlen; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  auto fb = [&](const Signal& in) {
    Signal y = pass(in);
    std::reverse(y.begin(), y.end());
    y = pass(y);
    std::reverse(y.begin(), y.end());
    return y;
  };
  Signal rev(ext.rbegin(), ext.rend());
  const Signal a = fb(ext);
  Signal b = fb(rev);
  std::reverse(b.begin(), b.end());

  Signal out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (a[padlen + i] + b[padlen + i]);
  return out;
}

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= n) return n - 1;
  return static_cast<std::size_t>(i);
}

void check_window(int window_len, std::size_t n, bool must_be_odd, const char* what) {
  require(window_len >= 1, ErrorCode::InvalidArgument, std::string(what) + " window must be >= 1");
  require(!must_be_odd || window_len % 2 == 1, ErrorCode::InvalidArgument,
          std::string(what) + " window must be odd");
  require(n >= static_cast<std::size_t>(window_len), ErrorCode::SignalTooShort,
          std::string(what) + " window longer than signal");
}

Signal moving_average(std::span<const double> x, int window_len) {
  check_window(window_len, x.size(), true, "moving_average");
  const auto half = static_cast<std::ptrdiff_t>(window_len / 2);
  Signal y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      acc += x[clamp_index(static_cast<std::ptrdiff_t>(n) + k, x.size())];
    }
    y[n] = acc / window_len;
  }
  return y;
}

Signal median(std::span<const double> x, int window_len) {
  check_window(window_len, x.size(), true, "median");
  const auto half = static_cast<std::ptrdiff_t>(window_len / 2);
  Signal y(x.size());
  std::vector<double> win(static_cast<std::size_t>(window_len));
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      win[static_cast<std::size_t>(k + half)] = x[clamp_index(static_cast<std::ptrdiff_t>(n) + k, x.size())];
    }
    std::nth_element(win.begin(), win.begin() + half, win.end());
    y[n] = win[static_cast<std::size_t>(half)];
  }
  return y;
}

// Interior samples use the centred smoothing weights; the first and last half-windows evaluate the
// polynomial fitted to the first/last full window, so polynomials up to poly_order pass unchanged.
Signal savitzky_golay(std::span<const double> x, int window_len, int poly_order) {
  check_window(window_len, x.size(), true, "savitzky_golay");
  const int half = window_len / 2;
  const std::size_t n = x.size();
  const auto w = static_cast<std::size_t>(window_len);
  const auto centre = savgol_weights(window_len, poly_order, 0);
  Signal y(n);
  for (std::size_t i = static_cast<std::size_t>(half); i + static_cast<std::size_t>(half) < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < w; ++k) acc += centre[k] * x[i - static_cast<std::size_t>(half) + k];
    y[i] = acc;
  }
  for (int i = 0; i < half; ++i) {
    const auto left = savgol_weights(window_len, poly_order, i - half);
    const auto right = savgol_weights(window_len, poly_order, half - i);
    double acc_l = 0.0, acc_r = 0.0;
    for (std::size_t k = 0; k < w; ++k) {
      acc_l += left[k] * x[k];
      acc_r += right[k] * x[n - w + k];
    }
    y[static_cast<std::size_t>(i)] = acc_l;
    y[n - 1 - static_cast<std::size_t>(i)] = acc_r;
  }
  return y;
}

}  // namespace

Signal lfilter(const BiquadCascade& cascade, std::span<const double> x) {
  return run_cascade(cascade, x, false);
}

Signal lfilter(std::span<const double> taps, std::span<const double> x) { return run_fir(taps, x, false); }

Signal filtfilt(const BiquadCascade& cascade, std::span<const double> x) {
  const std::size_t padlen = 3 * (2 * cascade.sections.size() + 1);
  return forward_backward(x, padlen, [&](std::span<const double> s) { return run_cascade(cascade, s, true); });
}

Signal filtfilt(std::span<const double> taps, std::span<const double> x) {
  const std::size_t padlen = 3 * taps.size();
  return forward_backward(x, padlen, [&](std::span<const double> s) { return run_fir(taps, s, true); });
}

void validate_filter(const FilterSpec& spec, double fs) {
  require(fs > 0.0, ErrorCode::InvalidArgument, "sampling rate must be positive");
  switch (spec.kind) {
    case FilterKind::butterworth_bandpass:
      (void)design_butterworth_bandpass(spec.order, {spec.low_hz, spec.high_hz}, fs);
      break;
    case FilterKind::butterworth_highpass:
      (void)design_butterworth_highpass(spec.order, spec.cut_hz, fs);
      break;
    case FilterKind::fir_bandpass:
      check_edge(spec.low_hz, fs, "low edge");
      check_edge(spec.high_hz, fs, "high edge");
      require(spec.low_hz < spec.high_hz, ErrorCode::BandOutOfRange, "low edge must be below high edge");
      require(spec.transition_hz > 0.0, ErrorCode::InvalidArgument, "transition width must be positive");
      break;
    case FilterKind::notch:
      (void)design_notch(spec.notch_hz, spec.q, fs);
      break;
    case FilterKind::moving_average:
    case FilterKind::median:
      require(spec.window_len >= 1 && spec.window_len % 2 == 1, ErrorCode::InvalidArgument,
              std::string(to_string(spec.kind)) + " window must be odd and positive");
      break;
    case FilterKind::savitzky_golay:
      require(spec.window_len >= 1 && spec.window_len % 2 == 1, ErrorCode::InvalidArgument,
              "savitzky_golay window must be odd and positive");
      require(spec.poly_order >= 0 && spec.poly_order < spec.window_len, ErrorCode::InvalidArgument,
              "savitzky_golay poly_order must be < window_len");
      break;
  }
}

Signal apply_filter(const FilterSpec& spec, std::span<const double> x, double fs) {
  validate_filter(spec, fs);
  const bool zero_phase = spec.phase == PhaseMode::zero_phase;
  auto run_iir = [&](const BiquadCascade& c) { return zero_phase ? filtfilt(c, x) : lfilter(c, x); };
  switch (spec.kind) {
    case FilterKind::butterworth_bandpass:
      return run_iir(design_butterworth_bandpass(spec.order, {spec.low_hz, spec.high_hz}, fs));
    case FilterKind::butterworth_highpass:
      return run_iir(design_butterworth_highpass(spec.order, spec.cut_hz, fs));
    case FilterKind::notch:
      return run_iir(design_notch(spec.notch_hz, spec.q, fs));
    case FilterKind::fir_bandpass: {
      const auto taps = design_fir_bandpass({spec.low_hz, spec.high_hz}, spec.transition_hz, fs);
      return zero_phase ? filtfilt(taps, x) : lfilter(taps, x);
    }
    // Window filters are centred (already zero-phase) whatever the phase mode.
    case FilterKind::moving_average: return moving_average(x, spec.window_len);
    case FilterKind::median: return median(x, spec.window_len);
    case FilterKind::savitzky_golay: return savitzky_golay(x, spec.window_len, spec.poly_order);
  }
  return Signal(x.begin(), x.end());
}

// ---------------------------------------------------------------------------
// Resampling and normalisation

Signal resample_fourier(std::span<const double> x, std::size_t target_len) {
  require(x.size() >= 2, ErrorCode::InvalidArgument, "resample needs at least 2 input samples");
  require(target_len >= 2, ErrorCode::InvalidArgument, "resample target length must be >= 2");
  const std::size_t nx = x.size();
  const std::size_t m = target_len;
  const auto spectrum = fft::forward(x);

  std::vector<Complex> y(m, Complex(0.0, 0.0));
  const std::size_t n = std::min(m, nx);
  const std::size_t nyq = n / 2 + 1;
  for (std::size_t k = 0; k < nyq; ++k) y[k] = spectrum[k];
  if (n > 2) {
    for (std::size_t k = 1; k + nyq <= n; ++k) y[m - k] = spectrum[nx - k];
  }
  if (n % 2 == 0) {
    if (m < nx) {
      y[m - n / 2] += spectrum[nx - n / 2];
    } else if (m > nx) {
      y[n / 2] *= 0.5;
      y[m - n / 2] = y[n / 2];
    }
  }
  const auto time = fft::inverse(y);
  Signal out(m);
  const double scale = 1.0 / static_cast<double>(nx);
  for (std::size_t i = 0; i < m; ++i) out[i] = time[i].real() * scale;
  return out;
}

Signal normalize(std::span<const double> x, Normalization method) {
  require(x.size() >= 2, ErrorCode::InvalidArgument, "normalize needs at least 2 samples");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double span = *hi - *lo;
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  require(span > 1e-12 * scale && span > 0.0, ErrorCode::ZeroVariance, "segment is constant");

  Signal y(x.size());
  if (method == Normalization::minmax) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] - *lo) / span;
    return y;
  }
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  require(sd > 0.0, ErrorCode::ZeroVariance, "segment is constant");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] - mean) / sd;
  return y;
}

CleanSignal preprocess(const Recording& rec, const PreprocessSettings& cfg) {
  validate_recording(rec);
  require(cfg.channel < rec.channels.size(), ErrorCode::InvalidArgument,
          "channel " + std::to_string(cfg.channel) + " not present (record has " +
              std::to_string(rec.channels.size()) + ")");
  CleanSignal out;
  out.provenance = rec.provenance;
  out.fs = rec.fs;
  out.samples = rec.channels[cfg.channel];
  out.steps.push_back("channel:" + std::to_string(cfg.channel));
  for (const auto& f : cfg.filters) {
    out.samples = apply_filter(f, out.samples, rec.fs);
    out.steps.emplace_back(to_string(f.kind));
  }
  return out;
}

}  // namespace ecgbench::dsp
