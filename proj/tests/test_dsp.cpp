// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ecgbench/dsp.hpp"
#include "ecgbench/error.hpp"
#include "ecgbench/synth.hpp"

using namespace ecgbench;
using namespace ecgbench::dsp;

namespace {

constexpr double kPi = std::numbers::pi;

Signal tone(double f, double fs, std::size_t n, double amp = 1.0) {
  Signal x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2 * kPi * f * static_cast<double>(i) / fs);
  return x;
}

double rms(const Signal& x, std::size_t skip = 0) {
  double s = 0.0;
  for (std::size_t i = skip; i < x.size() - skip; ++i) s += x[i] * x[i];
  return std::sqrt(s / static_cast<double>(x.size() - 2 * skip));
}

Signal noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Signal x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

FilterSpec spec_of(FilterKind kind) {
  FilterSpec s;
  s.kind = kind;
  return s;
}

}  // namespace

TEST_SUITE("dsp") {

TEST_CASE("Butterworth band-pass 0.5-40 Hz, order 3, fs 500") {
  const auto c = design_butterworth_bandpass(3, {0.5, 40.0}, 500.0);
  CHECK(c.stable());
  CHECK(c.magnitude(10.0, 500.0) >= 0.89);
  CHECK(c.magnitude(10.0, 500.0) <= 1.0 + 1e-9);
  CHECK(c.magnitude(0.05, 500.0) <= 0.0316);
  CHECK(c.magnitude(0.0, 500.0) < 1e-12);
  CHECK(std::abs(c.magnitude(std::sqrt(0.5 * 40.0), 500.0) - 1.0) < 0.06);  // 0.5 dB
  // -3 dB at both edges
  CHECK(c.magnitude(0.5, 500.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  CHECK(c.magnitude(40.0, 500.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("other designs are stable") {
  for (int order = 1; order <= 8; ++order) {
    CHECK(design_butterworth_bandpass(order, {0.5, 40.0}, 360.0).stable());
    CHECK(design_butterworth_highpass(order, 0.5, 360.0).stable());
    CHECK(design_butterworth_lowpass(order, 40.0, 360.0).stable());
  }
  const auto hp = design_butterworth_highpass(3, 0.5, 500.0);
  CHECK(hp.magnitude(0.0, 500.0) < 1e-12);
  CHECK(hp.magnitude(100.0, 500.0) == doctest::Approx(1.0).epsilon(1e-6));
  const auto notch = design_notch(50.0, 30.0, 500.0);
  CHECK(notch.stable());
  CHECK(notch.magnitude(50.0, 500.0) < 1e-9);
  CHECK(notch.magnitude(10.0, 500.0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(design_butterworth_bandpass(3, {0.5, 260.0}, 500.0), Error);
}

TEST_CASE("notch removes a pure 50 Hz tone") {
  const auto x = tone(50.0, 500.0, 5000);
  FilterSpec s = spec_of(FilterKind::notch);
  const auto y = apply_filter(s, x, 500.0);
  CHECK(y.size() == x.size());
  CHECK(rms(y) < 0.1 * rms(x));
}

TEST_CASE("FIR band-pass") {
  const auto taps = design_fir_bandpass({0.5, 40.0}, 1.0, 500.0);
  CHECK(taps.size() % 2 == 1);
  CHECK(taps.size() == 1651);  // round(3.3 * 500 / 1) = 1650, forced odd
  for (std::size_t i = 0; i < taps.size(); ++i) CHECK(taps[i] == doctest::Approx(taps[taps.size() - 1 - i]));
}

TEST_CASE("window filters") {
  FilterSpec med = spec_of(FilterKind::median);
  med.window_len = 3;
  CHECK(apply_filter(med, Signal{0, 0, 10, 0, 0}, 100) == Signal{0, 0, 0, 0, 0});

  FilterSpec ma = spec_of(FilterKind::moving_average);
  ma.window_len = 3;
  const auto c = apply_filter(ma, Signal(10, 2.5), 100);
  for (double v : c) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));

  FilterSpec sg = spec_of(FilterKind::savitzky_golay);
  sg.window_len = 5;
  sg.poly_order = 2;
  Signal t2(10);
  for (std::size_t i = 0; i < 10; ++i) t2[i] = static_cast<double>(i * i);
  const auto y = apply_filter(sg, t2, 100);
  for (std::size_t i = 0; i < 10; ++i) CHECK(y[i] == doctest::Approx(t2[i]).epsilon(1e-12));

  FilterSpec bad = spec_of(FilterKind::median);
  bad.window_len = 4;
  CHECK_THROWS_AS(validate_filter(bad, 100), Error);
}

TEST_CASE("Savitzky-Golay weights") {
  // classic 5-point quadratic smoother
  const auto w = savgol_weights(5, 2, 0);
  const double expect[5] = {-3.0 / 35, 12.0 / 35, 17.0 / 35, 12.0 / 35, -3.0 / 35};
  for (int i = 0; i < 5; ++i) CHECK(w[static_cast<std::size_t>(i)] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("linear filters are linear") {
  const auto x = noise(2000, 1), y = noise(2000, 2);
  Signal mix(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mix[i] = 2.0 * x[i] - 0.5 * y[i];
  for (auto kind : {FilterKind::butterworth_bandpass, FilterKind::butterworth_highpass, FilterKind::fir_bandpass,
                    FilterKind::notch, FilterKind::moving_average, FilterKind::savitzky_golay}) {
    FilterSpec s = spec_of(kind);
    s.transition_hz = 5.0;
    CAPTURE(to_string(kind));
    const auto fx = apply_filter(s, x, 360), fy = apply_filter(s, y, 360), fm = apply_filter(s, mix, 360);
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(fm[i] - (2.0 * fx[i] - 0.5 * fy[i])) < 1e-9);
  }
}

TEST_CASE("zero-phase filtering commutes with time reversal") {
  const auto x = noise(3000, 3);
  Signal rx(x.rbegin(), x.rend());
  for (auto kind : {FilterKind::butterworth_bandpass, FilterKind::butterworth_highpass, FilterKind::fir_bandpass,
                    FilterKind::notch, FilterKind::moving_average, FilterKind::median, FilterKind::savitzky_golay}) {
    FilterSpec s = spec_of(kind);
    s.transition_hz = 5.0;
    CAPTURE(to_string(kind));
    const auto a = apply_filter(s, rx, 360);
    const auto b = apply_filter(s, x, 360);
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(a[i] - b[x.size() - 1 - i]) < 1e-9);
  }
}

TEST_CASE("too short for zero-phase filtering") {
  CHECK_THROWS_AS(apply_filter(spec_of(FilterKind::butterworth_bandpass), Signal(10, 1.0), 360), Error);
}

TEST_CASE("Fourier resampling") {
  const auto c = resample_fourier(Signal{5, 5, 5, 5}, 7);
  REQUIRE(c.size() == 7);
  for (double v : c) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));

  Signal s(500);
  for (std::size_t i = 0; i < 500; ++i) s[i] = std::sin(2 * kPi * static_cast<double>(i) / 500.0);
  const auto r = resample_fourier(s, 360);
  REQUIRE(r.size() == 360);
  for (std::size_t i = 0; i < 360; ++i) CHECK(std::abs(r[i] - std::sin(2 * kPi * static_cast<double>(i) / 360.0)) < 1e-6);

  const auto x = noise(64, 9);
  const auto same = resample_fourier(x, 64);
  for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(same[i] - x[i]) < 1e-9);
}

TEST_CASE("normalization") {
  const auto z = normalize(Signal{1, 2, 3}, Normalization::zscore);
  CHECK(z[0] == doctest::Approx(-1.224744871391589).epsilon(1e-12));
  CHECK(std::abs(z[1]) < 1e-15);
  CHECK(z[2] == doctest::Approx(1.224744871391589).epsilon(1e-12));
  CHECK(normalize(Signal{2, 4}, Normalization::minmax) == Signal{0, 1});
  CHECK_THROWS_AS(normalize(Signal{3, 3, 3}, Normalization::zscore), Error);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto x = noise(100 + seed, seed);
    for (auto& v : x) v = 7.0 * v + 3.0;
    const auto n = normalize(x, Normalization::zscore);
    double m = 0.0, ss = 0.0;
    for (double v : n) m += v;
    m /= static_cast<double>(n.size());
    for (double v : n) ss += (v - m) * (v - m);
    CHECK(std::abs(m) < 1e-9);
    CHECK(std::abs(std::sqrt(ss / static_cast<double>(n.size())) - 1.0) < 1e-9);
  }
}

TEST_CASE("preprocess") {
  const auto rec = synth::synthesize_record(synth::make_subject_params(1), {}, 10, 360, 1).recording;
  PreprocessSettings cfg;
  const auto clean = preprocess(rec, cfg);
  CHECK(clean.samples.size() == rec.length());
  CHECK(clean.fs == 360.0);
  CHECK(!clean.steps.empty());

  Recording t;
  t.fs = 500;
  t.channels = {tone(50.0, 500.0, 5000)};
  PreprocessSettings notch;
  notch.filters = {spec_of(FilterKind::notch)};
  CHECK(rms(preprocess(t, notch).samples) < 0.1 * rms(t.channels[0]));

  PreprocessSettings bad;
  bad.filters[0].high_hz = 180.0;
  try {
    preprocess(rec, bad);
    FAIL("expected BandOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BandOutOfRange);
  }
}

}
