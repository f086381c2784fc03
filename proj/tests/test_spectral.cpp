#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "seamix/spectral.hpp"
#include "seamix/synth.hpp"
#include "support/oracles.hpp"

using namespace seamix;

namespace {

AudioClip random_clip(std::mt19937& rng, std::size_t n, int rate = 44100) {
  std::uniform_real_distribution<float> dist(-0.9f, 0.9f);
  AudioClip clip;
  clip.sample_rate = rate;
  clip.samples.resize(n);
  for (auto& s : clip.samples) s = dist(rng);
  return clip;
}

std::size_t argmax_bin(const ComplexSpectrogram& spec, std::size_t frame) {
  std::size_t peak = 0;
  for (std::size_t b = 1; b < spec.bins; ++b) {
    if (std::abs(spec.at(frame, b)) > std::abs(spec.at(frame, peak))) peak = b;
  }
  return peak;
}

}  // namespace

TEST_CASE("fft of a delta is all ones") {
  const auto out = fft({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
  for (const auto& v : out) {
    CHECK(v.real() == doctest::Approx(1.0));
    CHECK(v.imag() == doctest::Approx(0.0));
  }
}

TEST_CASE("fft concentrates DC into bin zero") {
  const auto out = fft({{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
  CHECK(out[0].real() == doctest::Approx(4.0));
  for (std::size_t k = 1; k < 4; ++k) CHECK(std::abs(out[k]) < 1e-12);
}

TEST_CASE("fft matches the naive DFT") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t n : {8u, 64u, 256u}) {
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {dist(rng), dist(rng)};
    const auto fast = fft(x);
    const auto slow = test::naive_dft(x);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(fast[k] - slow[k]) < 1e-9);
  }
}

TEST_CASE("fft round trip") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::complex<double>> x(256);
  for (auto& v : x) v = {dist(rng), dist(rng)};
  const auto back = fft(fft(x), true);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(back[k] - x[k]) < 1e-9);
}

TEST_CASE("fft rejects non-power-of-two sizes") {
  try {
    fft(std::vector<std::complex<double>>(6));
    FAIL("expected size error");
  } catch (const Error& err) {
    CHECK(err.code() == errc::size);
  }
}

TEST_CASE("stft frame count and tone localization") {
  // 689.06 Hz sits exactly on bin 32 of a 2048-point transform at 44.1 kHz.
  const double freq = 32.0 * 44100.0 / 2048.0;
  const AudioClip tone = make_tone(freq, 1.0, 44100);
  const auto spec = stft(tone, 2048, 512);
  CHECK(spec.frames == (tone.samples.size() + 511) / 512);
  CHECK(spec.bins == 1025);
  for (std::size_t t = 1; t + 4 < spec.frames; ++t) {  // skip zero-padded tail
    REQUIRE(argmax_bin(spec, t) == 32);
  }
}

TEST_CASE("stft of silence is silent") {
  AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples.assign(4096, 0.0f);
  const auto spec = stft(clip, 1024, 256);
  for (const auto& v : spec.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("stft edge cases") {
  AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples.assign(512, 0.1f);
  CHECK(stft(clip, 2048, 512).frames == 1);  // exactly one hop of input

  try {
    stft({}, 2048, 512);
    FAIL("expected empty-input error");
  } catch (const Error& err) {
    CHECK(err.code() == errc::empty_input);
  }
}

TEST_CASE("istft rejects non-COLA configurations") {
  AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples.assign(4096, 0.1f);
  auto spec = stft(clip, 1024, 512);  // squared Hann does not sum flat at 2x overlap
  try {
    istft(spec);
    FAIL("expected configuration error");
  } catch (const Error& err) {
    CHECK(err.code() == errc::config);
  }
}

TEST_CASE("istft round trip on white noise") {
  std::mt19937 rng(101);
  const AudioClip clip = random_clip(rng, 44100);
  const AudioClip back = istft(stft(clip, 2048, 512));
  REQUIRE(back.samples.size() >= clip.samples.size());
  const std::size_t margin = 2048;
  const double err = test::relative_rms_error(back.samples.data() + margin,
                                              clip.samples.data() + margin,
                                              clip.samples.size() - 2 * margin);
  CHECK(err < 1e-3);
}

TEST_CASE("istft of an all-zero spectrogram is silence") {
  AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples.assign(2048, 0.5f);
  auto spec = stft(clip, 1024, 256);
  std::fill(spec.values.begin(), spec.values.end(), std::complex<double>(0.0));
  const AudioClip out = istft(spec);
  for (float s : out.samples) CHECK(s == 0.0f);
}

TEST_CASE("single-frame istft reconstructs the windowed segment") {
  // Direct overlap-add by hand: with one frame the output over the window
  // support is ifft(frame), un-windowed by the normalization.
  AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples.assign(1024, 0.0f);
  for (std::size_t i = 0; i < 1024; ++i) {
    clip.samples[i] = 0.3f * std::sin(2.0 * std::numbers::pi * i / 64.0);
  }
  auto spec = stft(clip, 1024, 1024);  // hop == len: a single frame
  spec.hop = 256;                      // reinterpret as COLA for the inverse
  const AudioClip out = istft(spec);
  REQUIRE(out.samples.size() == 1024);
  for (std::size_t i = 1; i < 1024; ++i) {  // sample 0 has zero window weight
    CHECK(out.samples[i] == doctest::Approx(clip.samples[i]).epsilon(1e-4));
  }
}

TEST_CASE("istft round trip property over random clips") {
  std::mt19937 rng(613);
  std::uniform_int_distribution<std::size_t> len(8192, 32768);
  for (int trial = 0; trial < 20; ++trial) {
    const AudioClip clip = random_clip(rng, len(rng));
    const AudioClip back = istft(stft(clip, 2048, 512));
    const std::size_t margin = 2048;
    const double err = test::relative_rms_error(back.samples.data() + margin,
                                                clip.samples.data() + margin,
                                                clip.samples.size() - 2 * margin);
    REQUIRE(err < 1e-3);
  }
}

TEST_CASE("Parseval holds per frame") {
  std::mt19937 rng(47);
  const AudioClip clip = random_clip(rng, 8192);
  const std::size_t n = 2048, hop = 512;
  const auto spec = stft(clip, n, hop);

  std::vector<double> window(n);
  for (std::size_t i = 0; i < n; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  for (std::size_t t = 0; t + 4 < spec.frames; ++t) {
    double time_energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t s = t * hop + i;
      const double v = s < clip.samples.size() ? clip.samples[s] * window[i] : 0.0;
      time_energy += v * v;
    }
    // Rebuild the two-sided magnitude sum from the one-sided spectrogram.
    double freq_energy = std::norm(spec.at(t, 0)) + std::norm(spec.at(t, spec.bins - 1));
    for (std::size_t b = 1; b + 1 < spec.bins; ++b) freq_energy += 2.0 * std::norm(spec.at(t, b));
    freq_energy /= static_cast<double>(n);
    REQUIRE(time_energy == doctest::Approx(freq_energy).epsilon(1e-6));
  }
}

TEST_CASE("magnitude_db values and floor") {
  ComplexSpectrogram spec;
  spec.frames = 1;
  spec.bins = 3;
  spec.fft_size = 4;
  spec.hop = 1;
  spec.sample_rate = 44100;
  spec.values = {{1.0, 0.0}, {0.0, 0.0}, {0.1, 0.0}};
  const auto db = magnitude_db(spec);
  CHECK(db.values[0] == doctest::Approx(0.0));
  CHECK(db.values[1] == doctest::Approx(-100.0));
  CHECK(db.values[2] == doctest::Approx(-20.0));
}

TEST_CASE("magnitude_db is monotone in magnitude") {
  ComplexSpectrogram spec;
  spec.frames = 1;
  spec.bins = 4;
  spec.fft_size = 6;  // shape passthrough only
  spec.values = {{1e-7, 0.0}, {1e-3, 0.0}, {0.5, 0.0}, {2.0, 0.0}};
  const auto db = magnitude_db(spec);
  for (std::size_t i = 1; i < 4; ++i) CHECK(db.values[i] > db.values[i - 1]);
  CHECK(db.values[0] >= kDbFloor);
}

TEST_CASE("phase vocoder identity at ratio 1") {
  const AudioClip tone = make_tone(440.0, 0.5, 44100);
  const auto spec = stft(tone, 2048, 512);
  const auto out = phase_vocoder_stretch(spec, 1.0);
  REQUIRE(out.frames == spec.frames);
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    REQUIRE(std::abs(out.values[i] - spec.values[i]) < 1e-9);
  }
}

TEST_CASE("phase vocoder stretches duration and keeps the tone bin") {
  const AudioClip tone = make_tone(440.0, 1.0, 44100);
  const auto spec = stft(tone, 2048, 512);
  for (double ratio : {0.5, 0.75, 1.5, 2.0}) {
    const auto out = phase_vocoder_stretch(spec, ratio);
    CHECK(std::abs(static_cast<double>(out.frames) - ratio * spec.frames) <= 1.0);
    for (std::size_t t = 1; t + 4 < out.frames; ++t) {
      REQUIRE(argmax_bin(out, t) == argmax_bin(spec, 1));
    }
    const AudioClip audio = istft(out);
    const double expected = tone.duration() * ratio;
    // istft renders the final window in full, so allow its tail on top of
    // the one-hop rounding.
    CHECK(std::abs(audio.duration() - expected) <= (2048.0 + 512.0) / 44100.0);
  }
}

TEST_CASE("phase vocoder rejects out-of-range ratios") {
  const AudioClip tone = make_tone(440.0, 0.2, 44100);
  const auto spec = stft(tone, 2048, 512);
  for (double ratio : {2.5, 0.4, -1.0}) {
    try {
      phase_vocoder_stretch(spec, ratio);
      FAIL("expected range error");
    } catch (const Error& err) {
      CHECK(err.code() == errc::range);
    }
  }
}
