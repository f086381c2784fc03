#include "seamix/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace seamix {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

AudioClip make_tone(double freq_hz, double seconds, int sample_rate, double amplitude) {
  AudioClip clip;
  clip.sample_rate = sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    clip.samples[i] = static_cast<float>(amplitude * std::sin(kTwoPi * freq_hz * i / sample_rate));
  }
  return clip;
}

std::vector<double> click_track_beat_times(const ClickTrackParams& params) {
  const double period = 60.0 / params.bpm;
  std::vector<double> times;
  for (std::size_t k = static_cast<std::size_t>(std::max(0, params.intro_beats));
       k * period < params.seconds; ++k) {
    times.push_back(static_cast<double>(k) * period);
  }
  return times;
}

AudioClip make_click_track(const ClickTrackParams& params) {
  AudioClip clip;
  clip.sample_rate = params.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(params.seconds * params.sample_rate));
  clip.samples.assign(n, 0.0f);

  // Chord bed, each tone snapped to a whole number of cycles per beat.
  const double beat_period = 60.0 / params.bpm;
  const double fade_len = params.intro_beats * beat_period * params.sample_rate;
  for (double hz : params.chord_hz) {
    const double cycles = std::max(1.0, std::round(hz * beat_period));
    const double f = cycles / beat_period;
    for (std::size_t i = 0; i < n; ++i) {
      double gain = params.chord_gain;
      if (static_cast<double>(i) < fade_len) {
        gain *= 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / fade_len);
      }
      clip.samples[i] += static_cast<float>(gain * std::sin(kTwoPi * f * i / params.sample_rate));
    }
  }

  if (params.noise_gain > 0.0) {
    std::mt19937 rng(params.noise_seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      clip.samples[i] += static_cast<float>(params.noise_gain * dist(rng));
    }
  }

  // Hann-enveloped tone bursts centered on each beat.
  const long half = std::lround(params.click_length_s * params.sample_rate / 2.0);
  const auto beats = click_track_beat_times(params);
  for (std::size_t k = 0; k < beats.size(); ++k) {
    const long center = std::lround(beats[k] * params.sample_rate);
    const double gain = params.click_gain * (k % 4 == 0 ? params.accent : 1.0);
    for (long d = -half; d <= half; ++d) {
      const long s = center + d;
      if (s < 0 || s >= static_cast<long>(n)) continue;
      const double env = 0.5 + 0.5 * std::cos(std::numbers::pi * d / (half + 1.0));
      clip.samples[s] += static_cast<float>(
          gain * env * std::sin(kTwoPi * params.click_freq_hz * d / params.sample_rate));
    }
  }

  for (float& s : clip.samples) s = std::clamp(s, -1.0f, 1.0f);
  return clip;
}

}  // namespace seamix
