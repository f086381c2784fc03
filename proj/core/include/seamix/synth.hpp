#ifndef SEAMIX_SYNTH_HPP
#define SEAMIX_SYNTH_HPP

#include <vector>

#include "seamix/audio_io.hpp"

namespace seamix {

/// Deterministic signal generators for demos and fixtures.

AudioClip make_tone(double freq_hz, double seconds, int sample_rate, double amplitude = 0.5);

struct ClickTrackParams {
  double bpm = 120.0;
  double seconds = 30.0;
  int sample_rate = 44100;
  double click_gain = 0.7;
  double click_freq_hz = 1800.0;
  double click_length_s = 0.012;
  /// Sustained chord bed under the clicks. Frequencies are rounded to a
  /// whole number of cycles per beat so the track is exactly beat-periodic.
  std::vector<double> chord_hz = {220.0, 330.0, 440.0};
  double chord_gain = 0.05;
  /// Every 4th click louder by this factor (1 = unaccented).
  double accent = 1.0;
  /// Beats of click-free lead-in. The chord fades in across it, so the
  /// track opens without a spurious broadband onset and the first click is
  /// rendered whole.
  int intro_beats = 0;
  /// Broadband bed: deterministic white noise at this amplitude, seeded so
  /// identical params always produce identical samples.
  double noise_gain = 0.0;
  unsigned noise_seed = 1234;
};

/// Clicks centered on every beat instant k * 60/bpm, over an optional chord
/// bed. Beat 0 sits at t = 0.
AudioClip make_click_track(const ClickTrackParams& params);

/// The generator's ground-truth beat times for the given params.
std::vector<double> click_track_beat_times(const ClickTrackParams& params);

}  // namespace seamix

#endif  // SEAMIX_SYNTH_HPP
