#ifndef SEAMIX_BEATS_HPP
#define SEAMIX_BEATS_HPP

#include <cstddef>
#include <vector>

#include "seamix/spectral.hpp"

namespace seamix {

/// Per-frame onset strengths (spectral flux), all non-negative.
/// event_offset shifts frame indices toward the center of the analysis
/// window when frames are mapped to event times, so reported beat instants
/// line up with where the energy actually sits in the signal.
struct OnsetEnvelope {
  std::vector<double> values;
  std::size_t hop = 0;
  int sample_rate = 0;
  std::size_t event_offset = 0;  // samples

  double frame_rate() const { return static_cast<double>(sample_rate) / hop; }
  double frame_time(std::size_t frame) const {
    return (static_cast<double>(frame) * hop + event_offset) / sample_rate;
  }
  double duration() const {
    return static_cast<double>(values.size()) * hop / sample_rate;
  }
};

struct TempoParams {
  double min_bpm = 60.0;
  double max_bpm = 180.0;
  double prior_center_bpm = 120.0;
  double prior_sigma_log2 = 1.0;
};

struct TempoEstimate {
  double bpm = 0.0;
  bool low_confidence = false;
};

/// Estimated tempo plus the ordered beat instants of one track.
struct BeatGrid {
  double tempo_bpm = 0.0;
  std::vector<double> beat_times;  // seconds, strictly increasing
};

/// Spectral flux onset strength: per frame, the sum over bins of the positive
/// dB increase from the previous frame, then mean-subtracted and half-wave
/// rectified. Needs at least two frames.
OnsetEnvelope onset_envelope(const DbSpectrogram& spec);

/// Autocorrelation tempo estimate over the params' BPM range, weighted by a
/// log-normal prior around the center BPM. A degenerate envelope (no peak)
/// yields the prior center with low_confidence set. Needs >= 5 s of envelope.
TempoEstimate estimate_tempo(const OnsetEnvelope& env, const TempoParams& params = {});

/// Dynamic-programming beat tracker maximizing
///   sum env(beat) - tightness * sum log^2(interval / period)
/// over beat sequences, then backtracing the best final beat.
BeatGrid track_beats(const OnsetEnvelope& env, double tempo_bpm, double tightness = 100.0);

}  // namespace seamix

#endif  // SEAMIX_BEATS_HPP
