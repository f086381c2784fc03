#ifndef SEAMIX_PIPELINE_HPP
#define SEAMIX_PIPELINE_HPP

#include <optional>

#include "seamix/align.hpp"
#include "seamix/audio_io.hpp"
#include "seamix/beats.hpp"
#include "seamix/mincut.hpp"
#include "seamix/render.hpp"
#include "seamix/spectral.hpp"

namespace seamix {

struct TransitionConfig {
  std::size_t fft_size = 2048;
  std::size_t hop = 512;
  int overlap_beats = 64;
  int sample_rate = 44100;  // canonical internal rate, inputs are normalized to it
  TempoParams tempo;
  double beat_tightness = 100.0;
  bool force_tempo = false;  // proceed on low-confidence tempo estimates
  std::optional<double> a_start;  // explicit overlap starts, seconds
  std::optional<double> b_start;

  void validate() const;  // throws errc::config
};

/// Everything the analysis stage derives from one track.
struct TrackAnalysis {
  AudioClip clip;  // resampled to the canonical rate
  ComplexSpectrogram spec;
  DbSpectrogram db;
  OnsetEnvelope onsets;
  TempoEstimate tempo;
  BeatGrid grid;
};

/// resample -> stft -> dB -> onsets -> tempo -> beats. Does not gate on
/// low-confidence tempo; callers decide.
TrackAnalysis analyze_track(const AudioClip& raw, const TransitionConfig& config);

/// Full transition output plus the intermediate data worth reporting.
struct TransitionArtifacts {
  TransitionResult result;
  double tempo_a = 0.0;
  double tempo_b = 0.0;  // original tempo of B, before stretching
  double stretch_ratio = 1.0;
  DbSpectrogram overlap_db;  // composited overlap, for the seam image
};

/// Runs the whole pipeline: analyze both tracks, stretch B to A's tempo,
/// plan and extract the overlap, min-cut, composite, render.
TransitionArtifacts run_transition(const AudioClip& raw_a, const AudioClip& raw_b,
                                   const TransitionConfig& config);

/// The `cut` stage in isolation: both inputs are treated as pre-aligned
/// overlap segments (truncated to the shorter frame count), min-cut and
/// composited, with the overlap rendered back to audio.
TransitionArtifacts run_segment_cut(const AudioClip& raw_a, const AudioClip& raw_b,
                                    const TransitionConfig& config);

}  // namespace seamix

#endif  // SEAMIX_PIPELINE_HPP
