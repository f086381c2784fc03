#include "seamix/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace seamix {

void TransitionConfig::validate() const {
  if (fft_size == 0 || !std::has_single_bit(fft_size)) {
    throw Error(errc::config, "fft size must be a power of two");
  }
  if (!is_cola(fft_size, hop)) {
    throw Error(errc::config, "hop must divide fft_size with at least 3x overlap");
  }
  if (overlap_beats < 1) throw Error(errc::config, "overlap must span at least one beat");
  if (sample_rate <= 0) throw Error(errc::config, "sample rate must be positive");
  if (!(tempo.min_bpm > 0.0) || !(tempo.max_bpm > tempo.min_bpm)) {
    throw Error(errc::config, "invalid tempo range");
  }
}

TrackAnalysis analyze_track(const AudioClip& raw, const TransitionConfig& config) {
  TrackAnalysis analysis;
  analysis.clip = resample(raw, config.sample_rate);
  analysis.spec = stft(analysis.clip, config.fft_size, config.hop);
  analysis.db = magnitude_db(analysis.spec);
  analysis.onsets = onset_envelope(analysis.db);
  analysis.tempo = estimate_tempo(analysis.onsets, config.tempo);
  analysis.grid = track_beats(analysis.onsets, analysis.tempo.bpm, config.beat_tightness);

  // Second pass: the span of the tracked beats measures the period far more
  // precisely than the autocorrelation grid, so re-derive the tempo from the
  // interior beats and track once more against it.
  const auto& beats = analysis.grid.beat_times;
  if (!analysis.tempo.low_confidence && beats.size() >= 9) {
    const double span = beats[beats.size() - 3] - beats[2];
    const double refined = 60.0 * static_cast<double>(beats.size() - 5) / span;
    if (refined >= config.tempo.min_bpm && refined <= config.tempo.max_bpm &&
        std::abs(refined - analysis.tempo.bpm) <= 5.0) {
      analysis.tempo.bpm = refined;
      analysis.grid = track_beats(analysis.onsets, refined, config.beat_tightness);
    }
  }
  return analysis;
}

namespace {

long nearest_beat_index(const BeatGrid& grid, double seconds) {
  long best = 0;
  double best_err = std::abs(grid.beat_times[0] - seconds);
  for (std::size_t i = 1; i < grid.beat_times.size(); ++i) {
    const double err = std::abs(grid.beat_times[i] - seconds);
    if (err < best_err) {
      best_err = err;
      best = static_cast<long>(i);
    }
  }
  return best;
}

void require_confident(const TempoEstimate& tempo, const TransitionConfig& config,
                       const char* which) {
  if (tempo.low_confidence && !config.force_tempo) {
    throw Error(errc::low_confidence,
                std::string("low-confidence tempo for track ") + which +
                    "; pass the force flag to proceed at the prior tempo");
  }
}

}  // namespace

TransitionArtifacts run_transition(const AudioClip& raw_a, const AudioClip& raw_b,
                                   const TransitionConfig& config) {
  config.validate();

  TrackAnalysis a = analyze_track(raw_a, config);
  require_confident(a.tempo, config, "A");
  TrackAnalysis b = analyze_track(raw_b, config);
  require_confident(b.tempo, config, "B");

  const double ratio = compute_stretch_ratio(a.tempo.bpm, b.tempo.bpm);

  // Stretch B in the time domain, then re-analyze it so the beat grid used
  // for alignment reflects the audio actually being spliced.
  const AudioClip b_stretched = time_stretch(b.clip, ratio, config.fft_size, config.hop);
  TrackAnalysis bs = analyze_track(b_stretched, config);
  require_confident(bs.tempo, config, "B (stretched)");

  const long anchor_a =
      config.a_start ? nearest_beat_index(a.grid, *config.a_start) : -1;
  const long anchor_b =
      config.b_start ? nearest_beat_index(bs.grid, *config.b_start) : -1;

  OverlapPlan plan = plan_overlap(a.grid, bs.grid, config.overlap_beats, config.hop,
                                  config.sample_rate, anchor_a, anchor_b);
  plan.stretch_ratio = ratio;

  const auto [seg_a, seg_b] = extract_segments(a.spec, bs.spec, plan);
  const FlowNetwork net = build_grid_graph(magnitude_db(seg_a), magnitude_db(seg_b));
  const CutLabeling labels = max_flow_min_cut(net);
  const ComplexSpectrogram overlap_spec = composite(seg_a, seg_b, labels);

  TransitionArtifacts artifacts;
  artifacts.result = render_transition(a.clip, bs.clip, plan, overlap_spec, labels);
  artifacts.tempo_a = a.tempo.bpm;
  artifacts.tempo_b = b.tempo.bpm;
  artifacts.stretch_ratio = ratio;
  artifacts.overlap_db = magnitude_db(overlap_spec);
  return artifacts;
}

TransitionArtifacts run_segment_cut(const AudioClip& raw_a, const AudioClip& raw_b,
                                    const TransitionConfig& config) {
  config.validate();

  const AudioClip a = resample(raw_a, config.sample_rate);
  const AudioClip b = resample(raw_b, config.sample_rate);
  const ComplexSpectrogram spec_a = stft(a, config.fft_size, config.hop);
  const ComplexSpectrogram spec_b = stft(b, config.fft_size, config.hop);

  const std::size_t frames = std::min(spec_a.frames, spec_b.frames);
  if (frames < 2) throw Error(errc::too_short, "segments shorter than two STFT frames");

  OverlapPlan plan;
  plan.overlap_beats = 0;  // not beat-based
  plan.a_start_frame = 0;
  plan.b_start_frame = 0;
  plan.a_frame_count = frames;
  plan.b_frame_count = frames;
  plan.frames = frames;
  plan.a_start_time = 0.0;
  plan.b_start_time = 0.0;
  plan.a_end_time = plan.b_end_time =
      static_cast<double>(frames) * config.hop / config.sample_rate;

  const auto [seg_a, seg_b] = extract_segments(spec_a, spec_b, plan);
  const FlowNetwork net = build_grid_graph(magnitude_db(seg_a), magnitude_db(seg_b));
  const CutLabeling labels = max_flow_min_cut(net);
  const ComplexSpectrogram overlap_spec = composite(seg_a, seg_b, labels);

  TransitionArtifacts artifacts;
  artifacts.result = render_transition(a, b, plan, overlap_spec, labels);
  artifacts.overlap_db = magnitude_db(overlap_spec);
  return artifacts;
}

}  // namespace seamix
