#include "seamix/align.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace seamix {

double compute_stretch_ratio(double tempo_a_bpm, double tempo_b_bpm) {
  if (tempo_a_bpm <= 0.0 || tempo_b_bpm <= 0.0) {
    throw Error(errc::range, "tempi must be positive");
  }
  const double ratio = tempo_b_bpm / tempo_a_bpm;
  if (ratio < 0.5 || ratio > 2.0) {
    throw Error(errc::incompatible_tempo,
                "stretch ratio " + std::to_string(ratio) + " outside [0.5, 2.0]");
  }
  return ratio;
}

namespace {

std::size_t snap_to_frame(double seconds, std::size_t hop, int sample_rate) {
  const double frame = seconds * sample_rate / static_cast<double>(hop);
  return static_cast<std::size_t>(std::max(0.0, std::round(frame)));
}

}  // namespace

OverlapPlan plan_overlap(const BeatGrid& grid_a, const BeatGrid& grid_b_stretched,
                         int overlap_beats, std::size_t hop, int sample_rate,
                         long anchor_a, long anchor_b) {
  if (overlap_beats < 1) throw Error(errc::range, "overlap must span at least one beat");
  const std::size_t need = static_cast<std::size_t>(overlap_beats) + 1;
  const std::size_t na = grid_a.beat_times.size();
  const std::size_t nb = grid_b_stretched.beat_times.size();
  if (na < need || nb < need) {
    throw Error(errc::too_short, "tracks need at least " + std::to_string(need) +
                                     " beats for a " + std::to_string(overlap_beats) +
                                     "-beat overlap");
  }

  // Default placement: tail of A against head of B.
  std::size_t ia = na - need;
  std::size_t ib = 0;
  if (anchor_a >= 0) ia = static_cast<std::size_t>(anchor_a);
  if (anchor_b >= 0) ib = static_cast<std::size_t>(anchor_b);
  if (ia + need > na || ib + need > nb) {
    throw Error(errc::too_short, "overlap anchor leaves too few beats");
  }

  OverlapPlan plan;
  plan.overlap_beats = overlap_beats;
  plan.a_start_time = grid_a.beat_times[ia];
  plan.a_end_time = grid_a.beat_times[ia + overlap_beats];
  plan.b_start_time = grid_b_stretched.beat_times[ib];
  plan.b_end_time = grid_b_stretched.beat_times[ib + overlap_beats];

  plan.a_start_frame = snap_to_frame(plan.a_start_time, hop, sample_rate);
  plan.b_start_frame = snap_to_frame(plan.b_start_time, hop, sample_rate);
  plan.a_frame_count = snap_to_frame(plan.a_end_time, hop, sample_rate) - plan.a_start_frame;
  plan.b_frame_count = snap_to_frame(plan.b_end_time, hop, sample_rate) - plan.b_start_frame;
  plan.frames = std::min(plan.a_frame_count, plan.b_frame_count);
  if (plan.frames < 2) {
    throw Error(errc::too_short, "overlap shorter than two STFT frames");
  }
  return plan;
}

std::pair<ComplexSpectrogram, ComplexSpectrogram> extract_segments(
    const ComplexSpectrogram& spec_a, const ComplexSpectrogram& spec_b,
    const OverlapPlan& plan) {
  const std::size_t frames = std::min(plan.a_frame_count, plan.b_frame_count);
  if (plan.a_start_frame + frames > spec_a.frames ||
      plan.b_start_frame + frames > spec_b.frames) {
    throw Error(errc::range, "overlap window falls outside a spectrogram");
  }

  const auto cut = [frames](const ComplexSpectrogram& src, std::size_t start) {
    ComplexSpectrogram seg;
    seg.frames = frames;
    seg.bins = src.bins;
    seg.fft_size = src.fft_size;
    seg.hop = src.hop;
    seg.sample_rate = src.sample_rate;
    seg.values.assign(src.values.begin() + static_cast<std::ptrdiff_t>(start * src.bins),
                      src.values.begin() + static_cast<std::ptrdiff_t>((start + frames) * src.bins));
    return seg;
  };
  return {cut(spec_a, plan.a_start_frame), cut(spec_b, plan.b_start_frame)};
}

}  // namespace seamix
