#ifndef SEAMIX_ALIGN_HPP
#define SEAMIX_ALIGN_HPP

#include <cstddef>
#include <utility>

#include "seamix/beats.hpp"
#include "seamix/spectral.hpp"

namespace seamix {

/// Placement of the N-beat overlap window inside track A and the (already
/// tempo-matched) track B. Times are beat instants in seconds; frame fields
/// are the same boundaries snapped to STFT frame indices.
struct OverlapPlan {
  int overlap_beats = 64;
  double a_start_time = 0.0;
  double a_end_time = 0.0;
  double b_start_time = 0.0;
  double b_end_time = 0.0;
  double stretch_ratio = 1.0;

  std::size_t a_start_frame = 0;
  std::size_t a_frame_count = 0;
  std::size_t b_start_frame = 0;
  std::size_t b_frame_count = 0;
  std::size_t frames = 0;  // common overlap length, min of the two windows
};

/// Ratio by which track B's duration must be scaled so its tempo matches
/// track A's. Throws errc::incompatible_tempo outside the vocoder range
/// [0.5, 2.0].
double compute_stretch_ratio(double tempo_a_bpm, double tempo_b_bpm);

/// Plans an overlap spanning A's last `overlap_beats` beats against B's
/// first `overlap_beats` beats. `anchor_a`/`anchor_b`, when >= 0, select the
/// first beat of each window explicitly (by beat index).
OverlapPlan plan_overlap(const BeatGrid& grid_a, const BeatGrid& grid_b_stretched,
                         int overlap_beats, std::size_t hop, int sample_rate,
                         long anchor_a = -1, long anchor_b = -1);

/// Cuts the planned windows out of both spectrograms. Both outputs share the
/// plan's common frame count; a window that does not fit raises errc::range.
std::pair<ComplexSpectrogram, ComplexSpectrogram> extract_segments(
    const ComplexSpectrogram& spec_a, const ComplexSpectrogram& spec_b,
    const OverlapPlan& plan);

}  // namespace seamix

#endif  // SEAMIX_ALIGN_HPP
