#ifndef SEAMIX_RENDER_HPP
#define SEAMIX_RENDER_HPP

#include <cstdint>
#include <vector>

#include "seamix/align.hpp"
#include "seamix/mincut.hpp"
#include "seamix/spectral.hpp"

namespace seamix {

/// Fully rendered transition: the spliced output track plus the seam data
/// that produced it.
struct TransitionResult {
  AudioClip output;
  Seam seam;
  double cut_cost = 0.0;
  OverlapPlan plan;
};

/// Element-wise selection: source-labeled cells keep spec_a's complex value,
/// sink-labeled cells take spec_b's. Shapes must match.
ComplexSpectrogram composite(const ComplexSpectrogram& spec_a,
                             const ComplexSpectrogram& spec_b,
                             const CutLabeling& labels);

/// Splices A's head, the inverse transform of the composited overlap, and
/// B's tail into one clip. Joins sit on STFT frame boundaries; the output is
/// clamped to [-1, 1].
TransitionResult render_transition(const AudioClip& track_a,
                                   const AudioClip& track_b_stretched,
                                   const OverlapPlan& plan,
                                   const ComplexSpectrogram& overlap_spec,
                                   const CutLabeling& labels);

/// 8-bit RGB PNG of the spectrogram (time left to right, frequency bottom to
/// top, one pixel per cell) through a fixed magma-like colormap over
/// [-100, 0] dB, with the seam overdrawn in bright yellow.
std::vector<std::uint8_t> spectrogram_png(const DbSpectrogram& db, const Seam& seam);

}  // namespace seamix

#endif  // SEAMIX_RENDER_HPP
