#include "seamix/render.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>

namespace seamix {

ComplexSpectrogram composite(const ComplexSpectrogram& spec_a,
                             const ComplexSpectrogram& spec_b,
                             const CutLabeling& labels) {
  if (spec_a.frames != spec_b.frames || spec_a.bins != spec_b.bins) {
    throw Error(errc::shape, "composite inputs have different shapes");
  }
  if (labels.frames != spec_a.frames || labels.bins != spec_a.bins) {
    throw Error(errc::shape, "labeling shape does not match the spectrograms");
  }

  ComplexSpectrogram out = spec_a;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (labels.labels[i] == CutSide::sink) out.values[i] = spec_b.values[i];
  }
  return out;
}

TransitionResult render_transition(const AudioClip& track_a,
                                   const AudioClip& track_b_stretched,
                                   const OverlapPlan& plan,
                                   const ComplexSpectrogram& overlap_spec,
                                   const CutLabeling& labels) {
  if (overlap_spec.frames != plan.frames) {
    throw Error(errc::shape, "overlap spectrogram does not match the plan");
  }

  const std::size_t hop = overlap_spec.hop;
  const std::size_t a_cut = plan.a_start_frame * hop;
  // The last overlap frame may reach into the zero-padded STFT tail, so the
  // nominal end can overshoot the stretched track by less than one frame.
  const std::size_t b_end =
      std::min((plan.b_start_frame + plan.frames) * hop, track_b_stretched.samples.size());
  if (a_cut > track_a.samples.size() ||
      plan.b_start_frame * hop > track_b_stretched.samples.size()) {
    throw Error(errc::range, "plan windows fall outside the tracks");
  }

  const AudioClip overlap_audio = istft(overlap_spec);
  const std::size_t overlap_len = std::min<std::size_t>(plan.frames * hop,
                                                        overlap_audio.samples.size());

  TransitionResult result;
  result.plan = plan;
  result.cut_cost = labels.cut_cost;
  result.seam = extract_seam(labels);
  result.output.sample_rate = track_a.sample_rate;

  auto& out = result.output.samples;
  out.reserve(a_cut + overlap_len + (track_b_stretched.samples.size() - b_end));
  out.insert(out.end(), track_a.samples.begin(),
             track_a.samples.begin() + static_cast<std::ptrdiff_t>(a_cut));
  out.insert(out.end(), overlap_audio.samples.begin(),
             overlap_audio.samples.begin() + static_cast<std::ptrdiff_t>(overlap_len));
  out.insert(out.end(),
             track_b_stretched.samples.begin() + static_cast<std::ptrdiff_t>(b_end),
             track_b_stretched.samples.end());

  for (float& s : out) s = std::clamp(s, -1.0f, 1.0f);
  return result;
}

namespace {

// Magma-like anchors, interpolated to a 256-entry table at first use.
constexpr std::array<std::array<int, 3>, 15> kColormapAnchors{{
    {0, 0, 4},
    {18, 13, 49},
    {45, 17, 95},
    {75, 15, 127},
    {101, 26, 128},
    {126, 37, 126},
    {152, 47, 119},
    {178, 57, 108},
    {203, 70, 92},
    {224, 88, 74},
    {240, 112, 54},
    {249, 140, 38},
    {253, 170, 39},
    {250, 212, 96},
    {252, 253, 191},
}};

std::array<std::uint8_t, 3> colormap(double unit) {
  unit = std::clamp(unit, 0.0, 1.0);
  const double pos = unit * (kColormapAnchors.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos),
                                              kColormapAnchors.size() - 2);
  const double f = pos - static_cast<double>(i);
  std::array<std::uint8_t, 3> rgb{};
  for (int c = 0; c < 3; ++c) {
    const double v = kColormapAnchors[i][c] * (1.0 - f) + kColormapAnchors[i + 1][c] * f;
    rgb[c] = static_cast<std::uint8_t>(std::lround(v));
  }
  return rgb;
}

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& data) {
  put_u32_be(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + crc_start, static_cast<uInt>(4 + data.size()));
  put_u32_be(out, static_cast<std::uint32_t>(crc));
}

std::vector<std::uint8_t> encode_png_rgb(std::size_t width, std::size_t height,
                                         const std::vector<std::uint8_t>& pixels) {
  // One filter byte (0 = none) per scanline.
  std::vector<std::uint8_t> raw;
  raw.reserve(height * (1 + width * 3));
  for (std::size_t y = 0; y < height; ++y) {
    raw.push_back(0);
    const std::uint8_t* row = pixels.data() + y * width * 3;
    raw.insert(raw.end(), row, row + width * 3);
  }

  uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(compressed_size);
  if (compress2(compressed.data(), &compressed_size, raw.data(),
                static_cast<uLong>(raw.size()), 9) != Z_OK) {
    throw Error(errc::format, "deflate failed");
  }
  compressed.resize(compressed_size);

  std::vector<std::uint8_t> ihdr;
  put_u32_be(ihdr, static_cast<std::uint32_t>(width));
  put_u32_be(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // truecolor
  ihdr.push_back(0);  // deflate
  ihdr.push_back(0);  // adaptive filtering
  ihdr.push_back(0);  // no interlace

  std::vector<std::uint8_t> png{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  put_chunk(png, "IHDR", ihdr);
  put_chunk(png, "IDAT", compressed);
  put_chunk(png, "IEND", {});
  return png;
}

}  // namespace

std::vector<std::uint8_t> spectrogram_png(const DbSpectrogram& db, const Seam& seam) {
  if (seam.flips_per_bin.size() != db.bins) {
    throw Error(errc::shape, "seam bin count does not match the spectrogram");
  }

  // Rebuild the labeling from the flip lists so the full cut boundary can be
  // drawn, including the horizontal runs where the seam jumps between
  // adjacent bins; per-bin flip pixels alone would leave gaps.
  std::vector<std::uint8_t> sink_side(db.frames * db.bins, 0);
  for (std::size_t b = 0; b < db.bins; ++b) {
    std::uint8_t cur = 0;
    std::size_t next_flip = 0;
    const auto& flips = seam.flips_per_bin[b];
    for (std::size_t t = 0; t < db.frames; ++t) {
      while (next_flip < flips.size() && static_cast<std::size_t>(flips[next_flip]) == t) {
        cur ^= 1;
        ++next_flip;
      }
      sink_side[t * db.bins + b] = cur;
    }
  }
  const auto label = [&](std::size_t t, std::size_t b) { return sink_side[t * db.bins + b]; };
  const auto on_seam = [&](std::size_t t, std::size_t b) {
    if (t > 0 && label(t, b) != label(t - 1, b)) return true;
    if (b > 0 && label(t, b) != label(t, b - 1)) return true;
    if (b + 1 < db.bins && label(t, b) != label(t, b + 1)) return true;
    return false;
  };

  const std::size_t width = db.frames, height = db.bins;
  std::vector<std::uint8_t> pixels(width * height * 3);
  for (std::size_t b = 0; b < db.bins; ++b) {
    const std::size_t y = height - 1 - b;  // low frequencies at the bottom
    for (std::size_t t = 0; t < db.frames; ++t) {
      std::array<std::uint8_t, 3> rgb;
      if (on_seam(t, b)) {
        rgb = {255, 255, 0};
      } else {
        rgb = colormap((db.at(t, b) - kDbFloor) / -kDbFloor);
      }
      std::memcpy(&pixels[(y * width + t) * 3], rgb.data(), 3);
    }
  }
  return encode_png_rgb(width, height, pixels);
}

}  // namespace seamix
