#include "seamix/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace seamix {

namespace {

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void write_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

}  // namespace

AudioClip decode_wav(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(errc::format, "not a RIFF/WAVE container");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* hdr = bytes.data() + pos;
    const std::uint32_t chunk_size = read_u32(hdr + 4);
    pos += 8;
    if (pos + chunk_size > bytes.size()) {
      throw Error(errc::format, "chunk overruns container");
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw Error(errc::format, "fmt chunk too small");
      const std::uint8_t* f = bytes.data() + pos;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      block_align = read_u16(f + 12);
      bits = read_u16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + pos;
      data_size = chunk_size;
    }
    pos += chunk_size + (chunk_size & 1);  // chunks are word aligned
  }

  if (!have_fmt || data == nullptr) {
    throw Error(errc::format, "missing fmt or data chunk");
  }
  if (format != kFormatPcm && format != kFormatFloat) {
    throw Error(errc::unsupported, "unsupported codec " + std::to_string(format));
  }
  if (channels != 1 && channels != 2) {
    throw Error(errc::unsupported, "unsupported channel count " + std::to_string(channels));
  }
  if ((format == kFormatPcm && bits != 16) || (format == kFormatFloat && bits != 32)) {
    throw Error(errc::unsupported, "unsupported sample width " + std::to_string(bits));
  }
  if (rate == 0) throw Error(errc::format, "zero sample rate");
  const std::size_t bytes_per_sample = bits / 8;
  if (block_align != channels * bytes_per_sample) {
    throw Error(errc::format, "inconsistent block alignment");
  }
  if (data_size % block_align != 0) {
    throw Error(errc::format, "data chunk not frame aligned");
  }

  const std::size_t frame_count = data_size / block_align;
  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.samples.resize(frame_count);

  for (std::size_t i = 0; i < frame_count; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const std::uint8_t* s = data + (i * channels + c) * bytes_per_sample;
      if (format == kFormatPcm) {
        const std::int16_t v = static_cast<std::int16_t>(read_u16(s));
        acc += v / 32768.0;
      } else {
        float v;
        std::uint32_t raw = read_u32(s);
        std::memcpy(&v, &raw, sizeof v);
        if (!std::isfinite(v)) throw Error(errc::format, "non-finite float sample");
        acc += std::clamp(v, -1.0f, 1.0f);
      }
    }
    clip.samples[i] = static_cast<float>(acc / channels);
  }
  return clip;
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  if (clip.samples.empty()) throw Error(errc::empty_input, "cannot encode empty clip");

  const std::uint32_t data_size = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);

  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  write_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  write_u32(out, 16);
  write_u16(out, kFormatPcm);
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  write_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  write_u16(out, 2);   // block align
  write_u16(out, 16);  // bits
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  write_u32(out, data_size);

  for (float x : clip.samples) {
    const double clamped = std::clamp(static_cast<double>(x), -1.0, 1.0);
    long q = std::lrint(clamped * 32768.0);
    q = std::clamp(q, -32768L, 32767L);
    write_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) throw Error(errc::range, "target rate must be positive");
  if (clip.sample_rate <= 0) throw Error(errc::range, "clip has no sample rate");
  if (target_rate == clip.sample_rate) return clip;

  AudioClip out;
  out.sample_rate = target_rate;
  if (clip.samples.empty()) return out;

  const double src_per_out = static_cast<double>(clip.sample_rate) / target_rate;
  const std::size_t out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(clip.samples.size()) * target_rate / clip.sample_rate));
  out.samples.resize(out_len);

  constexpr int kTaps = 32;  // zero crossings per side
  const double cutoff = std::min(1.0, static_cast<double>(target_rate) / clip.sample_rate);
  const double support = kTaps / cutoff;
  const std::size_t n = clip.samples.size();

  for (std::size_t i = 0; i < out_len; ++i) {
    const double p = i * src_per_out;
    const long k_lo = std::max(0L, static_cast<long>(std::ceil(p - support)));
    const long k_hi = std::min(static_cast<long>(n) - 1, static_cast<long>(std::floor(p + support)));
    double acc = 0.0, norm = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) {
      const double d = p - k;
      double kernel;
      if (d == 0.0) {
        kernel = cutoff;
      } else {
        const double a = std::numbers::pi * cutoff * d;
        kernel = cutoff * std::sin(a) / a;
      }
      kernel *= 0.5 + 0.5 * std::cos(std::numbers::pi * d / support);  // Hann taper
      acc += clip.samples[k] * kernel;
      norm += kernel;
    }
    out.samples[i] = norm != 0.0 ? static_cast<float>(acc / norm) : 0.0f;
  }
  return out;
}

AudioClip load_wav_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::format, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

void save_wav_file(const std::filesystem::path& path, const AudioClip& clip) {
  const auto bytes = encode_wav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(errc::format, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace seamix
