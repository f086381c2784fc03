#ifndef SEAMIX_AUDIO_IO_HPP
#define SEAMIX_AUDIO_IO_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "seamix/errors.hpp"

namespace seamix {

/// Mono PCM audio. Samples live in [-1, 1] and are always finite.
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = 0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

/// Parses a RIFF/WAVE container holding PCM s16le or f32le data with one or
/// two channels. Stereo is downmixed by channel average, 16-bit samples are
/// scaled by 1/32768, float samples are clamped to [-1, 1].
///
/// Throws errc::format for malformed containers and errc::unsupported for
/// codecs outside the profile above.
AudioClip decode_wav(const std::vector<std::uint8_t>& bytes);

/// Serializes the clip as mono PCM s16le. Samples are clamped to [-1, 1]
/// before quantization. Throws errc::empty_input for empty clips.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);

/// Windowed-sinc resampler (Hann window, 32 zero crossings per side, kernel
/// gain normalized per output sample). Resampling to the input rate returns
/// the input unchanged.
AudioClip resample(const AudioClip& clip, int target_rate);

AudioClip load_wav_file(const std::filesystem::path& path);
void save_wav_file(const std::filesystem::path& path, const AudioClip& clip);

}  // namespace seamix

#endif  // SEAMIX_AUDIO_IO_HPP
