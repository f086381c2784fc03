#ifndef SEAMIX_SPECTRAL_HPP
#define SEAMIX_SPECTRAL_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "seamix/audio_io.hpp"
#include "seamix/errors.hpp"

namespace seamix {

/// One-sided complex STFT, row-major (frame-major, bin-minor).
/// bins == fft_size / 2 + 1.
struct ComplexSpectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<std::complex<double>> values;
  std::size_t fft_size = 0;
  std::size_t hop = 0;
  int sample_rate = 0;

  std::complex<double>& at(std::size_t frame, std::size_t bin) {
    return values[frame * bins + bin];
  }
  const std::complex<double>& at(std::size_t frame, std::size_t bin) const {
    return values[frame * bins + bin];
  }
};

/// Real dB magnitudes with a hard floor at kDbFloor.
struct DbSpectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> values;
  std::size_t fft_size = 0;
  std::size_t hop = 0;
  int sample_rate = 0;

  double& at(std::size_t frame, std::size_t bin) { return values[frame * bins + bin]; }
  double at(std::size_t frame, std::size_t bin) const { return values[frame * bins + bin]; }
};

constexpr double kDbFloor = -100.0;

/// Radix-2 FFT over a fixed power-of-two size. Precomputes the bit-reversal
/// permutation and twiddle table so repeated transforms stay cheap.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);  // throws errc::size unless n is a power of two

  std::size_t size() const { return n_; }
  void forward(std::complex<double>* x) const;
  /// Inverse transform with 1/N scaling.
  void inverse(std::complex<double>* x) const;

 private:
  void run(std::complex<double>* x, bool inverse) const;

  std::size_t n_;
  std::vector<std::uint32_t> rev_;
  std::vector<std::complex<double>> twiddle_;  // exp(-2*pi*i*j/n), j < n/2
};

/// Out-of-place convenience wrapper around FftPlan.
std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x,
                                      bool inverse = false);

/// Hann-windowed STFT. Frame t covers samples [t*hop, t*hop + fft_size) with
/// zero padding past the end of the clip; frame count is ceil(len / hop).
ComplexSpectrogram stft(const AudioClip& clip, std::size_t fft_size, std::size_t hop);

/// Weighted overlap-add inverse with window-square normalization. Requires a
/// COLA-compliant configuration (hop divides fft_size, at least 3x overlap).
AudioClip istft(const ComplexSpectrogram& spec);

/// 20*log10 magnitude, floored at kDbFloor so silent bins stay finite.
DbSpectrogram magnitude_db(const ComplexSpectrogram& spec);

/// Time-stretches a spectrogram by ratio in [0.5, 2.0]: magnitudes are
/// linearly interpolated between source frames, phases advance by the
/// accumulated per-bin instantaneous frequency.
ComplexSpectrogram phase_vocoder_stretch(const ComplexSpectrogram& spec, double ratio);

/// stft -> phase_vocoder_stretch -> istft. Output duration is the input
/// duration times ratio, within one hop.
AudioClip time_stretch(const AudioClip& clip, double ratio, std::size_t fft_size,
                       std::size_t hop);

/// True if (fft_size, hop) gives constant overlap-add for the squared Hann
/// window used by stft/istft.
bool is_cola(std::size_t fft_size, std::size_t hop);

}  // namespace seamix

#endif  // SEAMIX_SPECTRAL_HPP
