#include "seamix/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace seamix {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> hann_window(std::size_t n) {
  // Periodic Hann, the variant whose shifted squares sum to a constant.
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

double princarg(double phase) {
  return phase - kTwoPi * std::round(phase / kTwoPi);
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0 || !std::has_single_bit(n)) {
    throw Error(errc::size, "fft size must be a power of two, got " + std::to_string(n));
  }
  rev_.resize(n);
  const int bits = std::countr_zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    rev_[i] = static_cast<std::uint32_t>(r);
  }
  twiddle_.resize(std::max<std::size_t>(n / 2, 1));
  for (std::size_t j = 0; j < twiddle_.size(); ++j) {
    const double a = -kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    twiddle_[j] = {std::cos(a), std::sin(a)};
  }
}

void FftPlan::run(std::complex<double>* x, bool inverse) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = rev_[i];
    if (i < r) std::swap(x[i], x[r]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::complex<double> w = twiddle_[j * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = x[start + j];
        const std::complex<double> v = x[start + j + half] * w;
        x[start + j] = u + v;
        x[start + j + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] *= scale;
  }
}

void FftPlan::forward(std::complex<double>* x) const { run(x, false); }
void FftPlan::inverse(std::complex<double>* x) const { run(x, true); }

std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x, bool inverse) {
  FftPlan plan(x.size());
  if (inverse) {
    plan.inverse(x.data());
  } else {
    plan.forward(x.data());
  }
  return x;
}

bool is_cola(std::size_t fft_size, std::size_t hop) {
  if (hop == 0 || fft_size == 0) return false;
  return fft_size % hop == 0 && fft_size / hop >= 3;
}

ComplexSpectrogram stft(const AudioClip& clip, std::size_t fft_size, std::size_t hop) {
  if (clip.samples.empty()) throw Error(errc::empty_input, "stft of empty clip");
  if (hop == 0 || hop > fft_size) {
    throw Error(errc::config, "hop must be in (0, fft_size]");
  }
  FftPlan plan(fft_size);
  const auto window = hann_window(fft_size);

  ComplexSpectrogram spec;
  spec.fft_size = fft_size;
  spec.hop = hop;
  spec.sample_rate = clip.sample_rate;
  spec.bins = fft_size / 2 + 1;
  spec.frames = (clip.samples.size() + hop - 1) / hop;
  spec.values.resize(spec.frames * spec.bins);

  std::vector<std::complex<double>> buf(fft_size);
  const std::size_t n = clip.samples.size();
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const std::size_t start = t * hop;
    for (std::size_t i = 0; i < fft_size; ++i) {
      const std::size_t s = start + i;
      const double v = s < n ? static_cast<double>(clip.samples[s]) : 0.0;
      buf[i] = v * window[i];
    }
    plan.forward(buf.data());
    for (std::size_t b = 0; b < spec.bins; ++b) spec.at(t, b) = buf[b];
  }
  return spec;
}

AudioClip istft(const ComplexSpectrogram& spec) {
  if (!is_cola(spec.fft_size, spec.hop)) {
    throw Error(errc::config, "istft requires a COLA-compliant fft_size/hop pair");
  }
  if (spec.bins != spec.fft_size / 2 + 1) {
    throw Error(errc::shape, "bins must equal fft_size/2 + 1");
  }

  AudioClip out;
  out.sample_rate = spec.sample_rate;
  if (spec.frames == 0) return out;

  FftPlan plan(spec.fft_size);
  const auto window = hann_window(spec.fft_size);
  const std::size_t out_len = (spec.frames - 1) * spec.hop + spec.fft_size;
  std::vector<double> num(out_len, 0.0), den(out_len, 0.0);

  std::vector<std::complex<double>> buf(spec.fft_size);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t b = 0; b < spec.bins; ++b) buf[b] = spec.at(t, b);
    for (std::size_t b = spec.bins; b < spec.fft_size; ++b) {
      buf[b] = std::conj(spec.at(t, spec.fft_size - b));
    }
    plan.inverse(buf.data());
    const std::size_t base = t * spec.hop;
    for (std::size_t i = 0; i < spec.fft_size; ++i) {
      num[base + i] += window[i] * buf[i].real();
      den[base + i] += window[i] * window[i];
    }
  }

  out.samples.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    out.samples[i] = den[i] > 1e-11 ? static_cast<float>(num[i] / den[i]) : 0.0f;
  }
  return out;
}

DbSpectrogram magnitude_db(const ComplexSpectrogram& spec) {
  DbSpectrogram db;
  db.frames = spec.frames;
  db.bins = spec.bins;
  db.fft_size = spec.fft_size;
  db.hop = spec.hop;
  db.sample_rate = spec.sample_rate;
  db.values.resize(spec.values.size());
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double mag = std::abs(spec.values[i]);
    db.values[i] = mag > 0.0 ? std::max(20.0 * std::log10(mag), kDbFloor) : kDbFloor;
  }
  return db;
}

ComplexSpectrogram phase_vocoder_stretch(const ComplexSpectrogram& spec, double ratio) {
  if (!(ratio >= 0.5 && ratio <= 2.0)) {
    throw Error(errc::range, "stretch ratio must lie in [0.5, 2.0]");
  }
  if (spec.frames == 0) throw Error(errc::empty_input, "cannot stretch empty spectrogram");

  ComplexSpectrogram out;
  out.fft_size = spec.fft_size;
  out.hop = spec.hop;
  out.sample_rate = spec.sample_rate;
  out.bins = spec.bins;
  out.frames = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(spec.frames) * ratio)));
  out.values.resize(out.frames * out.bins);

  const double hop = static_cast<double>(spec.hop);
  std::vector<double> acc_phase(spec.bins);
  for (std::size_t b = 0; b < spec.bins; ++b) acc_phase[b] = std::arg(spec.at(0, b));

  for (std::size_t m = 0; m < out.frames; ++m) {
    const double p = static_cast<double>(m) / ratio;
    std::size_t i0 = std::min(static_cast<std::size_t>(p), spec.frames - 1);
    const std::size_t i1 = std::min(i0 + 1, spec.frames - 1);
    const double frac = std::clamp(p - static_cast<double>(i0), 0.0, 1.0);

    for (std::size_t b = 0; b < spec.bins; ++b) {
      const double mag = (1.0 - frac) * std::abs(spec.at(i0, b)) + frac * std::abs(spec.at(i1, b));
      out.at(m, b) = std::polar(mag, acc_phase[b]);
    }

    // Advance the synthesis phase by the instantaneous frequency measured
    // between the source frames bracketing the read position.
    for (std::size_t b = 0; b < spec.bins; ++b) {
      const double omega = kTwoPi * static_cast<double>(b) / static_cast<double>(spec.fft_size);
      const double nominal = omega * hop;
      double advance = nominal;
      if (i1 > i0) {
        const double dphi = std::arg(spec.at(i1, b)) - std::arg(spec.at(i0, b));
        advance = princarg(dphi - nominal) + nominal;
      }
      acc_phase[b] = princarg(acc_phase[b] + advance);
    }
  }
  return out;
}

AudioClip time_stretch(const AudioClip& clip, double ratio, std::size_t fft_size,
                       std::size_t hop) {
  return istft(phase_vocoder_stretch(stft(clip, fft_size, hop), ratio));
}

}  // namespace seamix
