#include "seamix/beats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace seamix {

OnsetEnvelope onset_envelope(const DbSpectrogram& spec) {
  if (spec.frames < 2) {
    throw Error(errc::too_short, "onset envelope needs at least 2 frames");
  }

  OnsetEnvelope env;
  env.hop = spec.hop;
  env.sample_rate = spec.sample_rate;
  // Flux spikes in the frame whose window tail first reaches an event, so
  // the event itself sits roughly a window behind the frame start. Kept a
  // whole number of hops so beat-to-frame snapping stays exact.
  env.event_offset = spec.fft_size >= spec.hop ? spec.fft_size - spec.hop : 0;
  env.values.assign(spec.frames, 0.0);

  for (std::size_t t = 1; t < spec.frames; ++t) {
    double flux = 0.0;
    for (std::size_t b = 0; b < spec.bins; ++b) {
      const double diff = spec.at(t, b) - spec.at(t - 1, b);
      if (diff > 0.0) flux += diff;
    }
    env.values[t] = flux;
  }

  // The final windows run into the zero-padded tail, where the truncation
  // itself registers as a huge broadband onset. Drop them.
  if (spec.hop > 0) {
    const std::size_t tail = std::min(spec.frames, spec.fft_size / spec.hop);
    for (std::size_t t = spec.frames - tail; t < spec.frames; ++t) env.values[t] = 0.0;
  }

  const double mean =
      std::accumulate(env.values.begin(), env.values.end(), 0.0) / env.values.size();
  for (double& v : env.values) v = std::max(0.0, v - mean);
  return env;
}

TempoEstimate estimate_tempo(const OnsetEnvelope& env, const TempoParams& params) {
  if (env.duration() < 5.0) {
    throw Error(errc::too_short, "tempo estimation needs at least 5 s of audio");
  }

  const double fr = env.frame_rate();
  const auto lag_for_bpm = [&](double bpm) { return 60.0 * fr / bpm; };
  const std::size_t n = env.values.size();
  const std::size_t lag_min =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(lag_for_bpm(params.max_bpm))));
  const std::size_t lag_max = std::min<std::size_t>(
      n - 1, static_cast<std::size_t>(std::ceil(lag_for_bpm(params.min_bpm))));

  const double energy =
      std::inner_product(env.values.begin(), env.values.end(), env.values.begin(), 0.0);
  if (energy <= 0.0 || lag_min > lag_max) {
    return {params.prior_center_bpm, true};
  }

  const auto prior = [&](double bpm) {
    const double z = std::log2(bpm / params.prior_center_bpm) / params.prior_sigma_log2;
    return std::exp(-0.5 * z * z);
  };

  // Smooth lightly first; raw flux spikes are 1-2 frames wide and would make
  // the fractional-lag interpolation below too jagged.
  std::vector<double> smooth(n, 0.0);
  constexpr int kHalfKernel = 2;
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0, wsum = 0.0;
    for (int d = -kHalfKernel; d <= kHalfKernel; ++d) {
      const long s = static_cast<long>(t) + d;
      if (s < 0 || s >= static_cast<long>(n)) continue;
      const double w = 0.5 + 0.5 * std::cos(std::numbers::pi * d / (kHalfKernel + 1.0));
      acc += env.values[static_cast<std::size_t>(s)] * w;
      wsum += w;
    }
    smooth[t] = acc / wsum;
  }

  // Autocorrelation sampled at each candidate tempo's exact (fractional)
  // lag. Integer lags would handicap fast tempi, whose short periods rarely
  // land on the frame grid, and fold them onto their half tempo.
  const auto autocorr_at = [&](double lag) {
    if (lag >= static_cast<double>(n) - 1.0) return 0.0;
    double r = 0.0;
    const auto limit = static_cast<std::size_t>(std::floor(static_cast<double>(n) - 1.0 - lag));
    for (std::size_t t = 0; t <= limit; ++t) {
      const double pos = static_cast<double>(t) + lag;
      const auto i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      r += smooth[t] * ((1.0 - frac) * smooth[i] + frac * smooth[i + 1]);
    }
    return r;
  };

  constexpr double kBpmStep = 0.5;
  const int steps = static_cast<int>((params.max_bpm - params.min_bpm) / kBpmStep);
  std::vector<double> score(steps + 1);
  int best_idx = 0;
  for (int i = 0; i <= steps; ++i) {
    const double bpm = params.min_bpm + i * kBpmStep;
    score[i] = autocorr_at(lag_for_bpm(bpm)) * prior(bpm);
    if (score[i] > score[best_idx]) best_idx = i;
  }
  if (score[best_idx] <= 0.0) return {params.prior_center_bpm, true};

  // Fine scan around a candidate; the coarse grid plus a parabolic fit is
  // not trustworthy on the flat score plateaus these surfaces develop.
  const auto refine = [&](double center) {
    const double lo = std::max(params.min_bpm, center - 2.0);
    const double hi = std::min(params.max_bpm, center + 2.0);
    double best_bpm = center, best_score = -std::numeric_limits<double>::infinity();
    for (double b = lo; b <= hi + 1e-9; b += 0.05) {
      const double s = autocorr_at(lag_for_bpm(b)) * prior(b);
      if (s > best_score) {
        best_score = s;
        best_bpm = b;
      }
    }
    return best_bpm;
  };

  double bpm = refine(params.min_bpm + best_idx * kBpmStep);

  // Subdivision check: when the envelope also pulses once per half period,
  // the doubled tempo explains it just as well and is the one a listener
  // taps within this range; a pure pulse train otherwise drifts onto its
  // half tempo because the prior is nearly flat across an octave.
  while (true) {
    const double doubled = 2.0 * bpm;
    if (doubled > params.max_bpm + 2.0) break;
    const double candidate = refine(std::min(doubled, params.max_bpm));
    if (candidate <= bpm + 1.0) break;
    if (autocorr_at(lag_for_bpm(candidate)) < 0.9 * autocorr_at(lag_for_bpm(bpm))) break;
    bpm = candidate;
  }
  return {std::clamp(bpm, params.min_bpm, params.max_bpm), false};
}

BeatGrid track_beats(const OnsetEnvelope& env, double tempo_bpm, double tightness) {
  if (!(tempo_bpm >= 60.0 && tempo_bpm <= 180.0)) {
    throw Error(errc::range, "tempo must lie in [60, 180] BPM");
  }
  if (env.values.size() < 2) {
    throw Error(errc::too_short, "beat tracking needs at least 2 frames");
  }

  const double period = 60.0 / tempo_bpm * env.frame_rate();  // frames per beat
  const std::size_t n = env.values.size();

  // Scale-normalize so the tightness term is balanced against onset strength
  // regardless of input loudness.
  double mean = std::accumulate(env.values.begin(), env.values.end(), 0.0) / n;
  double var = 0.0;
  for (double v : env.values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = sd > 0.0 ? env.values[i] / sd : env.values[i];

  const long d_lo = std::max(1L, std::lround(period / 2.0));
  const long d_hi = std::lround(period * 2.0);

  std::vector<double> best(n);
  std::vector<long> from(n, -1);
  for (std::size_t t = 0; t < n; ++t) {
    // Frames with no reachable predecessor start fresh; everything else
    // must chain, even through weak-onset stretches, so the sequence spans
    // the whole track.
    double best_prev = -std::numeric_limits<double>::infinity();
    long best_from = -1;
    const long lo = static_cast<long>(t) - d_hi;
    const long hi = static_cast<long>(t) - d_lo;
    for (long p = std::max(0L, lo); p <= hi; ++p) {
      const double interval = static_cast<double>(static_cast<long>(t) - p);
      const double dev = std::log(interval / period);
      const double candidate = best[p] - tightness * dev * dev;
      if (candidate > best_prev) {
        best_prev = candidate;
        best_from = p;
      }
    }
    best[t] = u[t] + (best_from >= 0 ? best_prev : 0.0);
    from[t] = best_from;
  }

  // Backtrace from the strongest cumulative score within the final beat
  // period, so the sequence reaches the end of the track.
  const std::size_t tail = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::lround(period)) + 1);
  std::size_t end = n - tail;
  for (std::size_t t = n - tail; t < n; ++t) {
    if (best[t] > best[end]) end = t;
  }

  std::vector<std::size_t> frames;
  for (long t = static_cast<long>(end); t >= 0; t = from[t]) {
    frames.push_back(static_cast<std::size_t>(t));
    if (from[t] < 0) break;
  }
  std::reverse(frames.begin(), frames.end());

  // The mandatory chaining plants beats in silent lead-ins and tails (the
  // chain must reach the no-predecessor zone). Trim edge beats with
  // negligible onset strength relative to the median beat.
  if (frames.size() > 2) {
    std::vector<double> strengths;
    strengths.reserve(frames.size());
    for (std::size_t f : frames) strengths.push_back(u[f]);
    std::vector<double> sorted = strengths;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    std::size_t first = 0, last = frames.size();
    while (first + 2 < last && strengths[first] < 0.1 * median) ++first;
    while (last > first + 2 && strengths[last - 1] < 0.1 * median) --last;
    frames.assign(frames.begin() + static_cast<std::ptrdiff_t>(first),
                  frames.begin() + static_cast<std::ptrdiff_t>(last));
  }

  BeatGrid grid;
  grid.tempo_bpm = tempo_bpm;
  grid.beat_times.reserve(frames.size());
  for (std::size_t f : frames) grid.beat_times.push_back(env.frame_time(f));
  return grid;
}

}  // namespace seamix
