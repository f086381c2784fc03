#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "seamix/beats.hpp"
#include "seamix/spectral.hpp"
#include "seamix/synth.hpp"

namespace {

std::vector<std::complex<double>> random_signal(std::size_t n) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::complex<double>> x(n);
  for (auto& v : x) v = {dist(rng), dist(rng)};
  return x;
}

seamix::AudioClip noise_clip(double seconds) {
  std::mt19937 rng(43);
  std::uniform_real_distribution<float> dist(-0.9f, 0.9f);
  seamix::AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples.resize(static_cast<std::size_t>(seconds * 44100));
  for (auto& s : clip.samples) s = dist(rng);
  return clip;
}

}  // namespace

static void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  seamix::FftPlan plan(n);
  auto x = random_signal(n);
  for (auto _ : state) {
    plan.forward(x.data());
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fft)->Arg(256)->Arg(1024)->Arg(2048)->Arg(8192);

static void BM_Stft(benchmark::State& state) {
  const auto clip = noise_clip(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    auto spec = seamix::stft(clip, 2048, 512);
    benchmark::DoNotOptimize(spec.values.data());
  }
}
BENCHMARK(BM_Stft)->Arg(1)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_StftRoundTrip(benchmark::State& state) {
  const auto clip = noise_clip(5.0);
  for (auto _ : state) {
    auto back = seamix::istft(seamix::stft(clip, 2048, 512));
    benchmark::DoNotOptimize(back.samples.data());
  }
}
BENCHMARK(BM_StftRoundTrip)->Unit(benchmark::kMillisecond);

static void BM_PhaseVocoder(benchmark::State& state) {
  const auto spec = seamix::stft(noise_clip(10.0), 2048, 512);
  for (auto _ : state) {
    auto stretched = seamix::phase_vocoder_stretch(spec, 1.3);
    benchmark::DoNotOptimize(stretched.values.data());
  }
}
BENCHMARK(BM_PhaseVocoder)->Unit(benchmark::kMillisecond);

static void BM_OnsetAndTempo(benchmark::State& state) {
  seamix::ClickTrackParams params;
  params.seconds = 30.0;
  const auto db = seamix::magnitude_db(seamix::stft(seamix::make_click_track(params), 2048, 512));
  for (auto _ : state) {
    auto env = seamix::onset_envelope(db);
    auto tempo = seamix::estimate_tempo(env);
    benchmark::DoNotOptimize(tempo.bpm);
  }
}
BENCHMARK(BM_OnsetAndTempo)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
