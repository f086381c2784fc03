#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "seamix/mincut.hpp"

namespace {

seamix::FlowNetwork random_grid(std::size_t frames, std::size_t bins) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 20.0);
  std::vector<double> time_caps((frames - 1) * bins), freq_caps(frames * (bins - 1));
  for (double& c : time_caps) c = dist(rng);
  for (double& c : freq_caps) c = dist(rng);
  return seamix::build_grid_network(frames, bins, time_caps, freq_caps);
}

}  // namespace

static void BM_BuildGridGraph(benchmark::State& state) {
  const auto frames = static_cast<std::size_t>(state.range(0));
  seamix::DbSpectrogram a, b;
  a.frames = b.frames = frames;
  a.bins = b.bins = 513;
  a.values.assign(frames * 513, -40.0);
  b.values.assign(frames * 513, -35.0);
  for (auto _ : state) {
    auto net = seamix::build_grid_graph(a, b);
    benchmark::DoNotOptimize(net.arc_cap.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(frames) * 513);
}
BENCHMARK(BM_BuildGridGraph)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

// Solve time grows quickly with the time extent of the grid: augmenting
// paths span the full frame axis, so long overlaps are the expensive case.
static void BM_MaxFlowGrid(benchmark::State& state) {
  const auto net = random_grid(static_cast<std::size_t>(state.range(0)),
                               static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    auto cut = seamix::max_flow_min_cut(net);
    benchmark::DoNotOptimize(cut.cut_cost);
  }
}
BENCHMARK(BM_MaxFlowGrid)
    ->Args({32, 64})
    ->Args({64, 256})
    ->Args({128, 513})
    ->Args({256, 513})
    ->Unit(benchmark::kMillisecond);

static void BM_ExtractSeam(benchmark::State& state) {
  const auto cut = seamix::max_flow_min_cut(random_grid(128, 513));
  for (auto _ : state) {
    auto seam = seamix::extract_seam(cut);
    benchmark::DoNotOptimize(seam.flips_per_bin.data());
  }
}
BENCHMARK(BM_ExtractSeam)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
