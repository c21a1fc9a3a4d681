#include <benchmark/benchmark.h>

#include <filesystem>

#include "revosim/analytics.hpp"
#include "revosim/cache_sim.hpp"
#include "revosim/engine.hpp"
#include "revosim/trace.hpp"

using namespace revosim;

namespace {

const RunResult& shared_run() {
  static const RunResult run = [] {
    SearchConfig cfg;
    cfg.rng_seed = 1;
    cfg.transfer_enabled = true;
    return run_search(cfg, SpaceSpec{});
  }();
  return run;
}

void bm_run_search(benchmark::State& state) {
  SearchConfig cfg;
  cfg.transfer_enabled = true;
  for (auto _ : state) {
    cfg.rng_seed = static_cast<std::uint64_t>(state.iterations());
    benchmark::DoNotOptimize(run_search(cfg, SpaceSpec{}));
  }
  state.SetItemsProcessed(state.iterations() * cfg.total_candidates);
}
BENCHMARK(bm_run_search)->Unit(benchmark::kMillisecond);

void bm_build_trie(benchmark::State& state) {
  const auto& run = shared_run();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_trie(run.events, 0.01));
  }
}
BENCHMARK(bm_build_trie)->Unit(benchmark::kMicrosecond);

void bm_window_histograms(benchmark::State& state) {
  const auto& run = shared_run();
  for (auto _ : state) {
    benchmark::DoNotOptimize(window_histograms(run.events, 100, 3, 1));
  }
}
BENCHMARK(bm_window_histograms)->Unit(benchmark::kMillisecond);

void bm_replay(benchmark::State& state) {
  const auto& run = shared_run();
  const CachePolicy policy = CachePolicy::tier_threshold(5, 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(replay(run.events, policy));
  }
}
BENCHMARK(bm_replay)->Unit(benchmark::kMillisecond);

void bm_read_trace(benchmark::State& state) {
  const auto& run = shared_run();
  const auto path = std::filesystem::temp_directory_path() / "revosim_bench_trace.jsonl";
  write_trace(run.events, path.string());
  for (auto _ : state) {
    benchmark::DoNotOptimize(read_trace(path.string()));
  }
  std::filesystem::remove(path);
}
BENCHMARK(bm_read_trace)->Unit(benchmark::kMillisecond);

}  // namespace
