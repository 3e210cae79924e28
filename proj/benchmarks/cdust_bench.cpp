#include <benchmark/benchmark.h>

#include "cdust/cdust.hpp"

namespace cdust {
namespace {

const Square kUnit{{0, 0}, 1};

void BM_GenerateSquares(benchmark::State& state) {
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto squares = generate_cantor(Alpha(0.3), depth).squares();
    benchmark::DoNotOptimize(squares.data());
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (2 * depth)));
}
BENCHMARK(BM_GenerateSquares)->DenseRange(4, 8, 2);

void BM_Rasterize(benchmark::State& state) {
  const auto squares = generate_cantor(Alpha(0.4), 7).squares();
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) {
    BoxGrid g = rasterize(std::span<const Square>(squares), kUnit, level);
    benchmark::DoNotOptimize(g.raw().data());
  }
}
BENCHMARK(BM_Rasterize)->Arg(8)->Arg(10)->Arg(12);

void BM_BoxCounts(benchmark::State& state) {
  const auto squares = generate_cantor(Alpha(0.4), 7).squares();
  const int level = static_cast<int>(state.range(0));
  const BoxGrid g = rasterize(std::span<const Square>(squares), kUnit, level);
  const auto schedule = ScaleSchedule::range(1, level);
  for (auto _ : state) benchmark::DoNotOptimize(box_counts(g, schedule));
}
BENCHMARK(BM_BoxCounts)->Arg(8)->Arg(10)->Arg(12);

void BM_ApplyIsometry(benchmark::State& state) {
  const auto quads = place_centered(generate_cantor(alpha_for_dimension(1.7), 6), 1.0, Isometry::identity());
  Rng rng(1);
  for (auto _ : state) {
    const Isometry iso = sample_isometry(rng, kUnit);
    BoxGrid g = apply_isometry(std::span<const Quad>(quads), iso, kUnit, 10);
    benchmark::DoNotOptimize(g.raw().data());
  }
}
BENCHMARK(BM_ApplyIsometry);

void BM_LocalDimension(benchmark::State& state) {
  const auto squares = generate_cantor(Alpha(0.4), 8).squares();
  const BoxGrid g = rasterize(std::span<const Square>(squares), kUnit, 10);
  const OccupancyIndex index(g);
  for (auto _ : state) benchmark::DoNotOptimize(local_dimension(index, {0.2, 0.2}, 0.1));
}
BENCHMARK(BM_LocalDimension);

void BM_JohnPaths(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_john(Alpha(0.25), 3, 50, 7).epsilon);
}
BENCHMARK(BM_JohnPaths)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cdust

BENCHMARK_MAIN();
