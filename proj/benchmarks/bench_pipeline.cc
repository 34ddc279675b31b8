#include <benchmark/benchmark.h>

#include "hais/pipeline.hpp"
#include "hais/spatial_hash.hpp"
#include "hais/synth.hpp"

namespace {

using namespace hais;

struct BenchScene {
  PointCloud cloud;
  PerPointPrediction prediction;
  std::vector<Vec3> shifted;
};

BenchScene make_scene(std::size_t points_per_instance, std::size_t instances) {
  SceneSpec spec;
  spec.min_instances = instances;
  spec.max_instances = instances;
  spec.class_sizes = {{1, {points_per_instance, points_per_instance}},
                      {2, {points_per_instance, points_per_instance}}};
  spec.extent = 12.0;
  spec.background_fraction = 0.1;
  spec.seed = 99;
  BenchScene scene;
  scene.cloud = generate_scene(spec);
  NoiseSpec noise;
  noise.shift_noise_sigma = 0.03;
  noise.shift_dropout_fraction = 0.2;
  noise.seed = 99;
  scene.prediction = degrade_predictions(oracle_predictions(scene.cloud), noise);
  scene.shifted = apply_shift(scene.cloud.positions, scene.prediction.shift);
  return scene;
}

void BM_BuildSpatialHash(benchmark::State& state) {
  const BenchScene scene = make_scene(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) {
    const SpatialHashGrid grid(scene.shifted, 0.03);
    benchmark::DoNotOptimize(grid.point_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scene.shifted.size()));
}
BENCHMARK(BM_BuildSpatialHash)->Arg(1000)->Arg(5000);

void BM_NeighborQueries(benchmark::State& state) {
  const BenchScene scene = make_scene(static_cast<std::size_t>(state.range(0)), 8);
  const SpatialHashGrid grid(scene.shifted, 0.03);
  std::vector<PointIndex> buf;
  for (auto _ : state) {
    for (std::size_t i = 0; i < grid.point_count(); i += 17) {
      grid.neighbors_within(static_cast<PointIndex>(i), 0.03, buf);
      benchmark::DoNotOptimize(buf.size());
    }
  }
}
BENCHMARK(BM_NeighborQueries)->Arg(1000)->Arg(5000);

void BM_PointAggregate(benchmark::State& state) {
  const BenchScene scene = make_scene(static_cast<std::size_t>(state.range(0)), 8);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    const InstanceSet set =
        point_aggregate(scene.shifted, scene.prediction.semantic, {0}, 0.03, threads);
    benchmark::DoNotOptimize(set.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scene.shifted.size()));
}
BENCHMARK(BM_PointAggregate)->Args({2000, 1})->Args({2000, 4})->Args({8000, 1})->Args({8000, 4});

void BM_FullPipeline(benchmark::State& state) {
  const BenchScene scene = make_scene(static_cast<std::size_t>(state.range(0)), 8);
  PipelineOptions options;
  options.threads = static_cast<int>(state.range(1));
  const HeuristicMaskProvider provider(2.0);
  for (auto _ : state) {
    const PipelineResult result =
        run_pipeline(scene.cloud, scene.prediction, options, provider);
    benchmark::DoNotOptimize(result.instances.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scene.cloud.size()));
}
BENCHMARK(BM_FullPipeline)->Args({2000, 1})->Args({8000, 1})->Args({8000, 4});

}  // namespace

BENCHMARK_MAIN();
