#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "odd/dataset.hpp"
#include "odd/diagram.hpp"
#include "odd/heuristic.hpp"
#include "odd/milp.hpp"
#include "odd/rng.hpp"
#include "odd/skeleton.hpp"

namespace {

// Noisy two-cluster set on a 0.05 grid, the same flavor the tests train on.
odd::Dataset synthetic(int n, int dim, std::uint64_t seed) {
  odd::Rng rng(seed);
  std::vector<odd::Sample> samples;
  for (int i = 0; i < n; ++i) {
    const int cls = static_cast<int>(rng.below(2));
    std::vector<double> x;
    for (int j = 0; j < dim; ++j) {
      const double base = cls == 0 ? 0.2 : 0.7;
      x.push_back(base + 0.05 * static_cast<double>(rng.below(5)));
    }
    samples.push_back({std::move(x), cls});
  }
  samples[0].class_id = 0;
  samples[1].class_id = 1;
  std::vector<std::string> features;
  for (int j = 0; j < dim; ++j) features.push_back("x" + std::to_string(j));
  return odd::Dataset(std::move(samples), std::move(features), {"a", "b"});
}

void bm_build_model(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const odd::Dataset ds = synthetic(n, 4, 17);
  const odd::GraphTopology topo = odd::build_graph(odd::Skeleton::parse("1-2-4", 2));
  odd::ModelConfig cfg;
  cfg.alpha = 0.1;
  for (auto _ : state) {
    odd::BuiltModel built = odd::build_model(ds, topo, cfg);
    benchmark::DoNotOptimize(built.model.constraints().size());
  }
}
BENCHMARK(bm_build_model)->Arg(32)->Arg(128)->Arg(512);

void bm_emit_lp(benchmark::State& state) {
  const odd::Dataset ds = synthetic(static_cast<int>(state.range(0)), 4, 17);
  const odd::GraphTopology topo = odd::build_graph(odd::Skeleton::parse("1-2-4", 2));
  odd::ModelConfig cfg;
  cfg.alpha = 0.1;
  const odd::BuiltModel built = odd::build_model(ds, topo, cfg);
  for (auto _ : state) {
    const std::string text = odd::emit_lp(built.model);
    benchmark::DoNotOptimize(text.size());
  }
}
BENCHMARK(bm_emit_lp)->Arg(128)->Arg(512);

void bm_greedy_construction(benchmark::State& state) {
  const odd::Dataset ds = synthetic(static_cast<int>(state.range(0)), 8, 21);
  const odd::GraphTopology topo = odd::build_graph(odd::Skeleton::parse("1-2-4-8", 2));
  odd::HeuristicConfig cfg;
  cfg.alpha = 0.1;
  std::uint64_t start = 0;
  for (auto _ : state) {
    odd::Rng rng = odd::Rng::stream(7, start++);
    const odd::DecisionDiagram dd = odd::construct_once(ds, topo, cfg, rng);
    benchmark::DoNotOptimize(dd.n_active());
  }
}
BENCHMARK(bm_greedy_construction)->Arg(256)->Arg(1024);

void bm_predict(benchmark::State& state) {
  const odd::Dataset ds = synthetic(1024, 8, 21);
  const odd::GraphTopology topo = odd::build_graph(odd::Skeleton::parse("1-2-4-8", 2));
  odd::HeuristicConfig cfg;
  cfg.alpha = 0.1;
  cfg.max_starts = 2;
  const odd::HeuristicResult res = odd::multi_start(ds, topo, cfg);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& x = ds.sample(static_cast<int>(i++ % 1024)).features;
    benchmark::DoNotOptimize(odd::predict(res.diagram, x).terminal);
  }
}
BENCHMARK(bm_predict);

}  // namespace

BENCHMARK_MAIN();
