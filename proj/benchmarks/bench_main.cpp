#include <benchmark/benchmark.h>

#include "gbl/environment.hpp"
#include "gbl/harness.hpp"
#include "gbl/policy.hpp"

namespace {

using namespace gbl;

void BM_BobwRound(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto g = make_graph(GraphFamily::random_observable, k, 0.2, 1);
  BobwPolicy policy(BobwParams(g, greedy_dominating_set(g), 0.05), 1 << 30);
  std::vector<double> means(static_cast<std::size_t>(k), 0.4);
  means[0] = 0.7;
  const Environment env = StochasticEnv::make(means);
  CounterRng sampling = make_rng(1).substream("policy");
  CounterRng rewards = make_rng(1).substream("rewards");
  std::vector<double> r(static_cast<std::size_t>(k));
  std::int64_t t = 1;
  for (auto _ : state) {
    const auto& dist = policy.distribution();
    const Arm arm = sample_arm(dist.probs, sampling.uniform());
    reward_vector(env, t++, rewards, r);
    benchmark::DoNotOptimize(policy.observe(make_observation(g, arm, r)));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BobwRound)->Arg(5)->Arg(20)->Arg(100);

void BM_Exp3gRound(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto g = make_graph(GraphFamily::random_observable, k, 0.2, 1);
  Exp3gPolicy policy(g, greedy_dominating_set(g), 1 << 30);
  const Environment env = AdversarialEnv::drift(std::vector<double>(static_cast<std::size_t>(k), 0.5), 500, 0.3, 1);
  CounterRng sampling = make_rng(1).substream("policy");
  CounterRng unused;
  std::vector<double> r(static_cast<std::size_t>(k));
  std::int64_t t = 1;
  for (auto _ : state) {
    const auto& dist = policy.distribution();
    const Arm arm = sample_arm(dist.probs, sampling.uniform());
    reward_vector(env, t++, unused, r);
    benchmark::DoNotOptimize(policy.observe(make_observation(g, arm, r)));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Exp3gRound)->Arg(5)->Arg(20)->Arg(100);

void BM_GreedyDominatingSet(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto g = make_graph(GraphFamily::random_observable, k, 0.05, 3);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_dominating_set(g));
}
BENCHMARK(BM_GreedyDominatingSet)->Arg(20)->Arg(200)->Arg(1000);

void BM_RunOnce(benchmark::State& state) {
  RunConfig c;
  c.graph = GraphRecipe{GraphFamily::bar, 6, std::nullopt, std::nullopt};
  c.environment = StochasticEnv::make({0.7, 0.4, 0.4, 0.4, 0.4, 0.4});
  c.horizon = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(run_once(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunOnce)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
