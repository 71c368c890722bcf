#include <benchmark/benchmark.h>

#include "safesched/fixtures.hpp"
#include "safesched/mcts.hpp"
#include "safesched/mean_cost.hpp"
#include "safesched/policies.hpp"
#include "safesched/sim_env.hpp"

using namespace safesched;

static void BM_BuildExplicit(benchmark::State& state, const char* name) {
  const auto sys = load_fixture(name);
  for (auto _ : state) {
    auto m = build_explicit(sys, 2000000);
    benchmark::DoNotOptimize(m.size());
  }
}
BENCHMARK_CAPTURE(BM_BuildExplicit, example1, "example1");
BENCHMARK_CAPTURE(BM_BuildExplicit, 1H2S, "1H2S");
BENCHMARK_CAPTURE(BM_BuildExplicit, 1H3S, "1H3S")->Unit(benchmark::kMillisecond);

static void BM_SafeRegion(benchmark::State& state, const char* name) {
  const auto m = build_explicit(load_fixture(name), 2000000);
  for (auto _ : state) benchmark::DoNotOptimize(safe_region(m).scheduler_count());
}
BENCHMARK_CAPTURE(BM_SafeRegion, 1H3S, "1H3S")->Unit(benchmark::kMillisecond);

static void BM_Solve(benchmark::State& state, const char* name) {
  const auto r = safe_region(build_explicit(load_fixture(name), 2000000));
  const auto mdp = TickMdp::from_region(r);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_mean_cost(mdp, r.mdp().size()).gain);
}
BENCHMARK_CAPTURE(BM_Solve, example1, "example1");
BENCHMARK_CAPTURE(BM_Solve, 1H2S, "1H2S")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, 4S, "4S")->Unit(benchmark::kMillisecond);

static void BM_EnvStep(benchmark::State& state) {
  SimEnv env(load_fixture("1H2S"), 1);
  EdfPolicy edf;
  for (auto _ : state) {
    const auto allowed = env.available_actions();
    env.step(edf.choose(*env.graph_ptr(), env.vertex(), allowed));
  }
}
BENCHMARK(BM_EnvStep);

static void BM_MctsDecision(benchmark::State& state) {
  const auto m = build_explicit(std::make_shared<GameModel>(load_fixture("1H2S")), 2000000);
  const auto r = safe_region(m);
  MgsAdvice advice(r);
  MctsParams p;
  p.node_budget = static_cast<std::size_t>(state.range(0));
  p.init_rollouts = 10;
  Mcts search(m.graph_ptr(), advice, p);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(search.decide(m.initial(), rng));
}
BENCHMARK(BM_MctsDecision)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
