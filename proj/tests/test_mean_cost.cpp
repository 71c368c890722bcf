#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "safesched/errors.hpp"
#include "safesched/fixtures.hpp"
#include "safesched/mean_cost.hpp"
#include "safesched/rng.hpp"

using namespace safesched;

namespace {

/// Runs the hard task when it is active, otherwise idles.
MemorylessStrategy never_soft(const ExplicitMdp& m) {
  MemorylessStrategy s(m.size());
  for (VertexId v = 0; v < m.size(); ++v) {
    if (m.owner(v) != Owner::Scheduler) continue;
    s.set(v, SchedulerAction::idle());
    for (const auto& e : m.actions(v)) {
      if (e.action == SchedulerAction::schedule(0)) s.set(v, e.action);
    }
  }
  return s;
}

TaskSystem scaled(const TaskSystem& sys, const Rational& lambda) {
  auto tasks = sys.tasks();
  for (auto& t : tasks) t.miss_cost *= lambda;
  return TaskSystem(tasks);
}

}  // namespace

TEST(Prefix, Examples) {
  const std::vector<Rational> a{10, 0, 0};
  EXPECT_EQ(mean_cost_prefix(a), Rational(10, 3));
  const std::vector<Rational> b{0, 0, 0, 0};
  EXPECT_EQ(mean_cost_prefix(b), 0);
  const std::vector<Rational> none;
  EXPECT_THROW(mean_cost_prefix(none), EmptyPrefix);
}

TEST(Discounted, Sums) {
  const std::vector<double> head{10, 0, 0};
  EXPECT_DOUBLE_EQ(discounted_sum(head, 0.5), 10.0);
  const std::vector<double> zero(50, 0.0);
  EXPECT_EQ(discounted_sum(zero, 0.9), 0.0);
  std::vector<double> periodic;
  for (int i = 0; i < 30000; ++i) periodic.push_back(i % 3 == 0 ? 10.0 : 0.0);
  const double d = 0.999;
  // Closed form of the geometric series: 10 / (1 + d + d^2).
  EXPECT_NEAR((1 - d) * discounted_sum(periodic, d), 10.0 / (1 + d + d * d), 1e-9);
  EXPECT_NEAR((1 - d) * discounted_sum(periodic, d), 10.0 / 3.0, 0.01);
  EXPECT_THROW(discounted_sum(head, 1.0), ParameterOutOfRange);
  EXPECT_THROW(discounted_sum(head, 0.0), ParameterOutOfRange);
}

TEST(Solve, ExampleOne) {
  const auto r = safe_region(build_explicit(load_fixture("example1"), 1000));
  const auto rep = optimize_mean_cost(r);
  EXPECT_NEAR(rep.gain, 2.0, 1e-3);
  EXPECT_NEAR(evaluate_strategy(r.mdp(), rep.strategy), 2.0, 1e-6);
  EXPECT_NEAR(evaluate_strategy(r.mdp(), never_soft(r.mdp())), 10.0 / 3.0, 1e-6);
  // The optimal strategy never idles at the start and never leaves the soft job unfinished
  // when it could complete.
  EXPECT_NE(rep.strategy.at(r.mdp().initial()), SchedulerAction::idle());
}

TEST(Solve, ZeroCostSystem) {
  auto tasks = load_fixture("example1").tasks();
  tasks.pop_back();
  const auto r = safe_region(build_explicit(TaskSystem(tasks), 1000));
  EXPECT_EQ(optimize_mean_cost(r).gain, 0.0);
  EXPECT_EQ(evaluate_strategy(r.mdp(), never_soft(r.mdp())), 0.0);
}

TEST(Solve, MatchesExhaustiveEnumeration) {
  for (const char* name : {"example1", "example2", "simple"}) {
    const auto r = safe_region(build_explicit(load_fixture(name), 100000));
    ASSERT_LE(r.scheduler_count(), 200u);
    const auto brute = oracle::enumerate_min_gain(r);
    ASSERT_TRUE(brute.complete) << name;
    const auto rep = optimize_mean_cost(r);
    EXPECT_NEAR(rep.gain, static_cast<double>(brute.min_gain), 1e-6) << name;
    EXPECT_NEAR(static_cast<double>(oracle::chain_gain(r.mdp(), rep.strategy)), rep.gain, 1e-6) << name;
  }
}

TEST(Evaluate, AgreesWithDenseChain) {
  for (const char* name : {"example1", "1H2S", "2H1S"}) {
    const auto r = safe_region(build_explicit(load_fixture(name), 100000));
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      MemorylessStrategy s(r.mdp().size());
      for (VertexId v : r.vertices()) {
        if (r.mdp().owner(v) != Owner::Scheduler) continue;
        const auto safe = r.safe_actions(v);
        s.set(v, safe[rng.below(safe.size())]);
      }
      EXPECT_NEAR(evaluate_strategy(r.mdp(), s), static_cast<double>(oracle::chain_gain(r.mdp(), s)), 1e-7)
          << name;
    }
  }
}

TEST(Evaluate, RejectsPartialStrategies) {
  const auto m = build_explicit(load_fixture("example1"), 1000);
  EXPECT_THROW(evaluate_strategy(m, MemorylessStrategy(m.size())), NonTotalStrategy);
}

TEST(Solve, CostScaling) {
  for (const char* name : {"example1", "1H2S"}) {
    const auto sys = load_fixture(name);
    const double g = optimize_mean_cost(safe_region(build_explicit(sys, 100000))).gain;
    const double g3 = optimize_mean_cost(safe_region(build_explicit(scaled(sys, 3), 100000))).gain;
    EXPECT_NEAR(g3, 3 * g, 1e-6) << name;
  }
}

TEST(Solve, GoldenGains) {
  const std::vector<std::pair<const char*, double>> golden = {
      {"example2", 1.0 / 6.0}, {"simple", 0.0}, {"1H2S", 0.0700541}, {"2H1S", 0.0}};
  for (const auto& [name, g] : golden) {
    const auto r = safe_region(build_explicit(load_fixture(name), 1000000));
    EXPECT_NEAR(optimize_mean_cost(r).gain, g, 1e-6) << name;
  }
}

TEST(Discounted, ApproachesGain) {
  const auto r = safe_region(build_explicit(load_fixture("example1"), 1000));
  const auto rep = optimize_mean_cost(r);
  double previous = INFINITY;
  for (double d : {0.9, 0.99, 0.999}) {
    const double scaled_value = (1 - d) * optimize_discounted(r, d);
    const double err = std::fabs(scaled_value - rep.gain);
    // (1-d) V_d = g + (1-d) h + O((1-d)^2); h is bounded by the bias span plus one cycle of cost.
    double span = 0.0;
    for (double h : rep.bias) span = std::max(span, std::fabs(h));
    EXPECT_LE(err, (1 - d) * (span + 10.0)) << d;
    EXPECT_LT(err, previous);
    previous = err;
  }
}
