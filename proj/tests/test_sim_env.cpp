#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "safesched/errors.hpp"
#include "safesched/fixtures.hpp"
#include "safesched/policies.hpp"
#include "safesched/sim_env.hpp"

using namespace safesched;

namespace {

/// Hard task when active, otherwise idle.
SchedulerAction never_soft(SimEnv& env) {
  for (auto a : env.available_actions()) {
    if (a == SchedulerAction::schedule(0)) return a;
  }
  return SchedulerAction::idle();
}

std::string trace_text(const SimEnv& env) {
  std::ostringstream out;
  write_trace(env, out);
  return out.str();
}

TaskSystem dirac_system() {
  return TaskSystem({Task{FiniteDistribution::dirac(1), 2, FiniteDistribution::dirac(3), TaskKind::Hard, 0},
                     Task{FiniteDistribution::dirac(2), 3, FiniteDistribution::dirac(4), TaskKind::Soft, 1}});
}

}  // namespace

TEST(Env, SoftCompletionAtFirstTick) {
  const auto sys = load_fixture("example1");
  int finished = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    SimEnv env(sys, seed);
    const auto& obs = env.step(SchedulerAction::schedule(1));
    const bool fin = obs.labels[1] == JobEvent::Fin;
    EXPECT_EQ(obs.tasks[1].completed, fin);
    if (fin) {
      EXPECT_EQ(obs.tasks[1].computation, 1u);
      ++finished;
    }
  }
  // Completion after one tick has probability 0.4.
  EXPECT_TRUE(oracle::chi_square({static_cast<std::uint64_t>(finished), static_cast<std::uint64_t>(2000 - finished)},
                                 {0.4, 0.6})
                  .pass);
}

TEST(Env, DiracSystemIgnoresSeed) {
  EdfPolicy edf;
  std::string reference;
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    EnvOptions opts;
    opts.record_trace = true;
    SimEnv env(dirac_system(), seed, opts);
    for (int t = 0; t < 200; ++t) {
      const auto allowed = env.available_actions();
      env.step(edf.choose(*env.graph_ptr(), env.vertex(), allowed));
    }
    std::string text = trace_text(env);
    text = text.substr(text.find('\n'));
    if (reference.empty()) reference = text;
    EXPECT_EQ(text, reference);
  }
}

TEST(Env, IdlingTwiceMissesTheHardDeadline) {
  SimEnv env(load_fixture("example1"), 0);
  EXPECT_FALSE(env.step(SchedulerAction::idle()).hard_miss);
  const auto& obs = env.step(SchedulerAction::idle());
  EXPECT_TRUE(obs.hard_miss);
  EXPECT_TRUE(env.in_sink());
  EXPECT_TRUE(env.poisoned());
  EXPECT_EQ(env.available_actions(), std::vector{SchedulerAction::idle()});
}

TEST(Env, RestartAfterMiss) {
  EnvOptions opts;
  opts.restart_on_miss = true;
  SimEnv env(load_fixture("example1"), 0, opts);
  env.step(SchedulerAction::idle());
  const auto& obs = env.step(SchedulerAction::idle());
  EXPECT_TRUE(obs.hard_miss);
  EXPECT_TRUE(obs.restarted);
  EXPECT_EQ(env.vertex(), env.graph().initial());
  EXPECT_EQ(env.hard_misses(), 1u);
}

TEST(Env, IllegalAction) {
  SimEnv env(load_fixture("example1"), 0);
  EXPECT_THROW(env.step(SchedulerAction::schedule(4)), IllegalAction);
}

TEST(Env, MeanCost) {
  SimEnv env(load_fixture("example1"), 3);
  for (int t = 0; t < 3000; ++t) env.step(never_soft(env));
  EXPECT_NEAR(env.mean_cost(), 10.0 / 3.0, 0.01);

  SimEnv five(load_fixture("example1"), 3);
  for (int t = 0; t < 5; ++t) five.step(never_soft(five));
  EXPECT_DOUBLE_EQ(five.mean_cost(), 2.0);

  auto tasks = load_fixture("example1").tasks();
  tasks.pop_back();
  SimEnv zero(TaskSystem(tasks), 3);
  for (int t = 0; t < 300; ++t) zero.step(never_soft(zero));
  EXPECT_EQ(zero.mean_cost(), 0.0);
}

TEST(Env, EdgeFrequenciesPassChiSquare) {
  const auto sys = load_fixture("1H2S");
  const auto m = build_explicit(std::make_shared<GameModel>(sys), 100000);
  const auto r = safe_region(m);
  MgsShield shield(r);
  SimEnv env(m.graph_ptr(), 21);
  Rng pick(22);
  std::map<VertexId, std::vector<std::uint64_t>> counts;
  for (int t = 0; t < 200000; ++t) {
    const VertexId v = env.vertex();
    const SchedulerAction a = random_safe(shield.allowed(*m.graph_ptr(), v), pick);
    const VertexId tg = m.successor(v, a);
    const auto& obs = env.step(a);
    const auto& outs = m.outcomes(tg);
    auto& c = counts[tg];
    c.resize(outs.size(), 0);
    std::size_t hit = outs.size();
    for (std::size_t i = 0; i < outs.size(); ++i) {
      if (outs[i].target == env.vertex() && outs[i].labels == obs.labels) hit = i;
    }
    ASSERT_LT(hit, outs.size());
    ++c[hit];
  }
  int tested = 0, failed = 0;
  for (const auto& [tg, c] : counts) {
    std::uint64_t total = 0;
    for (auto x : c) total += x;
    if (c.size() < 2 || total < 500) continue;
    std::vector<double> probs;
    for (const auto& e : m.outcomes(tg)) probs.push_back(e.p);
    ++tested;
    failed += !oracle::chi_square(c, probs).pass;
  }
  EXPECT_GE(tested, 10);
  // Each check is at 3 sigma; allow the rare false alarm among many vertices.
  EXPECT_LE(failed, std::max(1, tested / 50));
}

TEST(Env, VisitsOnlyVerticesOfTheExplicitGame) {
  const auto sys = load_fixture("2H1S");
  const auto m = build_explicit(sys, 100000);
  std::set<std::string> known;
  for (VertexId v = 0; v < m.size(); ++v) known.insert(m.render(v));
  SimEnv env(sys, 8);
  RandomPolicy random(8);
  for (int t = 0; t < 20000; ++t) {
    const auto allowed = env.available_actions();
    env.step(random.choose(*env.graph_ptr(), env.vertex(), allowed));
    ASSERT_TRUE(known.count(env.graph().render(env.vertex()))) << env.graph().render(env.vertex());
    if (env.in_sink()) break;
  }
}

TEST(Trace, SameSeedSameTrace) {
  EnvOptions opts;
  opts.record_trace = true;
  auto run = [&](std::uint64_t seed) {
    SimEnv env(load_fixture("1H2S"), seed, opts);
    EdfPolicy edf;
    for (int t = 0; t < 500; ++t) {
      const auto allowed = env.available_actions();
      env.step(edf.choose(*env.graph_ptr(), env.vertex(), allowed));
    }
    return trace_text(env);
  };
  EXPECT_EQ(run(4), run(4));
  EXPECT_NE(run(4), run(5));
}

TEST(Trace, Replay) {
  EnvOptions opts;
  opts.record_trace = true;
  opts.restart_on_miss = true;
  const auto sys = load_fixture("example1");
  SimEnv env(sys, 12, opts);
  RandomPolicy random(3);
  for (int t = 0; t < 400; ++t) {
    const auto allowed = env.available_actions();
    env.step(random.choose(*env.graph_ptr(), env.vertex(), allowed));
  }
  ASSERT_GT(env.hard_misses(), 0u);
  const std::string text = trace_text(env);
  {
    std::istringstream in(text);
    const auto r = replay_trace(sys, in, std::nullopt);
    EXPECT_TRUE(r.ok) << r.message;
    EXPECT_EQ(r.steps, 400u);
  }
  {
    std::istringstream in(text);
    EXPECT_TRUE(replay_trace(sys, in, 12).ok);
  }
  {
    std::istringstream in(text);
    EXPECT_FALSE(replay_trace(sys, in, 13).ok);
  }
  {
    std::string bad = text;
    const auto pos = bad.find("; 0; ");
    ASSERT_NE(pos, std::string::npos);
    bad.replace(pos, 5, "; 7; ");
    std::istringstream in(bad);
    EXPECT_FALSE(replay_trace(sys, in, std::nullopt).ok);
  }
}

TEST(Tracker, FollowsTheEnvironment) {
  const auto sys = load_fixture("1H2S");
  const auto m = build_explicit(sys, 100000);
  ModelTracker tracker(m.graph_ptr());
  SimEnv env(sys, 2);
  RandomPolicy random(2);
  for (int t = 0; t < 2000; ++t) {
    const auto allowed = env.available_actions();
    const auto a = random.choose(*env.graph_ptr(), env.vertex(), allowed);
    const auto& obs = env.step(a);
    tracker.advance(a, obs);
    ASSERT_EQ(m.render(tracker.vertex()), env.graph().render(env.vertex()));
    if (env.in_sink()) break;
  }
  // A model where the soft job cannot finish after one tick has no edge for an early completion.
  for (std::uint64_t seed = 0;; ++seed) {
    SimEnv other(load_fixture("example1"), seed);
    const auto& obs = other.step(SchedulerAction::schedule(1));
    if (obs.labels[1] != JobEvent::Fin) continue;
    ModelTracker wrong(build_explicit(dirac_system(), 1000).graph_ptr());
    EXPECT_THROW(wrong.advance(SchedulerAction::schedule(1), obs), StructureMismatch);
    break;
  }
}
