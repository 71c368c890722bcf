#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "safesched/policies.hpp"
#include "safesched/sim_env.hpp"

namespace safesched {

/// Selection and simulation advice share the shield interface.
using Advice = Shield;
using MgsAdvice = MgsShield;
using EdfAdvice = EdfShield;
using NoAdvice = NoShield;

struct MctsParams {
  std::size_t horizon = 30;
  std::size_t node_budget = 500;
  std::size_t init_rollouts = 100;
  /// UCB1 exploration weight on costs normalised by a running max step cost.
  double uct_c = 1.4142135623730951;
  /// Charged once when a simulated tick reaches the sink.
  double hard_penalty = 0.0;
};

struct MctsStats {
  std::uint64_t decisions = 0;
  std::uint64_t nodes = 0;
  std::uint64_t rollouts = 0;
  std::uint64_t simulated_ticks = 0;
  /// Every action taken in selection and simulation is checked against the advice.
  std::uint64_t advice_checks = 0;
  std::uint64_t advice_violations = 0;
};

/// Receding-horizon search with chance nodes; a fresh tree per decision.
class Mcts {
 public:
  Mcts(std::shared_ptr<GameGraph> model, Advice& advice, MctsParams params);

  /// Advice-allowed action at a Scheduler vertex of the model graph minimising
  /// the estimated cost over the horizon. Throws NoAllowedAction.
  SchedulerAction decide(VertexId root, Rng& rng);

  const MctsStats& stats() const noexcept { return stats_; }
  GameGraph& model() noexcept { return *model_; }

 private:
  struct Child {
    SchedulerAction action;
    VertexId taskgen = kNoVertex;
    std::uint32_t visits = 0;
    double total = 0.0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> outcomes;  // outcome index -> node
  };
  struct Node {
    VertexId vertex = kNoVertex;
    std::uint32_t depth = 0;
    std::uint32_t visits = 0;
    double total = 0.0;
    std::vector<SchedulerAction> allowed;
    std::vector<Child> children;
  };

  std::uint32_t make_node(VertexId v, std::uint32_t depth);
  double rollout(VertexId v, std::uint32_t depth, Rng& rng);
  /// Samples a TaskGen outcome: (target, edge cost including any sink penalty).
  std::pair<VertexId, double> resolve(VertexId taskgen, std::size_t& index, Rng& rng);
  const std::vector<SchedulerAction>& advised(VertexId v);
  void note_cost(double c) {
    if (c > max_step_cost_) max_step_cost_ = c;
  }

  std::shared_ptr<GameGraph> model_;
  Advice* advice_;
  MctsParams params_;
  MctsStats stats_;
  std::vector<Node> nodes_;
  /// Advice is a function of the vertex; sorted sets memoised by vertex id.
  std::vector<std::vector<SchedulerAction>> advice_cache_;
  std::vector<bool> advice_known_;
  double max_step_cost_ = 0.0;
};

struct ScheduleRun {
  double mean_cost = 0.0;
  std::uint64_t violations = 0;
  std::uint64_t steps = 0;
  std::vector<SchedulerAction> actions;
  MctsStats stats;
};

/// Plans every tick on `model` (tracked through the env's observations) and
/// executes the chosen action in the env.
ScheduleRun run_mcts_schedule(SimEnv& env, std::shared_ptr<GameGraph> model, Advice& advice, const MctsParams& params,
                              std::uint64_t eval_steps, std::uint64_t seed);

}  // namespace safesched
