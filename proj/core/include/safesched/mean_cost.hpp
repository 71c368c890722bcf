#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "safesched/rational.hpp"
#include "safesched/safety.hpp"

namespace safesched {

/// Average of a nonempty cost prefix. Throws EmptyPrefix.
Rational mean_cost_prefix(std::span<const Rational> costs);

/// Sum of costs[i] * d^i. Throws ParameterOutOfRange unless 0 < d < 1.
double discounted_sum(std::span<const double> costs, double d);

/// Tick-level view of the game: one state per Scheduler vertex (and the sink),
/// one action per allowed Scheduler edge. An action's cost is the expected
/// TaskGen edge cost of the tick it starts.
class TickMdp {
 public:
  struct Action {
    SchedulerAction action;
    double cost = 0.0;
    std::uint32_t begin = 0;  // into targets/probs
    std::uint32_t end = 0;
  };

  /// All available actions of the reachable MDP.
  static TickMdp from_mdp(const ExplicitMdp& m);
  /// Only safe actions, only region vertices.
  static TickMdp from_region(const SafeRegion& region);

  std::size_t state_count() const noexcept { return vertex_.size(); }
  VertexId vertex(std::uint32_t s) const { return vertex_[s]; }
  /// State index of a vertex id, or UINT32_MAX.
  std::uint32_t state_of(VertexId v) const { return v < state_.size() ? state_[v] : UINT32_MAX; }
  std::span<const Action> actions(std::uint32_t s) const {
    return {actions_.data() + action_begin_[s], actions_.data() + action_begin_[s + 1]};
  }
  std::span<const std::uint32_t> targets(const Action& a) const { return {targets_.data() + a.begin, a.end - a.begin}; }
  std::span<const double> probs(const Action& a) const { return {probs_.data() + a.begin, a.end - a.begin}; }
  std::uint32_t initial_state() const noexcept { return initial_; }
  std::size_t vertex_capacity() const noexcept { return state_.size(); }

 private:
  void build(const ExplicitMdp& m, const SafeRegion* region);

  std::vector<VertexId> vertex_;
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> action_begin_;
  std::vector<Action> actions_;
  std::vector<std::uint32_t> targets_;
  std::vector<double> probs_;
  std::uint32_t initial_ = 0;
};

struct ValueReport {
  /// Optimal expected mean cost per CPU tick.
  double gain = 0.0;
  /// Relative values per vertex id (Scheduler vertices of the region; 0 elsewhere).
  std::vector<double> bias;
  MemorylessStrategy strategy;
  std::size_t iterations = 0;
  double residual_span = 0.0;
};

struct SolverOptions {
  double tol = 1e-8;
  std::size_t max_iter = 1000000;
  /// Aperiodicity weight: h <- (1 - tau) h + tau T(h).
  double tau = 0.5;
};

/// Relative value iteration over the safe actions of the region; the greedy
/// strategy is extracted from the final relative values (lowest action index
/// on ties). Throws NoConvergence.
ValueReport optimize_mean_cost(const SafeRegion& region, const SolverOptions& opts = {});
ValueReport optimize_mean_cost(const TickMdp& mdp, std::size_t vertex_count, const SolverOptions& opts = {});

/// Long-run mean cost per tick of the chain induced by `sigma` from the
/// initial vertex. Throws NonTotalStrategy when sigma is undefined or
/// unavailable at a reachable Scheduler vertex.
double evaluate_strategy(const ExplicitMdp& m, const MemorylessStrategy& sigma);

/// Optimal expected discounted cost from the initial vertex with per-tick
/// discount d over the region's safe actions.
double optimize_discounted(const SafeRegion& region, double d, double tol = 1e-10);

}  // namespace safesched
