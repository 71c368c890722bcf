#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "safesched/game_graph.hpp"
#include "safesched/rng.hpp"
#include "safesched/safety.hpp"

namespace safesched {

/// Earliest deadline first among active hard tasks, then among active soft
/// tasks, else idle. Ties go to the lower task index.
SchedulerAction edf_hard(const GameModel& model, const GameVertex& v);

/// EDF restricted for advice and shields: the hard tasks with the earliest
/// deadline when some hard task is active, otherwise every available action.
std::vector<SchedulerAction> edf_allowed(const GameModel& model, const GameVertex& v);

/// Uniform draw. Throws EmptySafeSet.
SchedulerAction random_safe(std::span<const SchedulerAction> safe, Rng& rng);

/// Action filter evaluated on vertices of a given game graph.
class Shield {
 public:
  virtual ~Shield() = default;
  virtual std::vector<SchedulerAction> allowed(GameGraph& graph, VertexId v) = 0;
  virtual std::string name() const = 0;
};

/// Safe actions of a solved region; the graph must be the region's graph.
class MgsShield final : public Shield {
 public:
  explicit MgsShield(const SafeRegion& region) : sets_(mgs(region)) {}
  std::vector<SchedulerAction> allowed(GameGraph& graph, VertexId v) override;
  std::string name() const override { return "mgs"; }

 private:
  ActionSets sets_;
};

class EdfShield final : public Shield {
 public:
  std::vector<SchedulerAction> allowed(GameGraph& graph, VertexId v) override;
  std::string name() const override { return "edf"; }
};

class NoShield final : public Shield {
 public:
  std::vector<SchedulerAction> allowed(GameGraph& graph, VertexId v) override;
  std::string name() const override { return "none"; }
};

enum class ShieldKind { Mgs, Edf, None };
std::string to_string(ShieldKind k);
ShieldKind parse_shield_kind(const std::string& text);

/// Scheduler behaviour: pick an action from the allowed set, optionally learn
/// from the resolved tick.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual SchedulerAction choose(GameGraph& graph, VertexId v, std::span<const SchedulerAction> allowed) = 0;
  virtual void observe(VertexId /*v*/, SchedulerAction /*a*/, double /*cost*/, VertexId /*next*/,
                       std::span<const SchedulerAction> /*allowed_next*/, bool /*terminal*/) {}
};

class EdfPolicy final : public Policy {
 public:
  SchedulerAction choose(GameGraph& graph, VertexId v, std::span<const SchedulerAction> allowed) override;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  SchedulerAction choose(GameGraph& graph, VertexId v, std::span<const SchedulerAction> allowed) override;

 private:
  Rng rng_;
};

/// Follows a memoryless strategy; falls back to the first allowed action where
/// the strategy is undefined or disallowed.
class StrategyPolicy final : public Policy {
 public:
  explicit StrategyPolicy(MemorylessStrategy sigma) : sigma_(std::move(sigma)) {}
  SchedulerAction choose(GameGraph& graph, VertexId v, std::span<const SchedulerAction> allowed) override;

 private:
  MemorylessStrategy sigma_;
};

struct QParams {
  double alpha = 0.1;
  double discount = 0.99;
  double explore_start = 1.0;
  double explore_end = 0.02;
  /// Steps over which exploration anneals linearly from start to end.
  std::uint64_t anneal_steps = 10000;
};

/// Tabular action values keyed by (vertex id, action). Missing entries read as 0.
class QTable {
 public:
  double get(VertexId v, SchedulerAction a) const;
  void set(VertexId v, SchedulerAction a, double q);
  std::uint64_t visits(VertexId v, SchedulerAction a) const;
  /// min over `allowed` of Q(v, a); 0 for an empty set.
  double min_value(VertexId v, std::span<const SchedulerAction> allowed) const;
  std::size_t size() const noexcept { return table_.size(); }
  double max_abs() const;

 private:
  static std::uint64_t key(VertexId v, SchedulerAction a) {
    return (std::uint64_t{v} << 8) | static_cast<std::uint64_t>(a.task + 1);
  }
  struct Entry {
    double q = 0.0;
    std::uint64_t visits = 0;
  };
  std::unordered_map<std::uint64_t, Entry> table_;
};

/// Q(v,a) <- (1-alpha) Q(v,a) + alpha (cost + d * min_{a' in allowed_next} Q(v_next, a')).
/// The bootstrap term is dropped when `terminal`.
void q_update(QTable& table, const QParams& p, VertexId v, SchedulerAction a, double cost, VertexId v_next,
              std::span<const SchedulerAction> allowed_next, bool terminal = false);

/// Epsilon-greedy over the allowed set, learning on every observed tick.
class QPolicy final : public Policy {
 public:
  QPolicy(QParams params, std::uint64_t seed) : params_(params), rng_(seed) {}

  SchedulerAction choose(GameGraph& graph, VertexId v, std::span<const SchedulerAction> allowed) override;
  void observe(VertexId v, SchedulerAction a, double cost, VertexId next, std::span<const SchedulerAction> allowed_next,
               bool terminal) override;

  /// Disables exploration and learning.
  void freeze() noexcept { frozen_ = true; }
  double exploration() const noexcept;
  void set_exploration_override(double eps) noexcept { override_ = eps; }
  const QTable& table() const noexcept { return table_; }
  QTable& table() noexcept { return table_; }

 private:
  QParams params_;
  Rng rng_;
  QTable table_;
  std::uint64_t steps_ = 0;
  bool frozen_ = false;
  double override_ = -1.0;
};

}  // namespace safesched
