#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "safesched/game_graph.hpp"

namespace safesched {

inline constexpr std::uint32_t kUnranked = std::numeric_limits<std::uint32_t>::max();

/// Plain two-player graph. Scheduler vertices are controlled by the
/// protagonist; TaskGen (and Bottom) vertices by the opponent.
struct Arena {
  std::vector<Owner> owner;
  std::vector<std::vector<VertexId>> succ;

  std::size_t size() const noexcept { return owner.size(); }
  static Arena from(const ExplicitMdp& m);
};

/// Least fixpoint of A' = A u {Scheduler v : all successors in A}
/// u {TaskGen v : some successor in A}. rank[v] is the round in which v entered.
struct Attractor {
  std::vector<std::uint32_t> rank;
  std::size_t count = 0;

  bool contains(VertexId v) const { return rank[v] != kUnranked; }
};

Attractor attractor(const Arena& arena, std::span<const VertexId> bad);
Attractor attractor(const ExplicitMdp& m, std::span<const VertexId> bad);

/// Whether every vertex reaches every other one.
bool strongly_connected(const std::vector<std::vector<VertexId>>& succ);

/// Deterministic memoryless Scheduler strategy indexed by vertex id.
class MemorylessStrategy {
 public:
  MemorylessStrategy() = default;
  explicit MemorylessStrategy(std::size_t n) : choice_(n, kUndefined) {}

  std::size_t size() const noexcept { return choice_.size(); }
  bool defined(VertexId v) const { return v < choice_.size() && choice_[v] != kUndefined; }
  SchedulerAction at(VertexId v) const { return SchedulerAction{choice_.at(v)}; }
  void set(VertexId v, SchedulerAction a) { choice_.at(v) = a.task; }

  /// {"<vertex id>": "t1", ...} over the defined entries.
  std::string to_json() const;
  static MemorylessStrategy from_json(const std::string& text, std::size_t n);

  friend bool operator==(const MemorylessStrategy&, const MemorylessStrategy&) = default;

 private:
  static constexpr int kUndefined = -2;
  std::vector<int> choice_;
};

/// Scheduler vertices that can avoid the hard-miss sink forever, the safe
/// actions at each of them, and the vertices reachable under those actions.
class SafeRegion {
 public:
  const ExplicitMdp& mdp() const noexcept { return mdp_; }
  bool contains(VertexId v) const { return v < in_region_.size() && in_region_[v]; }
  /// Region vertices in increasing id order.
  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  std::size_t scheduler_count() const noexcept { return scheduler_count_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  /// Safe edges of a region Scheduler vertex, in canonical action order.
  const std::vector<SchedulerEdge>& safe_edges(VertexId v) const { return safe_edges_.at(v); }
  std::vector<SchedulerAction> safe_actions(VertexId v) const;
  bool is_safe_action(VertexId v, SchedulerAction a) const;
  const Attractor& bad_attractor() const noexcept { return bad_; }

  /// Successor lists of the region restricted to safe edges.
  std::vector<std::vector<VertexId>> region_graph() const;

 private:
  friend SafeRegion safe_region(const ExplicitMdp& m);

  ExplicitMdp mdp_;
  Attractor bad_;
  std::vector<bool> in_region_;
  std::vector<VertexId> vertices_;
  std::vector<std::vector<SchedulerEdge>> safe_edges_;
  std::size_t scheduler_count_ = 0;
  std::size_t edge_count_ = 0;
};

/// Throws Unschedulable when the initial vertex cannot avoid the sink.
SafeRegion safe_region(const ExplicitMdp& m);

/// Nondeterministic strategy: allowed action set per vertex id (empty off-region).
struct ActionSets {
  std::vector<std::vector<SchedulerAction>> allowed;

  const std::vector<SchedulerAction>& at(VertexId v) const { return allowed.at(v); }
  std::string to_json() const;
};

/// Most general safe scheduler: every safe action at every region vertex.
ActionSets mgs(const SafeRegion& region);

/// Strong connectivity of the region's underlying graph.
bool check_single_mec(const SafeRegion& region);

/// Scheduler strategy realising reachability ranks: at v pick the safe action
/// whose target has the smallest rank (lowest action index on ties).
/// Returns nullopt when no safe action leads to a ranked vertex.
std::optional<SchedulerAction> rank_descent(const SafeRegion& region, const std::vector<std::uint32_t>& rank,
                                            VertexId v);

struct SamplingVerdict {
  std::size_t task = 0;
  bool good = false;
  /// Entry vertices (fresh job of the task) from which the job's computation
  /// time can be forced to become known before the job is killed.
  std::vector<VertexId> witnesses;
  std::size_t entry_count = 0;
  /// Per-vertex rank of the forcing strategy (kUnranked outside the winning set).
  std::vector<std::uint32_t> rank;
};

/// One verdict per soft task, in task order.
std::vector<SamplingVerdict> good_for_sampling(const SafeRegion& region);

struct EfficientVerdict {
  std::size_t task = 0;
  bool good = false;
  /// Vertices from which no job of the task is ever killed (both owners).
  std::vector<bool> safe_set;
  std::size_t safe_count = 0;  // Scheduler vertices only
  /// Reachability ranks towards the safe set (kUnranked if not surely reachable).
  std::vector<std::uint32_t> reach_rank;
  std::uint32_t k_edges = 0;
};

struct EfficientReport {
  bool good = false;
  std::vector<EfficientVerdict> tasks;
  /// Max reachability rank over all soft tasks, in game edges and in ticks.
  std::uint32_t k_edges = 0;
  std::uint32_t k_ticks = 0;
};

EfficientReport good_for_efficient_sampling(const SafeRegion& region);

/// Safe actions at v that keep play inside the efficient safe set.
std::vector<SchedulerAction> task_safe_actions(const SafeRegion& region, const EfficientVerdict& verdict, VertexId v);

}  // namespace safesched
