#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "safesched/game_graph.hpp"
#include "safesched/rng.hpp"

namespace safesched {

/// What a scheduler can see about one task after a tick.
struct TaskEvent {
  /// A new job was released; inter_arrival is the gap to the previous release.
  bool released = false;
  std::optional<Tick> inter_arrival;
  /// The running job completed after `computation` granted ticks.
  bool completed = false;
  Tick computation = 0;
  /// The job was killed unfinished by the next release (soft miss).
  bool killed = false;
};

struct Observation {
  /// Ticks elapsed after this step.
  std::uint64_t tick = 0;
  SchedulerAction action;
  EventLabels labels;
  double cost = 0.0;
  bool hard_miss = false;
  bool restarted = false;
  /// Scheduler vertex reached (the initial vertex after a restart).
  VertexId vertex = kNoVertex;
  std::vector<TaskEvent> tasks;
};

struct TraceEntry {
  std::uint64_t tick = 0;
  SchedulerAction action;
  EventLabels labels;
  Rational cost;
  bool hard_miss = false;
  bool restarted = false;
};

struct EnvOptions {
  /// After a hard miss, start a new episode from the initial vertex instead of
  /// staying in the sink.
  bool restart_on_miss = false;
  bool record_trace = false;
};

/// Executes the true task system: samples TaskGen outcomes with the exact
/// probabilities, accrues soft-miss costs and monitors hard deadlines.
class SimEnv {
 public:
  SimEnv(std::shared_ptr<GameGraph> graph, std::uint64_t seed, EnvOptions opts = {});
  SimEnv(const TaskSystem& sys, std::uint64_t seed, EnvOptions opts = {});

  const GameGraph& graph() const noexcept { return *graph_; }
  std::shared_ptr<GameGraph> graph_ptr() const noexcept { return graph_; }
  const TaskSystem& system() const noexcept { return graph_->model().system(); }

  VertexId vertex() const noexcept { return current_; }
  const GameVertex& state() const { return graph_->vertex(current_); }
  bool in_sink() const { return graph_->owner(current_) == Owner::Bottom; }
  /// Set once a hard deadline has been missed.
  bool poisoned() const noexcept { return hard_misses_ > 0; }

  std::vector<SchedulerAction> available_actions();

  /// One CPU tick. Throws IllegalAction.
  const Observation& step(SchedulerAction a);

  std::uint64_t ticks() const noexcept { return ticks_; }
  double total_cost() const noexcept { return total_cost_; }
  std::uint64_t hard_misses() const noexcept { return hard_misses_; }
  std::uint64_t soft_misses() const noexcept { return soft_misses_; }
  /// Cumulative soft cost per elapsed tick (0 before the first step).
  double mean_cost() const noexcept { return ticks_ ? total_cost_ / static_cast<double>(ticks_) : 0.0; }

  const std::vector<TraceEntry>& trace() const noexcept { return trace_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  void reset_trackers();

  std::shared_ptr<GameGraph> graph_;
  std::uint64_t seed_;
  Rng rng_;
  EnvOptions opts_;
  VertexId current_ = 0;
  std::uint64_t ticks_ = 0;
  double total_cost_ = 0.0;
  std::uint64_t hard_misses_ = 0;
  std::uint64_t soft_misses_ = 0;
  std::vector<std::optional<std::uint64_t>> last_release_;
  std::vector<Tick> granted_;
  Observation obs_;
  std::vector<TraceEntry> trace_;
};

/// Follows an environment through a model graph with the same structure by
/// matching the chosen action and the observed labels.
class ModelTracker {
 public:
  explicit ModelTracker(std::shared_ptr<GameGraph> graph) : graph_(std::move(graph)), vertex_(graph_->initial()) {}

  GameGraph& graph() noexcept { return *graph_; }
  VertexId vertex() const noexcept { return vertex_; }
  void reset() noexcept { vertex_ = graph_->initial(); }
  /// Throws StructureMismatch when the model has no matching edge.
  void advance(SchedulerAction a, const Observation& obs);

 private:
  std::shared_ptr<GameGraph> graph_;
  VertexId vertex_;
};

/// Trace lines "tick; action; outcome-labels; cost; flags" with a header
/// naming the generator and seed.
void write_trace(const SimEnv& env, std::ostream& out);

struct ReplayResult {
  bool ok = false;
  std::size_t steps = 0;
  std::string message;
};

/// Checks every trace line against the model: the action is available and the
/// labelled outcome exists with the recorded cost. When `seed` is given the
/// run is also re-simulated and must match line by line.
ReplayResult replay_trace(const TaskSystem& sys, std::istream& trace, std::optional<std::uint64_t> seed);

}  // namespace safesched
