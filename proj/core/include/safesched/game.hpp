#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "safesched/distributions.hpp"
#include "safesched/rational.hpp"
#include "safesched/task_model.hpp"

namespace safesched {

/// Index of an interned distribution inside a GameModel.
using DistId = std::uint32_t;

/// Marks a task with no job in the system.
inline constexpr DistId kNoJob = std::numeric_limits<DistId>::max();

/// Per-task knowledge stored in a vertex: remaining computation time (rct),
/// ticks to the deadline, and time to the next arrival.
struct TaskState {
  DistId rct = kNoJob;
  Tick to_deadline = 0;
  DistId to_arrival = 0;

  friend bool operator==(const TaskState&, const TaskState&) = default;
};

enum class Owner : std::uint8_t { Scheduler, TaskGen, Bottom };

/// A vertex of the scheduling game. Bottom is the sink reached on a hard
/// deadline miss and carries no task states.
struct GameVertex {
  Owner owner = Owner::Scheduler;
  std::vector<TaskState> tasks;

  static GameVertex bottom() { return GameVertex{Owner::Bottom, {}}; }
  bool is_bottom() const noexcept { return owner == Owner::Bottom; }

  friend bool operator==(const GameVertex&, const GameVertex&) = default;
};

/// Schedule task `task` for one tick, or idle when task < 0.
struct SchedulerAction {
  static constexpr int kIdle = -1;
  int task = kIdle;

  static constexpr SchedulerAction idle() noexcept { return SchedulerAction{kIdle}; }
  static constexpr SchedulerAction schedule(std::size_t i) noexcept {
    return SchedulerAction{static_cast<int>(i)};
  }
  bool is_idle() const noexcept { return task < 0; }
  /// Position in the canonical action order: tasks ascending, idle last.
  std::uint32_t order_key() const noexcept {
    return is_idle() ? std::numeric_limits<std::uint32_t>::max() : static_cast<std::uint32_t>(task);
  }

  friend bool operator==(SchedulerAction a, SchedulerAction b) noexcept { return a.task == b.task; }
  friend auto operator<=>(SchedulerAction a, SchedulerAction b) noexcept {
    return a.order_key() <=> b.order_key();
  }
};

/// "eps" for idle, "t<k>" (1-based) otherwise.
std::string to_string(SchedulerAction a);
/// Inverse of to_string(SchedulerAction). Throws ParseError.
SchedulerAction parse_action(const std::string& text);

/// What TaskGen does to one task on a transition.
enum class JobEvent : std::uint8_t { Eps = 0, Fin = 1, Sub = 2, KillSub = 3 };

std::string to_string(JobEvent e);

/// Per-task JobEvent vector packed two bits per task (at most 32 tasks).
class EventLabels {
 public:
  static constexpr std::size_t kMaxTasks = 32;

  EventLabels() = default;
  explicit EventLabels(std::size_t n) : size_(static_cast<std::uint8_t>(n)) {}

  std::size_t size() const noexcept { return size_; }
  JobEvent operator[](std::size_t i) const noexcept {
    return static_cast<JobEvent>((bits_ >> (2 * i)) & 3U);
  }
  void set(std::size_t i, JobEvent e) noexcept {
    bits_ &= ~(std::uint64_t{3} << (2 * i));
    bits_ |= std::uint64_t{static_cast<std::uint8_t>(e)} << (2 * i);
  }
  std::uint64_t bits() const noexcept { return bits_; }

  /// "(fin,eps)" style rendering.
  std::string to_string() const;
  static EventLabels parse(const std::string& text);

  friend bool operator==(const EventLabels&, const EventLabels&) = default;

 private:
  std::uint64_t bits_ = 0;
  std::uint8_t size_ = 0;
};

struct TaskGenOutcome {
  EventLabels labels;
  Rational probability;
  Rational cost;
};

/// When a TaskGen vertex is routed to the sink.
enum class MissDetection {
  /// Some hard task has min(Supp(rct)) > ticks to deadline.
  Early,
  /// Some hard task has rct(0) = 0 and zero ticks to deadline.
  Late,
};

/// Successor semantics of the scheduling game for one task system.
///
/// Distributions are interned: vertices refer to them by DistId, which keeps
/// vertex equality and hashing exact and cheap. Interning mutates the model,
/// so a GameModel must not be shared across threads.
class GameModel {
 public:
  explicit GameModel(TaskSystem sys, MissDetection detection = MissDetection::Early);

  const TaskSystem& system() const noexcept { return system_; }
  MissDetection miss_detection() const noexcept { return detection_; }
  std::size_t task_count() const noexcept { return system_.size(); }

  DistId intern(const FiniteDistribution& d);
  const FiniteDistribution& distribution(DistId id) const { return dists_.at(id).dist; }
  std::size_t distribution_count() const noexcept { return dists_.size(); }

  /// Mass at zero of the interned distribution.
  const Rational& mass_at_zero(DistId id) const { return dists_[id].p0; }
  double mass_at_zero_value(DistId id) const { return dists_[id].p0_value; }

  GameVertex initial_vertex() const;

  /// A job is present (possibly dead) for this task.
  bool has_job(const TaskState& s) const noexcept { return s.rct != kNoJob; }
  /// A job is present and not finished.
  bool job_live(const TaskState& s) const noexcept { return s.rct != kNoJob && dists_[s.rct].p0 != 1; }
  /// A live job that can still be scheduled (deadline not reached).
  bool is_active(const TaskState& s) const noexcept { return job_live(s) && s.to_deadline > 0; }

  /// Actions in canonical order: active tasks ascending, then idle.
  /// Throws WrongOwner unless `v` is a Scheduler vertex.
  std::vector<SchedulerAction> scheduler_actions(const GameVertex& v) const;

  /// One CPU tick: the scheduled rct shifts down, every deadline counter and
  /// arrival timer shifts down. Throws WrongOwner / IllegalAction.
  GameVertex apply_scheduler(const GameVertex& v, SchedulerAction a);

  /// Whether the TaskGen vertex must be routed to the sink under the
  /// configured detection rule.
  bool hard_miss_pending(const GameVertex& v) const;

  /// All TaskGen outcomes with positive probability, in canonical order.
  /// Outcomes whose joint effect is a hard miss are merged into one edge to
  /// the sink labelled all-eps. Throws WrongOwner.
  std::vector<std::pair<TaskGenOutcome, GameVertex>> taskgen_outcomes(const GameVertex& v);

  /// "S:(1,2,3)/([1:0.4,2:0.6],2,3)" style rendering; "BOT" for the sink.
  std::string render(const GameVertex& v) const;
  std::string render_task(const TaskState& s) const;

 private:
  struct DistInfo {
    FiniteDistribution dist;
    Rational p0;
    double p0_value = 0.0;
    DistId decremented = kNoJob;
    DistId conditioned = kNoJob;
  };

  DistId decrement(DistId id);
  DistId condition(DistId id);
  TaskState fresh_state(std::size_t task) const;

  TaskSystem system_;
  MissDetection detection_;
  std::vector<DistInfo> dists_;
  std::unordered_map<FiniteDistribution, DistId> dist_index_;
  std::vector<DistId> computation_ids_;
  std::vector<DistId> arrival_ids_;
};

/// Product of (max C + 1)(max A + 1) over the tasks, as a decimal string
/// (the value overflows 64 bits for large systems).
std::string state_space_estimate(const TaskSystem& sys);
/// Same value as a double, for thresholds.
double state_space_estimate_value(const TaskSystem& sys);

}  // namespace safesched

template <>
struct std::hash<safesched::GameVertex> {
  std::size_t operator()(const safesched::GameVertex& v) const noexcept {
    std::size_t h = static_cast<std::size_t>(v.owner) * 0x9e3779b97f4a7c15ULL;
    for (const auto& t : v.tasks) {
      std::uint64_t packed = (std::uint64_t{t.rct} << 32) ^ (std::uint64_t{t.to_arrival} << 12) ^ t.to_deadline;
      h ^= packed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};
