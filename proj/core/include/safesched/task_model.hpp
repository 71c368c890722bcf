#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "safesched/distributions.hpp"
#include "safesched/rational.hpp"

namespace safesched {

enum class TaskKind { Hard, Soft };

/// One preemptible task: computation-time distribution, relative deadline and
/// inter-arrival distribution. Soft tasks carry the cost charged per missed deadline.
struct Task {
  FiniteDistribution computation;
  Tick deadline = 0;
  FiniteDistribution arrival;
  TaskKind kind = TaskKind::Soft;
  Rational miss_cost = 0;

  bool is_hard() const noexcept { return kind == TaskKind::Hard; }
  bool is_soft() const noexcept { return kind == TaskKind::Soft; }
};

/// Ordered list of tasks. Tasks are identified by their 0-based position;
/// user-facing output reports them 1-based.
class TaskSystem {
 public:
  TaskSystem() = default;
  explicit TaskSystem(std::vector<Task> tasks);

  const std::vector<Task>& tasks() const noexcept { return tasks_; }
  const Task& task(std::size_t i) const { return tasks_.at(i); }
  std::size_t size() const noexcept { return tasks_.size(); }
  bool empty() const noexcept { return tasks_.empty(); }

  const std::vector<std::size_t>& hard_indices() const noexcept { return hard_; }
  const std::vector<std::size_t>& soft_indices() const noexcept { return soft_; }
  bool has_hard_tasks() const noexcept { return !hard_.empty(); }

  /// Largest computation time over all tasks.
  Tick max_computation() const noexcept { return c_max_; }
  /// Largest inter-arrival time over all tasks.
  Tick max_arrival() const noexcept { return a_max_; }
  Tick max_deadline() const noexcept { return d_max_; }
  /// Largest number of arrival-domain elements over all tasks.
  std::size_t arrival_domain_width() const noexcept { return arrival_width_; }
  /// Largest domain size over every distribution (arrival and computation).
  std::size_t domain_width() const noexcept { return domain_width_; }
  /// Largest probability appearing in any distribution.
  const Rational& max_probability() const noexcept { return pi_max_; }
  /// Smallest probability appearing in any distribution.
  const Rational& min_probability() const noexcept { return pi_min_; }
  Rational max_soft_cost() const;

 private:
  std::vector<Task> tasks_;
  std::vector<std::size_t> hard_;
  std::vector<std::size_t> soft_;
  Tick c_max_ = 0;
  Tick a_max_ = 0;
  Tick d_max_ = 0;
  std::size_t arrival_width_ = 0;
  std::size_t domain_width_ = 0;
  Rational pi_max_ = 0;
  Rational pi_min_ = 1;
};

enum class ViolationKind {
  EmptySystem,
  ZeroComputationTime,
  ZeroArrivalTime,
  ComputationExceedsDeadline,
  DeadlineExceedsMinArrival,
  HardTaskWithCost,
  NegativeCost,
};

struct Violation {
  std::optional<std::size_t> task;  // 0-based; empty for system-level violations
  ViolationKind kind;
  std::string message;
};

std::string to_string(ViolationKind kind);

/// Checks the standing assumptions (max C <= D <= min A per task, positive
/// times, costs only on soft tasks). Violations are returned, never thrown.
std::vector<Violation> validate(const TaskSystem& sys);

struct TaskStructure {
  std::vector<Tick> computation_domain;
  Tick deadline = 0;
  std::vector<Tick> arrival_domain;
  TaskKind kind = TaskKind::Soft;

  friend bool operator==(const TaskStructure&, const TaskStructure&) = default;
};

/// The task system with probabilities erased.
struct StructureDescriptor {
  std::vector<TaskStructure> tasks;

  friend bool operator==(const StructureDescriptor&, const StructureDescriptor&) = default;
};

StructureDescriptor structure(const TaskSystem& sys);

bool systems_epsilon_close(const TaskSystem& a, const TaskSystem& b, const Rational& eps);

/// JSON task-system files:
/// {"tasks":[{"kind":"hard","computation":{"1":"1"},"deadline":2,"arrival":{"3":"1"}}, ...]}
/// Probabilities are decimal strings ("0.4") or fractions ("2/5").
TaskSystem parse_task_system(const std::string& json_text);
TaskSystem load_task_system(const std::string& path);
std::string task_system_to_json(const TaskSystem& sys, int indent = 2);
void save_task_system(const TaskSystem& sys, const std::string& path);

/// Distribution as a JSON object text mapping tick strings to probability strings.
std::string distribution_to_json(const FiniteDistribution& d);
FiniteDistribution parse_distribution(const std::string& json_text);

}  // namespace safesched
