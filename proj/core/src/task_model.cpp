#include "safesched/task_model.hpp"

#include <algorithm>

namespace safesched {

TaskSystem::TaskSystem(std::vector<Task> tasks) : tasks_(std::move(tasks)) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    const Task& t = tasks_[i];
    (t.is_hard() ? hard_ : soft_).push_back(i);
    c_max_ = std::max(c_max_, t.computation.max_value());
    a_max_ = std::max(a_max_, t.arrival.max_value());
    d_max_ = std::max(d_max_, t.deadline);
    arrival_width_ = std::max(arrival_width_, t.arrival.support_size());
    domain_width_ = std::max({domain_width_, t.arrival.support_size(), t.computation.support_size()});
    for (const auto* d : {&t.computation, &t.arrival}) {
      pi_max_ = std::max(pi_max_, d->max_probability());
      pi_min_ = std::min(pi_min_, d->min_probability());
    }
  }
}

Rational TaskSystem::max_soft_cost() const {
  Rational best = 0;
  for (std::size_t i : soft_) best = std::max(best, tasks_[i].miss_cost);
  return best;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptySystem: return "EmptySystem";
    case ViolationKind::ZeroComputationTime: return "ZeroComputationTime";
    case ViolationKind::ZeroArrivalTime: return "ZeroArrivalTime";
    case ViolationKind::ComputationExceedsDeadline: return "ComputationExceedsDeadline";
    case ViolationKind::DeadlineExceedsMinArrival: return "DeadlineExceedsMinArrival";
    case ViolationKind::HardTaskWithCost: return "HardTaskWithCost";
    case ViolationKind::NegativeCost: return "NegativeCost";
  }
  return "Unknown";
}

std::vector<Violation> validate(const TaskSystem& sys) {
  std::vector<Violation> out;
  if (sys.empty()) {
    out.push_back({std::nullopt, ViolationKind::EmptySystem, "task system has no tasks"});
    return out;
  }
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const Task& t = sys.task(i);
    const std::string who = "task " + std::to_string(i + 1);
    if (t.computation.min_value() == 0)
      out.push_back({i, ViolationKind::ZeroComputationTime, who + ": computation time 0 in domain"});
    if (t.arrival.min_value() == 0)
      out.push_back({i, ViolationKind::ZeroArrivalTime, who + ": inter-arrival time 0 in domain"});
    if (t.computation.max_value() > t.deadline)
      out.push_back({i, ViolationKind::ComputationExceedsDeadline,
                     who + ": max computation " + std::to_string(t.computation.max_value()) +
                         " exceeds deadline " + std::to_string(t.deadline)});
    if (t.deadline > t.arrival.min_value())
      out.push_back({i, ViolationKind::DeadlineExceedsMinArrival,
                     who + ": deadline " + std::to_string(t.deadline) + " exceeds min inter-arrival " +
                         std::to_string(t.arrival.min_value())});
    if (t.is_hard() && t.miss_cost != 0)
      out.push_back({i, ViolationKind::HardTaskWithCost, who + ": hard tasks carry no miss cost"});
    if (sgn(t.miss_cost) < 0)
      out.push_back({i, ViolationKind::NegativeCost, who + ": negative miss cost"});
  }
  return out;
}

StructureDescriptor structure(const TaskSystem& sys) {
  StructureDescriptor out;
  out.tasks.reserve(sys.size());
  for (const Task& t : sys.tasks())
    out.tasks.push_back({t.computation.support(), t.deadline, t.arrival.support(), t.kind});
  return out;
}

bool systems_epsilon_close(const TaskSystem& a, const TaskSystem& b, const Rational& eps) {
  if (a.size() != b.size()) return false;
  if (structure(a) != structure(b)) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!epsilon_close(a.task(i).arrival, b.task(i).arrival, eps)) return false;
    if (!epsilon_close(a.task(i).computation, b.task(i).computation, eps)) return false;
  }
  return true;
}

}  // namespace safesched
