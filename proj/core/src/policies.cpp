#include "safesched/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "safesched/errors.hpp"

namespace safesched {

namespace {

/// Active task with the smallest deadline counter among the given kind.
int earliest(const GameModel& model, const GameVertex& v, TaskKind kind) {
  int best = -1;
  Tick best_d = std::numeric_limits<Tick>::max();
  for (std::size_t i = 0; i < v.tasks.size(); ++i) {
    if (model.system().task(i).kind != kind || !model.is_active(v.tasks[i])) continue;
    if (v.tasks[i].to_deadline < best_d) {
      best_d = v.tasks[i].to_deadline;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

SchedulerAction edf_hard(const GameModel& model, const GameVertex& v) {
  if (v.owner != Owner::Scheduler) return SchedulerAction::idle();
  int pick = earliest(model, v, TaskKind::Hard);
  if (pick < 0) pick = earliest(model, v, TaskKind::Soft);
  return pick < 0 ? SchedulerAction::idle() : SchedulerAction{pick};
}

std::vector<SchedulerAction> edf_allowed(const GameModel& model, const GameVertex& v) {
  if (v.owner != Owner::Scheduler) return {SchedulerAction::idle()};
  const int first = earliest(model, v, TaskKind::Hard);
  if (first < 0) return model.scheduler_actions(v);
  std::vector<SchedulerAction> out;
  const Tick d = v.tasks[static_cast<std::size_t>(first)].to_deadline;
  for (std::size_t i : model.system().hard_indices()) {
    if (model.is_active(v.tasks[i]) && v.tasks[i].to_deadline == d) out.push_back(SchedulerAction::schedule(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

SchedulerAction random_safe(std::span<const SchedulerAction> safe, Rng& rng) {
  if (safe.empty()) throw EmptySafeSet("no safe action to choose from");
  return safe[rng.below(safe.size())];
}

std::vector<SchedulerAction> MgsShield::allowed(GameGraph& graph, VertexId v) {
  if (graph.owner(v) == Owner::Bottom) return {SchedulerAction::idle()};
  if (v >= sets_.allowed.size()) return {};
  return sets_.allowed[v];
}

std::vector<SchedulerAction> EdfShield::allowed(GameGraph& graph, VertexId v) {
  return edf_allowed(graph.model(), graph.vertex(v));
}

std::vector<SchedulerAction> NoShield::allowed(GameGraph& graph, VertexId v) {
  std::vector<SchedulerAction> out;
  for (const auto& e : graph.actions(v)) out.push_back(e.action);
  return out;
}

std::string to_string(ShieldKind k) {
  switch (k) {
    case ShieldKind::Mgs: return "mgs";
    case ShieldKind::Edf: return "edf";
    case ShieldKind::None: return "none";
  }
  return "?";
}

ShieldKind parse_shield_kind(const std::string& text) {
  if (text == "mgs") return ShieldKind::Mgs;
  if (text == "edf") return ShieldKind::Edf;
  if (text == "none") return ShieldKind::None;
  throw ParseError("unknown shield/advice '" + text + "' (expected mgs, edf or none)");
}

SchedulerAction EdfPolicy::choose(GameGraph& graph, VertexId v, std::span<const SchedulerAction> allowed) {
  if (allowed.empty()) throw NoAllowedAction("empty allowed set");
  const SchedulerAction pick = edf_hard(graph.model(), graph.vertex(v));
  if (std::find(allowed.begin(), allowed.end(), pick) != allowed.end()) return pick;
  return allowed.front();
}

SchedulerAction RandomPolicy::choose(GameGraph&, VertexId, std::span<const SchedulerAction> allowed) {
  return random_safe(allowed, rng_);
}

SchedulerAction StrategyPolicy::choose(GameGraph&, VertexId v, std::span<const SchedulerAction> allowed) {
  if (allowed.empty()) throw NoAllowedAction("empty allowed set");
  if (sigma_.defined(v)) {
    const SchedulerAction a = sigma_.at(v);
    if (std::find(allowed.begin(), allowed.end(), a) != allowed.end()) return a;
  }
  return allowed.front();
}

double QTable::get(VertexId v, SchedulerAction a) const {
  auto it = table_.find(key(v, a));
  return it == table_.end() ? 0.0 : it->second.q;
}

void QTable::set(VertexId v, SchedulerAction a, double q) {
  Entry& e = table_[key(v, a)];
  e.q = q;
  ++e.visits;
}

std::uint64_t QTable::visits(VertexId v, SchedulerAction a) const {
  auto it = table_.find(key(v, a));
  return it == table_.end() ? 0 : it->second.visits;
}

double QTable::min_value(VertexId v, std::span<const SchedulerAction> allowed) const {
  if (allowed.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (auto a : allowed) best = std::min(best, get(v, a));
  return best;
}

double QTable::max_abs() const {
  double m = 0.0;
  for (const auto& [k, e] : table_) m = std::max(m, std::abs(e.q));
  return m;
}

void q_update(QTable& table, const QParams& p, VertexId v, SchedulerAction a, double cost, VertexId v_next,
              std::span<const SchedulerAction> allowed_next, bool terminal) {
  const double target = cost + (terminal ? 0.0 : p.discount * table.min_value(v_next, allowed_next));
  table.set(v, a, (1.0 - p.alpha) * table.get(v, a) + p.alpha * target);
}

double QPolicy::exploration() const noexcept {
  if (frozen_) return 0.0;
  if (override_ >= 0.0) return override_;
  if (params_.anneal_steps == 0 || steps_ >= params_.anneal_steps) return params_.explore_end;
  const double frac = static_cast<double>(steps_) / static_cast<double>(params_.anneal_steps);
  return params_.explore_start + (params_.explore_end - params_.explore_start) * frac;
}

SchedulerAction QPolicy::choose(GameGraph&, VertexId v, std::span<const SchedulerAction> allowed) {
  if (allowed.empty()) throw NoAllowedAction("empty allowed set");
  const double eps = exploration();
  if (eps >= 1.0) return random_safe(allowed, rng_);
  if (eps > 0.0 && rng_.uniform() < eps) return random_safe(allowed, rng_);
  SchedulerAction best = allowed.front();
  double best_q = table_.get(v, best);
  for (auto a : allowed.subspan(1)) {
    const double q = table_.get(v, a);
    if (q < best_q) {
      best_q = q;
      best = a;
    }
  }
  return best;
}

void QPolicy::observe(VertexId v, SchedulerAction a, double cost, VertexId next,
                      std::span<const SchedulerAction> allowed_next, bool terminal) {
  if (frozen_) return;
  ++steps_;
  q_update(table_, params_, v, a, cost, next, allowed_next, terminal);
}

}  // namespace safesched
