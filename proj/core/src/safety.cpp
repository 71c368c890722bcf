#include "safesched/safety.hpp"

#include <algorithm>
#include <json.hpp>

#include "safesched/errors.hpp"

namespace safesched {

namespace {

/// Layered attractor. `some(v)` says whether one successor in the set is
/// enough to pull v in; otherwise all successors are required.
template <typename SomeFn>
Attractor attract(const Arena& arena, std::span<const VertexId> targets, SomeFn some) {
  const std::size_t n = arena.size();
  std::vector<std::vector<VertexId>> preds(n);
  std::vector<std::uint32_t> missing(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    auto succ = arena.succ[v];
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    missing[v] = static_cast<std::uint32_t>(succ.size());
    for (VertexId w : succ) preds[w].push_back(v);
  }
  Attractor out;
  out.rank.assign(n, kUnranked);
  std::vector<VertexId> frontier;
  for (VertexId t : targets) {
    if (out.rank[t] == kUnranked) {
      out.rank[t] = 0;
      frontier.push_back(t);
    }
  }
  std::uint32_t round = 0;
  while (!frontier.empty()) {
    ++round;
    std::vector<VertexId> next;
    for (VertexId w : frontier) {
      for (VertexId p : preds[w]) {
        if (out.rank[p] != kUnranked) continue;
        if (some(p) || --missing[p] == 0) {
          out.rank[p] = round;
          next.push_back(p);
        }
      }
    }
    out.count += frontier.size();
    frontier = std::move(next);
  }
  return out;
}

std::vector<bool> reachable(const std::vector<std::vector<VertexId>>& succ, VertexId from) {
  std::vector<bool> seen(succ.size(), false);
  std::vector<VertexId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : succ[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

/// Arena over the region using only safe Scheduler edges.
Arena region_arena(const SafeRegion& region) {
  const ExplicitMdp& m = region.mdp();
  Arena a;
  a.owner.resize(m.size());
  a.succ.resize(m.size());
  for (VertexId v = 0; v < m.size(); ++v) a.owner[v] = m.owner(v);
  for (VertexId v : region.vertices()) {
    if (m.owner(v) == Owner::Scheduler) {
      for (const auto& e : region.safe_edges(v)) a.succ[v].push_back(e.target);
    } else {
      for (const auto& e : m.outcomes(v)) a.succ[v].push_back(e.target);
    }
  }
  return a;
}

}  // namespace

Arena Arena::from(const ExplicitMdp& m) {
  Arena a;
  a.owner.resize(m.size());
  a.succ.resize(m.size());
  for (VertexId v = 0; v < m.size(); ++v) {
    a.owner[v] = m.owner(v);
    if (m.owner(v) == Owner::TaskGen) {
      for (const auto& e : m.outcomes(v)) a.succ[v].push_back(e.target);
    } else {
      for (const auto& e : m.actions(v)) a.succ[v].push_back(e.target);
    }
  }
  return a;
}

Attractor attractor(const Arena& arena, std::span<const VertexId> bad) {
  return attract(arena, bad, [&](VertexId v) { return arena.owner[v] != Owner::Scheduler; });
}

Attractor attractor(const ExplicitMdp& m, std::span<const VertexId> bad) { return attractor(Arena::from(m), bad); }

bool strongly_connected(const std::vector<std::vector<VertexId>>& succ) {
  if (succ.empty()) return true;
  auto fwd = reachable(succ, 0);
  if (std::find(fwd.begin(), fwd.end(), false) != fwd.end()) return false;
  std::vector<std::vector<VertexId>> rev(succ.size());
  for (VertexId v = 0; v < succ.size(); ++v) {
    for (VertexId w : succ[v]) rev[w].push_back(v);
  }
  auto bwd = reachable(rev, 0);
  return std::find(bwd.begin(), bwd.end(), false) == bwd.end();
}

std::string MemorylessStrategy::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (VertexId v = 0; v < choice_.size(); ++v) {
    if (choice_[v] != kUndefined) j[std::to_string(v)] = safesched::to_string(SchedulerAction{choice_[v]});
  }
  return j.dump(1);
}

MemorylessStrategy MemorylessStrategy::from_json(const std::string& text, std::size_t n) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("strategy: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("strategy must be a JSON object");
  MemorylessStrategy s(n);
  for (const auto& [key, value] : j.items()) {
    unsigned long id = 0;
    try {
      id = std::stoul(key);
    } catch (const std::exception&) {
      throw ParseError("bad vertex id '" + key + "'");
    }
    if (id >= n) throw ParseError("vertex id " + key + " out of range");
    if (!value.is_string()) throw ParseError("action for vertex " + key + " must be a string");
    s.set(static_cast<VertexId>(id), parse_action(value.get<std::string>()));
  }
  return s;
}

std::vector<SchedulerAction> SafeRegion::safe_actions(VertexId v) const {
  std::vector<SchedulerAction> out;
  for (const auto& e : safe_edges_.at(v)) out.push_back(e.action);
  return out;
}

bool SafeRegion::is_safe_action(VertexId v, SchedulerAction a) const {
  for (const auto& e : safe_edges_.at(v)) {
    if (e.action == a) return true;
  }
  return false;
}

std::vector<std::vector<VertexId>> SafeRegion::region_graph() const {
  // Compact ids: position in vertices_.
  std::vector<VertexId> pos(mdp_.size(), kNoVertex);
  for (std::size_t k = 0; k < vertices_.size(); ++k) pos[vertices_[k]] = static_cast<VertexId>(k);
  std::vector<std::vector<VertexId>> succ(vertices_.size());
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    VertexId v = vertices_[k];
    if (mdp_.owner(v) == Owner::TaskGen) {
      for (const auto& e : mdp_.outcomes(v)) succ[k].push_back(pos[e.target]);
    } else {
      for (const auto& e : safe_edges_[v]) succ[k].push_back(pos[e.target]);
    }
  }
  return succ;
}

SafeRegion safe_region(const ExplicitMdp& m) {
  SafeRegion r;
  r.mdp_ = m;
  std::vector<VertexId> bad;
  if (auto b = m.bottom()) bad.push_back(*b);
  r.bad_ = attractor(m, bad);
  if (r.bad_.contains(m.initial())) throw Unschedulable("the hard tasks cannot be scheduled safely");

  r.in_region_.assign(m.size(), false);
  r.safe_edges_.assign(m.size(), {});
  std::vector<VertexId> stack{m.initial()};
  r.in_region_[m.initial()] = true;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    auto visit = [&](VertexId w) {
      if (!r.in_region_[w]) {
        r.in_region_[w] = true;
        stack.push_back(w);
      }
    };
    if (m.owner(v) == Owner::TaskGen) {
      for (const auto& e : m.outcomes(v)) visit(e.target);
      r.edge_count_ += m.outcomes(v).size();
    } else {
      for (const auto& e : m.actions(v)) {
        if (!r.bad_.contains(e.target)) {
          r.safe_edges_[v].push_back(e);
          visit(e.target);
        }
      }
      r.edge_count_ += r.safe_edges_[v].size();
    }
  }
  for (VertexId v = 0; v < m.size(); ++v) {
    if (!r.in_region_[v]) continue;
    r.vertices_.push_back(v);
    if (m.owner(v) == Owner::Scheduler) ++r.scheduler_count_;
  }
  return r;
}

std::string ActionSets::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (VertexId v = 0; v < allowed.size(); ++v) {
    if (allowed[v].empty()) continue;
    auto arr = nlohmann::ordered_json::array();
    for (auto a : allowed[v]) arr.push_back(to_string(a));
    j[std::to_string(v)] = arr;
  }
  return j.dump(1);
}

ActionSets mgs(const SafeRegion& region) {
  ActionSets s;
  s.allowed.resize(region.mdp().size());
  for (VertexId v : region.vertices()) {
    if (region.mdp().owner(v) == Owner::Scheduler) s.allowed[v] = region.safe_actions(v);
  }
  return s;
}

bool check_single_mec(const SafeRegion& region) { return strongly_connected(region.region_graph()); }

std::optional<SchedulerAction> rank_descent(const SafeRegion& region, const std::vector<std::uint32_t>& rank,
                                            VertexId v) {
  std::optional<SchedulerAction> best;
  std::uint32_t best_rank = kUnranked;
  for (const auto& e : region.safe_edges(v)) {
    if (rank[e.target] < best_rank) {
      best_rank = rank[e.target];
      best = e.action;
    }
  }
  return best;
}

std::vector<SamplingVerdict> good_for_sampling(const SafeRegion& region) {
  const ExplicitMdp& m = region.mdp();
  const GameModel& model = m.model();
  std::vector<SamplingVerdict> out;
  for (std::size_t i : m.system().soft_indices()) {
    SamplingVerdict verdict;
    verdict.task = i;
    auto& rank = verdict.rank;
    rank.assign(m.size(), kUnranked);
    // Round 0: the tracked job's remaining time is already determined.
    for (VertexId v : region.vertices()) {
      if (m.owner(v) != Owner::Scheduler) continue;
      const TaskState& s = m.vertex(v).tasks[i];
      if (model.job_live(s) && model.distribution(s.rct).is_dirac()) rank[v] = 0;
    }
    for (std::uint32_t round = 1;; ++round) {
      std::vector<VertexId> added;
      for (VertexId v : region.vertices()) {
        if (rank[v] != kUnranked) continue;
        if (m.owner(v) == Owner::TaskGen) {
          bool forced = true;
          for (const auto& e : m.outcomes(v)) {
            JobEvent ev = e.labels[i];
            if (ev == JobEvent::Fin || ev == JobEvent::Sub) continue;
            if (ev == JobEvent::KillSub || rank[e.target] >= round) {
              forced = false;
              break;
            }
          }
          if (forced) added.push_back(v);
        } else {
          for (const auto& e : region.safe_edges(v)) {
            if (rank[e.target] < round) {
              added.push_back(v);
              break;
            }
          }
        }
      }
      if (added.empty()) break;
      for (VertexId v : added) rank[v] = round;
    }
    std::vector<bool> entry(m.size(), false);
    entry[m.initial()] = true;
    for (VertexId v : region.vertices()) {
      if (m.owner(v) != Owner::TaskGen) continue;
      for (const auto& e : m.outcomes(v)) {
        JobEvent ev = e.labels[i];
        if (ev == JobEvent::Sub || ev == JobEvent::KillSub) entry[e.target] = true;
      }
    }
    for (VertexId v : region.vertices()) {
      if (!entry[v]) continue;
      ++verdict.entry_count;
      if (rank[v] != kUnranked) verdict.witnesses.push_back(v);
    }
    verdict.good = !verdict.witnesses.empty();
    out.push_back(std::move(verdict));
  }
  return out;
}

EfficientReport good_for_efficient_sampling(const SafeRegion& region) {
  const ExplicitMdp& m = region.mdp();
  const Arena arena = region_arena(region);
  EfficientReport report;
  report.good = true;
  for (std::size_t i : m.system().soft_indices()) {
    EfficientVerdict verdict;
    verdict.task = i;
    std::vector<VertexId> kills;
    for (VertexId v : region.vertices()) {
      if (m.owner(v) != Owner::TaskGen) continue;
      for (const auto& e : m.outcomes(v)) {
        if (e.labels[i] == JobEvent::KillSub) {
          kills.push_back(v);
          break;
        }
      }
    }
    Attractor lost = attractor(arena, kills);
    verdict.safe_set.assign(m.size(), false);
    std::vector<VertexId> safe;
    for (VertexId v : region.vertices()) {
      if (lost.contains(v)) continue;
      verdict.safe_set[v] = true;
      safe.push_back(v);
      if (m.owner(v) == Owner::Scheduler) ++verdict.safe_count;
    }
    Attractor reach = attract(arena, safe, [&](VertexId v) { return arena.owner[v] == Owner::Scheduler; });
    verdict.reach_rank = reach.rank;
    verdict.good = verdict.safe_count > 0;
    for (VertexId v : region.vertices()) {
      if (m.owner(v) != Owner::Scheduler) continue;
      if (!reach.contains(v)) {
        verdict.good = false;
        continue;
      }
      verdict.k_edges = std::max(verdict.k_edges, reach.rank[v]);
    }
    report.good = report.good && verdict.good;
    if (verdict.good) report.k_edges = std::max(report.k_edges, verdict.k_edges);
    report.tasks.push_back(std::move(verdict));
  }
  report.k_ticks = report.k_edges / 2;
  return report;
}

std::vector<SchedulerAction> task_safe_actions(const SafeRegion& region, const EfficientVerdict& verdict,
                                               VertexId v) {
  std::vector<SchedulerAction> out;
  for (const auto& e : region.safe_edges(v)) {
    if (verdict.safe_set[e.target]) out.push_back(e.action);
  }
  return out;
}

}  // namespace safesched
