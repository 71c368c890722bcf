#include "safesched/sim_env.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "safesched/errors.hpp"

namespace safesched {

SimEnv::SimEnv(std::shared_ptr<GameGraph> graph, std::uint64_t seed, EnvOptions opts)
    : graph_(std::move(graph)), seed_(seed), rng_(seed), opts_(opts), current_(graph_->initial()) {
  reset_trackers();
}

SimEnv::SimEnv(const TaskSystem& sys, std::uint64_t seed, EnvOptions opts)
    : SimEnv(std::make_shared<GameGraph>(std::make_shared<GameModel>(sys)), seed, opts) {}

void SimEnv::reset_trackers() {
  const std::size_t n = graph_->model().task_count();
  last_release_.assign(n, ticks_);
  granted_.assign(n, 0);
  obs_.tasks.assign(n, TaskEvent{});
}

std::vector<SchedulerAction> SimEnv::available_actions() {
  std::vector<SchedulerAction> out;
  for (const auto& e : graph_->actions(current_)) out.push_back(e.action);
  return out;
}

const Observation& SimEnv::step(SchedulerAction a) {
  const VertexId mid = graph_->successor(current_, a);
  if (mid == kNoVertex) throw IllegalAction("action " + to_string(a) + " is not available");
  const std::size_t n = obs_.tasks.size();
  for (auto& t : obs_.tasks) t = TaskEvent{};
  ++ticks_;
  obs_.tick = ticks_;
  obs_.action = a;
  obs_.hard_miss = false;
  obs_.restarted = false;
  obs_.cost = 0.0;

  if (graph_->owner(mid) == Owner::Bottom) {
    obs_.labels = EventLabels(n);
    obs_.vertex = mid;
    if (opts_.record_trace) trace_.push_back(TraceEntry{ticks_, a, obs_.labels, Rational(0), false, false});
    return obs_;
  }

  if (!a.is_idle()) ++granted_[static_cast<std::size_t>(a.task)];
  const std::size_t pick = graph_->sample_outcome(mid, rng_.uniform());
  const ChanceEdge& edge = graph_->outcomes_of(mid)[pick];
  obs_.labels = edge.labels;
  bool restarted = false;

  if (graph_->owner(edge.target) == Owner::Bottom) {
    obs_.hard_miss = true;
    ++hard_misses_;
    if (opts_.restart_on_miss) {
      current_ = graph_->initial();
      restarted = true;
      reset_trackers();
    } else {
      current_ = edge.target;
    }
  } else {
    const GameVertex& before = graph_->vertex(mid);
    for (std::size_t i = 0; i < n; ++i) {
      TaskEvent& ev = obs_.tasks[i];
      const JobEvent label = edge.labels[i];
      if (label == JobEvent::Eps) continue;
      const bool had_job = before.tasks[i].rct != kNoJob;
      if (label == JobEvent::Fin || (label == JobEvent::Sub && had_job)) {
        ev.completed = true;
        ev.computation = granted_[i];
      }
      if (label == JobEvent::KillSub) {
        ev.killed = true;
        ++soft_misses_;
      }
      if (label == JobEvent::Sub || label == JobEvent::KillSub) {
        ev.released = true;
        if (last_release_[i]) ev.inter_arrival = static_cast<Tick>(ticks_ - *last_release_[i]);
        last_release_[i] = ticks_;
      }
      granted_[i] = 0;
    }
    obs_.cost = edge.c;
    total_cost_ += edge.c;
    current_ = edge.target;
  }
  obs_.vertex = current_;
  obs_.restarted = restarted;
  if (opts_.record_trace) {
    trace_.push_back(TraceEntry{ticks_, a, edge.labels, edge.cost, obs_.hard_miss, restarted});
  }
  return obs_;
}

void ModelTracker::advance(SchedulerAction a, const Observation& obs) {
  if (obs.restarted) {
    reset();
    return;
  }
  const VertexId mid = graph_->successor(vertex_, a);
  if (mid == kNoVertex) throw StructureMismatch("model has no action " + to_string(a) + " here");
  if (graph_->owner(mid) == Owner::Bottom) {
    vertex_ = mid;
    return;
  }
  for (const auto& e : graph_->outcomes(mid)) {
    if (e.labels == obs.labels && (graph_->owner(e.target) == Owner::Bottom) == obs.hard_miss) {
      vertex_ = e.target;
      return;
    }
  }
  throw StructureMismatch("model has no outcome " + obs.labels.to_string());
}

void write_trace(const SimEnv& env, std::ostream& out) {
  out << "# generator " << Rng::kAlgorithm << " seed " << env.seed() << '\n';
  for (const auto& e : env.trace()) {
    std::string flags;
    if (e.hard_miss) flags += "miss";
    if (e.restarted) flags += flags.empty() ? "restart" : ",restart";
    if (flags.empty()) flags = "-";
    out << e.tick << "; " << to_string(e.action) << "; " << e.labels.to_string() << "; "
        << to_decimal_string(e.cost) << "; " << flags << '\n';
  }
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

ReplayResult replay_trace(const TaskSystem& sys, std::istream& in, std::optional<std::uint64_t> seed) {
  struct Line {
    std::uint64_t tick;
    SchedulerAction action;
    EventLabels labels;
    Rational cost;
    bool miss;
    bool restart;
  };
  std::vector<Line> lines;
  std::string raw;
  std::size_t lineno = 0;
  ReplayResult result;
  while (std::getline(in, raw)) {
    ++lineno;
    raw = trim(raw);
    if (raw.empty() || raw[0] == '#') continue;
    std::vector<std::string> parts;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ';')) parts.push_back(trim(item));
    if (parts.size() != 5) {
      result.message = "line " + std::to_string(lineno) + ": expected 5 fields";
      return result;
    }
    try {
      Line l{std::stoull(parts[0]), parse_action(parts[1]), EventLabels::parse(parts[2]), parse_rational(parts[3]),
             parts[4].find("miss") != std::string::npos, parts[4].find("restart") != std::string::npos};
      lines.push_back(std::move(l));
    } catch (const std::exception& e) {
      result.message = "line " + std::to_string(lineno) + ": " + e.what();
      return result;
    }
  }

  bool restarts = false;
  for (const auto& l : lines) restarts = restarts || l.restart;
  auto graph = std::make_shared<GameGraph>(std::make_shared<GameModel>(sys));

  // Structural check.
  VertexId v = graph->initial();
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const Line& l = lines[k];
    const std::string where = "step " + std::to_string(k + 1) + ": ";
    if (l.tick != k + 1) {
      result.message = where + "tick out of sequence";
      return result;
    }
    const VertexId mid = graph->successor(v, l.action);
    if (mid == kNoVertex) {
      result.message = where + "action " + to_string(l.action) + " not available";
      return result;
    }
    if (graph->owner(mid) == Owner::Bottom) {
      v = mid;
      continue;
    }
    const ChanceEdge* match = nullptr;
    for (const auto& e : graph->outcomes(mid)) {
      if (e.labels == l.labels && (graph->owner(e.target) == Owner::Bottom) == l.miss) {
        match = &e;
        break;
      }
    }
    if (!match) {
      result.message = where + "outcome " + l.labels.to_string() + " impossible";
      return result;
    }
    if (match->cost != l.cost) {
      result.message = where + "cost mismatch";
      return result;
    }
    v = (l.miss && l.restart) ? graph->initial() : match->target;
  }

  if (seed) {
    SimEnv env(graph, *seed, EnvOptions{restarts, true});
    for (std::size_t k = 0; k < lines.size(); ++k) {
      const Line& l = lines[k];
      const std::string where = "step " + std::to_string(k + 1) + ": ";
      if (graph->successor(env.vertex(), l.action) == kNoVertex) {
        result.message = where + "action " + to_string(l.action) + " not available in the seeded re-run";
        return result;
      }
      env.step(l.action);
      const TraceEntry& e = env.trace().back();
      if (!(e.labels == l.labels) || e.cost != l.cost || e.hard_miss != l.miss || e.restarted != l.restart) {
        result.message = where + "differs from the seeded re-run";
        return result;
      }
    }
  }
  result.ok = true;
  result.steps = lines.size();
  result.message = "ok";
  return result;
}

}  // namespace safesched
