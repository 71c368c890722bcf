#include "safesched/game.hpp"

#include <cmath>
#include <sstream>

#include "safesched/errors.hpp"

namespace safesched {

std::string to_string(SchedulerAction a) {
  return a.is_idle() ? std::string("eps") : "t" + std::to_string(a.task + 1);
}

SchedulerAction parse_action(const std::string& text) {
  if (text == "eps" || text == "idle") return SchedulerAction::idle();
  if (text.size() >= 2 && text[0] == 't') {
    try {
      std::size_t pos = 0;
      int k = std::stoi(text.substr(1), &pos);
      if (pos == text.size() - 1 && k >= 1) return SchedulerAction{k - 1};
    } catch (const std::exception&) {
    }
  }
  throw ParseError("bad action '" + text + "'");
}

std::string to_string(JobEvent e) {
  switch (e) {
    case JobEvent::Eps: return "eps";
    case JobEvent::Fin: return "fin";
    case JobEvent::Sub: return "sub";
    case JobEvent::KillSub: return "killANDsub";
  }
  return "?";
}

std::string EventLabels::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) out += ',';
    out += safesched::to_string((*this)[i]);
  }
  return out + ")";
}

EventLabels EventLabels::parse(const std::string& text) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') throw ParseError("bad labels '" + text + "'");
  std::vector<JobEvent> events;
  std::stringstream in(text.substr(1, text.size() - 2));
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "eps") events.push_back(JobEvent::Eps);
    else if (item == "fin") events.push_back(JobEvent::Fin);
    else if (item == "sub") events.push_back(JobEvent::Sub);
    else if (item == "killANDsub") events.push_back(JobEvent::KillSub);
    else throw ParseError("bad label '" + item + "'");
  }
  if (events.size() > kMaxTasks) throw ParseError("too many labels");
  EventLabels out(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) out.set(i, events[i]);
  return out;
}

GameModel::GameModel(TaskSystem sys, MissDetection detection) : system_(std::move(sys)), detection_(detection) {
  if (system_.size() > EventLabels::kMaxTasks) {
    throw ParameterOutOfRange("at most " + std::to_string(EventLabels::kMaxTasks) + " tasks are supported");
  }
  for (const auto& t : system_.tasks()) {
    computation_ids_.push_back(intern(t.computation));
    arrival_ids_.push_back(intern(t.arrival));
  }
}

DistId GameModel::intern(const FiniteDistribution& d) {
  auto it = dist_index_.find(d);
  if (it != dist_index_.end()) return it->second;
  DistId id = static_cast<DistId>(dists_.size());
  DistInfo info{d, d.probability(0), 0.0, kNoJob, kNoJob};
  info.p0_value = to_double(info.p0);
  dists_.push_back(std::move(info));
  dist_index_.emplace(d, id);
  return id;
}

DistId GameModel::decrement(DistId id) {
  if (dists_[id].decremented == kNoJob) {
    DistId r = intern(dists_[id].dist.decrement());
    dists_[id].decremented = r;
  }
  return dists_[id].decremented;
}

DistId GameModel::condition(DistId id) {
  if (dists_[id].p0 == 0) return id;
  if (dists_[id].conditioned == kNoJob) {
    DistId r = intern(dists_[id].dist.condition_nonzero());
    dists_[id].conditioned = r;
  }
  return dists_[id].conditioned;
}

TaskState GameModel::fresh_state(std::size_t task) const {
  return TaskState{computation_ids_[task], system_.task(task).deadline, arrival_ids_[task]};
}

GameVertex GameModel::initial_vertex() const {
  GameVertex v{Owner::Scheduler, {}};
  v.tasks.reserve(task_count());
  for (std::size_t i = 0; i < task_count(); ++i) v.tasks.push_back(fresh_state(i));
  return v;
}

std::vector<SchedulerAction> GameModel::scheduler_actions(const GameVertex& v) const {
  if (v.owner == Owner::Bottom) return {SchedulerAction::idle()};
  if (v.owner != Owner::Scheduler) throw WrongOwner("scheduler_actions needs a Scheduler vertex");
  std::vector<SchedulerAction> out;
  for (std::size_t i = 0; i < v.tasks.size(); ++i) {
    if (is_active(v.tasks[i])) out.push_back(SchedulerAction::schedule(i));
  }
  out.push_back(SchedulerAction::idle());
  return out;
}

GameVertex GameModel::apply_scheduler(const GameVertex& v, SchedulerAction a) {
  if (v.owner == Owner::Bottom) {
    if (!a.is_idle()) throw IllegalAction("only idle is available in the sink");
    return v;
  }
  if (v.owner != Owner::Scheduler) throw WrongOwner("apply_scheduler needs a Scheduler vertex");
  if (!a.is_idle()) {
    if (static_cast<std::size_t>(a.task) >= v.tasks.size() || !is_active(v.tasks[a.task])) {
      throw IllegalAction("task " + std::to_string(a.task + 1) + " is not active");
    }
  }
  GameVertex out{Owner::TaskGen, v.tasks};
  for (std::size_t i = 0; i < out.tasks.size(); ++i) {
    TaskState& s = out.tasks[i];
    if (!a.is_idle() && static_cast<std::size_t>(a.task) == i) s.rct = decrement(s.rct);
    if (s.to_deadline > 0) --s.to_deadline;
    s.to_arrival = decrement(s.to_arrival);
  }
  return out;
}

bool GameModel::hard_miss_pending(const GameVertex& v) const {
  if (v.owner != Owner::TaskGen) return false;
  for (std::size_t i : system_.hard_indices()) {
    const TaskState& s = v.tasks[i];
    if (!has_job(s)) continue;
    const DistInfo& info = dists_[s.rct];
    if (detection_ == MissDetection::Early) {
      if (info.dist.min_value() > s.to_deadline) return true;
    } else if (info.p0 == 0 && s.to_deadline == 0) {
      return true;
    }
  }
  return false;
}

std::vector<std::pair<TaskGenOutcome, GameVertex>> GameModel::taskgen_outcomes(const GameVertex& v) {
  if (v.owner != Owner::TaskGen) throw WrongOwner("taskgen_outcomes needs a TaskGen vertex");
  const std::size_t n = v.tasks.size();
  std::vector<std::pair<TaskGenOutcome, GameVertex>> out;
  if (hard_miss_pending(v)) {
    out.push_back({TaskGenOutcome{EventLabels(n), Rational(1), Rational(0)}, GameVertex::bottom()});
    return out;
  }

  struct Option {
    JobEvent event;
    Rational prob;
    TaskState next;
    bool hard_miss;
  };
  std::vector<std::vector<Option>> options(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TaskState& s = v.tasks[i];
    const Task& task = system_.task(i);
    const Rational a0 = dists_[s.to_arrival].p0;
    const Rational na0 = 1 - a0;
    DistId arrival_next = na0 != 0 ? condition(s.to_arrival) : s.to_arrival;
    auto& opts = options[i];
    if (!has_job(s)) {
      if (a0 != 0) opts.push_back({JobEvent::Sub, a0, fresh_state(i), false});
      if (na0 != 0) opts.push_back({JobEvent::Eps, na0, TaskState{kNoJob, s.to_deadline, arrival_next}, false});
      continue;
    }
    const Rational c0 = dists_[s.rct].p0;
    const Rational nc0 = 1 - c0;
    if (c0 != 0 && na0 != 0) opts.push_back({JobEvent::Fin, c0 * na0, TaskState{kNoJob, s.to_deadline, arrival_next}, false});
    if (c0 != 0 && a0 != 0) opts.push_back({JobEvent::Sub, c0 * a0, fresh_state(i), false});
    if (nc0 != 0 && a0 != 0) {
      // A hard job still running when its successor arrives has missed its deadline.
      opts.push_back({JobEvent::KillSub, nc0 * a0, fresh_state(i), task.is_hard()});
    }
    if (nc0 != 0 && na0 != 0) {
      opts.push_back({JobEvent::Eps, nc0 * na0, TaskState{condition(s.rct), s.to_deadline, arrival_next}, false});
    }
  }

  Rational to_bottom = 0;
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    Rational prob = 1;
    Rational cost = 0;
    bool miss = false;
    EventLabels labels(n);
    GameVertex next{Owner::Scheduler, std::vector<TaskState>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      const Option& o = options[i][pick[i]];
      prob *= o.prob;
      labels.set(i, o.event);
      next.tasks[i] = o.next;
      miss = miss || o.hard_miss;
      if (o.event == JobEvent::KillSub && system_.task(i).is_soft()) cost += system_.task(i).miss_cost;
    }
    if (miss) {
      to_bottom += prob;
    } else {
      out.push_back({TaskGenOutcome{labels, prob, cost}, std::move(next)});
    }
    std::size_t k = n;
    bool done = false;
    while (true) {
      if (k == 0) {
        done = true;
        break;
      }
      --k;
      if (++pick[k] < options[k].size()) break;
      pick[k] = 0;
    }
    if (done) break;
  }
  if (to_bottom != 0) {
    out.push_back({TaskGenOutcome{EventLabels(n), to_bottom, Rational(0)}, GameVertex::bottom()});
  }
  return out;
}

std::string GameModel::render_task(const TaskState& s) const {
  std::string c;
  if (s.rct == kNoJob) c = "0";
  else if (dists_[s.rct].p0 == 1) c = "0!";
  else c = dists_[s.rct].dist.to_string();
  return "(" + c + "," + std::to_string(s.to_deadline) + "," + dists_[s.to_arrival].dist.to_string() + ")";
}

std::string GameModel::render(const GameVertex& v) const {
  if (v.owner == Owner::Bottom) return "BOT";
  std::string out = v.owner == Owner::Scheduler ? "S:" : "T:";
  for (std::size_t i = 0; i < v.tasks.size(); ++i) {
    if (i) out += '/';
    out += render_task(v.tasks[i]);
  }
  return out;
}

std::string state_space_estimate(const TaskSystem& sys) {
  mpz_class total = 1;
  for (const auto& t : sys.tasks()) {
    total *= mpz_class(t.computation.max_value() + 1);
    total *= mpz_class(t.arrival.max_value() + 1);
  }
  return total.get_str();
}

double state_space_estimate_value(const TaskSystem& sys) {
  double total = 1.0;
  for (const auto& t : sys.tasks()) {
    total *= static_cast<double>(t.computation.max_value() + 1) * static_cast<double>(t.arrival.max_value() + 1);
  }
  return total;
}

}  // namespace safesched
