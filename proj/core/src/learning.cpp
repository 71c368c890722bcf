#include "safesched/learning.hpp"

#include <algorithm>
#include <deque>
#include <json.hpp>
#include <limits>

#include "safesched/errors.hpp"
#include "safesched/pac.hpp"
#include "safesched/policies.hpp"

namespace safesched {

std::string to_string(LearnMode m) {
  switch (m) {
    case LearnMode::SoftOnly: return "soft-only";
    case LearnMode::GoodForSampling: return "good-for-sampling";
    case LearnMode::GoodForEfficientSampling: return "good-for-efficient-sampling";
  }
  return "?";
}

LearnMode parse_learn_mode(const std::string& text) {
  if (text == "soft-only") return LearnMode::SoftOnly;
  if (text == "good-for-sampling" || text == "gfs") return LearnMode::GoodForSampling;
  if (text == "good-for-efficient-sampling" || text == "gfes") return LearnMode::GoodForEfficientSampling;
  throw ParseError("unknown learning mode '" + text + "'");
}

namespace {

FiniteDistribution from_samples(const SampleSet& s) {
  std::map<Tick, Rational> mass;
  for (auto [v, c] : s.counts) mass[v] = Rational(static_cast<long>(c), static_cast<long>(s.total));
  for (auto& [v, m] : mass) m.canonicalize();
  return FiniteDistribution(mass);
}

FiniteDistribution uniform_over(const std::vector<Tick>& domain) {
  std::map<Tick, Rational> mass;
  for (Tick v : domain) mass[v] = Rational(1, static_cast<long>(domain.size()));
  return FiniteDistribution(mass);
}

bool deficient(const SampleSet& s, const FiniteDistribution& declared) {
  if (s.total == 0) return true;
  for (const auto& [v, p] : declared.entries()) {
    if (!s.counts.count(v)) return true;
  }
  return false;
}

/// Samples arrivals of every task and computation times of tracked jobs.
class Collector {
 public:
  explicit Collector(std::size_t n) : computation(n), arrival(n), tracked(n, false), granted(n, 0) {}

  /// Records one tick; `track_release(i)` decides whether a new job of task i is tracked.
  template <typename TrackFn>
  void record(SchedulerAction a, const Observation& obs, TrackFn track_release) {
    if (!a.is_idle()) ++granted[static_cast<std::size_t>(a.task)];
    for (std::size_t i = 0; i < obs.tasks.size(); ++i) {
      const TaskEvent& ev = obs.tasks[i];
      if (ev.completed && tracked[i]) computation[i].add(ev.computation);
      if (ev.completed || ev.killed) tracked[i] = false;
      if (ev.released) {
        if (ev.inter_arrival) arrival[i].add(*ev.inter_arrival);
        granted[i] = 0;
        tracked[i] = track_release(i);
      } else if (ev.completed) {
        granted[i] = 0;
      }
    }
  }

  std::vector<SampleSet> computation;
  std::vector<SampleSet> arrival;
  std::vector<bool> tracked;
  std::vector<Tick> granted;
};

std::uint64_t budget_of(const LearnConfig& cfg) {
  return cfg.step_budget ? cfg.step_budget : std::numeric_limits<std::uint64_t>::max();
}

}  // namespace

LearnedModel assemble_model(const TaskSystem& source, std::vector<SampleSet> computation,
                            std::vector<SampleSet> arrival) {
  LearnedModel out;
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const Task& t = source.task(i);
    Task learned = t;
    const bool cdef = deficient(computation[i], t.computation);
    const bool adef = deficient(arrival[i], t.arrival);
    learned.computation = computation[i].total ? from_samples(computation[i]) : uniform_over(t.computation.support());
    learned.arrival = arrival[i].total ? from_samples(arrival[i]) : uniform_over(t.arrival.support());
    out.computation_deficient.push_back(cdef);
    out.arrival_deficient.push_back(adef);
    tasks.push_back(std::move(learned));
  }
  out.system = TaskSystem(std::move(tasks));
  out.computation = std::move(computation);
  out.arrival = std::move(arrival);
  return out;
}

std::string LearnedModel::sidecar_json(const LearnConfig& cfg) const {
  nlohmann::ordered_json j;
  j["mode"] = to_string(cfg.mode);
  j["eps"] = cfg.eps;
  j["gamma"] = cfg.gamma;
  j["seed"] = cfg.seed;
  j["generator"] = Rng::kAlgorithm;
  j["required_samples"] = required;
  j["steps"] = steps;
  j["complete"] = complete;
  j["hard_misses"] = hard_misses;
  auto tasks = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < computation.size(); ++i) {
    nlohmann::ordered_json t;
    t["task"] = i + 1;
    t["computation_samples"] = computation[i].total;
    t["arrival_samples"] = arrival[i].total;
    t["computation_deficient"] = static_cast<bool>(computation_deficient[i]);
    t["arrival_deficient"] = static_cast<bool>(arrival_deficient[i]);
    tasks.push_back(t);
  }
  j["tasks"] = tasks;
  return j.dump(2);
}

LearnedModel learn_soft_only(SimEnv& env, const LearnConfig& cfg) {
  const TaskSystem& sys = env.system();
  if (sys.has_hard_tasks()) throw HardTasksPresent("soft-only learning needs a system without hard tasks");
  const GameModel& model = env.graph().model();
  const std::uint64_t need = cfg.samples_override.value_or(samples_soft_only(sys, cfg.eps, cfg.gamma));
  const std::uint64_t budget = budget_of(cfg);
  const std::uint64_t start = env.ticks();
  const std::size_t n = sys.size();
  Collector col(n);
  bool exhausted = false;

  for (std::size_t i = 0; i < n && !exhausted; ++i) {
    // A job never executed so far and able to finish under priority is an unbiased sample.
    const TaskState& s = env.state().tasks[i];
    col.tracked.assign(n, false);
    if (model.job_live(s) && col.granted[i] == 0 && model.distribution(s.rct).max_value() <= s.to_deadline) {
      col.tracked[i] = true;
    }
    while (col.computation[i].total < need || col.arrival[i].total < need) {
      if (env.ticks() - start >= budget) {
        exhausted = true;
        break;
      }
      const GameVertex& v = env.state();
      SchedulerAction a = SchedulerAction::idle();
      if (model.is_active(v.tasks[i])) {
        a = SchedulerAction::schedule(i);
      } else {
        a = edf_hard(model, v);
      }
      const Observation& obs = env.step(a);
      col.record(a, obs, [&](std::size_t k) { return k == i; });
    }
  }

  LearnedModel out = assemble_model(sys, std::move(col.computation), std::move(col.arrival));
  out.required = need;
  out.steps = env.ticks() - start;
  out.hard_misses = env.hard_misses();
  out.complete = !exhausted;
  return out;
}

LearnedModel learn_safe(SimEnv& env, const SafeRegion& region, const LearnConfig& cfg) {
  const TaskSystem& sys = env.system();
  if (cfg.mode == LearnMode::SoftOnly) {
    if (sys.has_hard_tasks()) throw HardTasksPresent("soft-only learning needs a system without hard tasks");
    return learn_soft_only(env, cfg);
  }
  const ExplicitMdp& m = region.mdp();
  if (!(structure(m.system()) == structure(sys))) throw StructureMismatch("region and environment differ in structure");

  std::vector<SamplingVerdict> gfs;
  EfficientReport gfes;
  if (cfg.mode == LearnMode::GoodForSampling) {
    gfs = good_for_sampling(region);
    for (const auto& v : gfs) {
      if (!v.good) throw ConditionNotCertified("task " + std::to_string(v.task + 1) + " is not good for sampling");
    }
  } else {
    gfes = good_for_efficient_sampling(region);
    if (!gfes.good) throw ConditionNotCertified("the safe region is not good for efficient sampling");
  }

  const GameModel& model = m.model();
  const std::uint64_t need = cfg.samples_override.value_or(samples_all_tasks(sys, cfg.eps, cfg.gamma));
  const std::uint64_t budget = budget_of(cfg);
  const std::uint64_t start = env.ticks();
  const std::size_t n = sys.size();
  ModelTracker tracker(m.graph_ptr());
  Collector col(n);
  Rng rng(cfg.seed);
  bool exhausted = false;

  auto step = [&](SchedulerAction a, auto track_release) {
    if (!region.is_safe_action(tracker.vertex(), a)) throw SafetyViolation("learner chose an unsafe action");
    const Observation& obs = env.step(a);
    if (obs.hard_miss) throw SafetyViolation("hard deadline missed while learning");
    col.record(a, obs, track_release);
    tracker.advance(a, obs);
    return &obs;
  };
  auto out_of_budget = [&] {
    if (env.ticks() - start >= budget) exhausted = true;
    return exhausted;
  };
  auto edf_safe = [&](VertexId v, const std::vector<SchedulerAction>& allowed) {
    const SchedulerAction e = edf_hard(model, m.vertex(v));
    if (std::find(allowed.begin(), allowed.end(), e) != allowed.end()) return e;
    return allowed.front();
  };

  // Hard tasks: every job completes under a safe schedule.
  {
    auto hard_done = [&] {
      for (std::size_t i : sys.hard_indices()) {
        if (col.computation[i].total < need || col.arrival[i].total < need) return false;
      }
      return true;
    };
    if (env.ticks() == 0) {
      for (std::size_t i : sys.hard_indices()) col.tracked[i] = true;
    }
    while (!hard_done() && !out_of_budget()) {
      const VertexId v = tracker.vertex();
      step(edf_safe(v, region.safe_actions(v)), [&](std::size_t k) { return sys.task(k).is_hard(); });
    }
  }

  const auto& soft = sys.soft_indices();
  for (std::size_t k = 0; k < soft.size() && !exhausted; ++k) {
    const std::size_t i = soft[k];
    col.tracked.assign(n, false);
    auto phase_done = [&] { return col.computation[i].total >= need && col.arrival[i].total >= need; };

    if (cfg.mode == LearnMode::GoodForEfficientSampling) {
      const EfficientVerdict& verdict = gfes.tasks[k];
      while (!phase_done() && !out_of_budget()) {
        const VertexId v = tracker.vertex();
        if (!verdict.safe_set[v]) {
          auto a = rank_descent(region, verdict.reach_rank, v);
          if (!a) throw ValidationFailed("safe set unreachable from vertex " + std::to_string(v));
          step(*a, [](std::size_t) { return false; });
          continue;
        }
        const auto allowed = task_safe_actions(region, verdict, v);
        SchedulerAction a = edf_safe(v, allowed);
        if (a.is_idle() || sys.task(static_cast<std::size_t>(a.task)).is_soft()) {
          if (std::find(allowed.begin(), allowed.end(), SchedulerAction::schedule(i)) != allowed.end()) {
            a = SchedulerAction::schedule(i);
          }
        }
        step(a, [&](std::size_t t) { return t == i && verdict.safe_set[tracker.vertex()]; });
      }
      continue;
    }

    // Good for sampling: random safe walk until a fresh job of task i can be
    // forced to reveal its computation time, then force it.
    const SamplingVerdict& verdict = gfs[k];
    bool forcing = false;
    // The current job of task i was already used (or can no longer be used).
    bool consumed = col.granted[i] != 0;
    while (!phase_done() && !out_of_budget()) {
      const VertexId v = tracker.vertex();
      const TaskState& s = m.vertex(v).tasks[i];
      if (!forcing && !consumed && model.job_live(s) && col.granted[i] == 0 && verdict.rank[v] != kUnranked) {
        forcing = true;
        col.tracked[i] = true;
      }
      if (forcing && model.job_live(s) && model.distribution(s.rct).is_dirac()) {
        col.computation[i].add(col.granted[i] + model.distribution(s.rct).min_value());
        col.tracked[i] = false;
        forcing = false;
        consumed = true;
        continue;
      }
      SchedulerAction a = SchedulerAction::idle();
      if (forcing) {
        auto pick = rank_descent(region, verdict.rank, v);
        if (!pick) throw ValidationFailed("forcing strategy undefined at vertex " + std::to_string(v));
        a = *pick;
      } else {
        const auto safe = region.safe_actions(v);
        a = random_safe(safe, rng);
      }
      const Observation* obs = step(a, [](std::size_t) { return false; });
      const TaskEvent& ev = obs->tasks[i];
      if (ev.completed || ev.killed) {
        forcing = false;
        consumed = true;
      }
      if (ev.released) {
        forcing = false;
        consumed = false;
      } else if (!forcing && a == SchedulerAction::schedule(i)) {
        consumed = true;
      }
    }
  }

  LearnedModel out = assemble_model(sys, std::move(col.computation), std::move(col.arrival));
  out.required = need;
  out.steps = env.ticks() - start;
  out.hard_misses = env.hard_misses();
  out.complete = !exhausted;
  return out;
}

MemorylessStrategy transfer_strategy(const ExplicitMdp& from, const MemorylessStrategy& sigma, const ExplicitMdp& to) {
  MemorylessStrategy out(to.size());
  std::vector<bool> seen(to.size(), false);
  std::deque<std::pair<VertexId, VertexId>> queue{{from.initial(), to.initial()}};
  seen[to.initial()] = true;
  while (!queue.empty()) {
    auto [u, w] = queue.front();
    queue.pop_front();
    auto visit = [&](VertexId u2, VertexId w2) {
      if (!seen[w2]) {
        seen[w2] = true;
        queue.emplace_back(u2, w2);
      }
    };
    if (to.owner(w) == Owner::Scheduler) {
      if (!sigma.defined(u)) continue;
      const SchedulerAction a = sigma.at(u);
      const VertexId u2 = from.successor(u, a);
      const VertexId w2 = to.successor(w, a);
      if (u2 == kNoVertex || w2 == kNoVertex) continue;
      out.set(w, a);
      visit(u2, w2);
    } else if (to.owner(w) == Owner::TaskGen) {
      for (const auto& e : to.outcomes(w)) {
        for (const auto& f : from.outcomes(u)) {
          if (f.labels == e.labels && (from.owner(f.target) == Owner::Bottom) == (to.owner(e.target) == Owner::Bottom)) {
            visit(f.target, e.target);
            break;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace safesched
