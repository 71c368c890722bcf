#include "safesched/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "safesched/errors.hpp"
#include "safesched/fixtures.hpp"

namespace safesched {

namespace {

constexpr double kTabularLimit = 1e6;

double default_penalty(const TaskSystem& sys) { return 1000.0 * to_double(sys.max_soft_cost()); }

/// Game graph for a system plus the shield over it. MGS needs the solved
/// region, so the graph is the region's.
struct ShieldedGraph {
  std::shared_ptr<GameGraph> graph;
  std::optional<SafeRegion> region;
  std::unique_ptr<Shield> shield;
};

ShieldedGraph shielded_graph(const TaskSystem& sys, ShieldKind kind, std::size_t max_vertices = 2000000) {
  ShieldedGraph out;
  if (kind == ShieldKind::Mgs) {
    out.region = safe_region(build_explicit(sys, max_vertices));
    out.graph = out.region->mdp().graph_ptr();
    out.shield = std::make_unique<MgsShield>(*out.region);
    return out;
  }
  out.graph = std::make_shared<GameGraph>(std::make_shared<GameModel>(sys));
  if (kind == ShieldKind::Edf) {
    out.shield = std::make_unique<EdfShield>();
  } else {
    out.shield = std::make_unique<NoShield>();
  }
  return out;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) { return Rng(seed ^ (stream * 0x9e3779b97f4a7c15ULL)).next(); }

}  // namespace

QLearnResult run_qlearning(const TaskSystem& sys, const QLearnConfig& cfg) {
  if (state_space_estimate_value(sys) > kTabularLimit)
    throw StateSpaceExceeded("tabular learning needs a state space estimate of at most 1e6, got " +
                             state_space_estimate(sys));
  ShieldedGraph sg = shielded_graph(sys, cfg.shield);
  GameGraph& graph = *sg.graph;
  Shield& shield = *sg.shield;
  const bool unshielded = cfg.shield == ShieldKind::None;
  const double penalty = unshielded ? cfg.penalty.value_or(default_penalty(sys)) : 0.0;
  EnvOptions opts;
  opts.restart_on_miss = unshielded;

  QPolicy policy(cfg.params, mix(cfg.seed, 1));
  QLearnResult out;
  {
    SimEnv env(sg.graph, mix(cfg.seed, 2), opts);
    for (std::uint64_t t = 0; t < cfg.train_steps && !env.in_sink(); ++t) {
      const VertexId v = env.vertex();
      const auto allowed = shield.allowed(graph, v);
      if (allowed.empty()) throw NoAllowedAction("shield allows no action at vertex " + std::to_string(v));
      const SchedulerAction a = policy.choose(graph, v, allowed);
      const Observation& obs = env.step(a);
      const double cost = obs.cost + (obs.hard_miss ? penalty : 0.0);
      const VertexId next = env.vertex();
      const auto allowed_next =
          graph.owner(next) == Owner::Scheduler ? shield.allowed(graph, next) : std::vector<SchedulerAction>{};
      policy.observe(v, a, cost, next, allowed_next, obs.hard_miss);
    }
    out.train_misses = env.hard_misses();
  }
  policy.freeze();
  SimEnv env(sg.graph, mix(cfg.seed, 3), opts);
  for (std::uint64_t t = 0; t < cfg.eval_steps && !env.in_sink(); ++t) {
    const VertexId v = env.vertex();
    const auto allowed = shield.allowed(graph, v);
    env.step(policy.choose(graph, v, allowed));
  }
  out.eval_misses = env.hard_misses();
  out.mean_cost = cfg.eval_steps ? env.total_cost() / static_cast<double>(cfg.eval_steps) : 0.0;
  out.table_size = policy.table().size();
  return out;
}

ScheduleRun run_mcts(const TaskSystem& sys, const MctsRunConfig& cfg) {
  const TaskSystem& model = cfg.model ? *cfg.model : sys;
  ShieldedGraph sg = shielded_graph(model, cfg.advice);
  MctsParams params = cfg.params;
  EnvOptions opts;
  if (cfg.advice == ShieldKind::None) {
    if (params.hard_penalty == 0.0) params.hard_penalty = default_penalty(model);
    opts.restart_on_miss = true;
  }
  auto env = cfg.model ? SimEnv(sys, mix(cfg.seed, 4), opts) : SimEnv(sg.graph, mix(cfg.seed, 4), opts);
  return run_mcts_schedule(env, sg.graph, *sg.shield, params, cfg.eval_steps, mix(cfg.seed, 5));
}

PolicyRun run_policy(const TaskSystem& sys, Policy& policy, ShieldKind shield, std::uint64_t steps, std::uint64_t seed,
                     std::size_t max_vertices) {
  ShieldedGraph sg = shielded_graph(sys, shield, max_vertices);
  SimEnv env(sg.graph, seed);
  for (std::uint64_t t = 0; t < steps && !env.in_sink(); ++t) {
    const VertexId v = env.vertex();
    const auto allowed = sg.shield->allowed(*sg.graph, v);
    env.step(policy.choose(*sg.graph, v, allowed));
  }
  return PolicyRun{steps ? env.total_cost() / static_cast<double>(steps) : 0.0, env.hard_misses()};
}

LearnSolveResult learn_and_solve(const TaskSystem& sys, const LearnConfig& cfg, std::uint64_t env_seed,
                                 std::size_t max_vertices) {
  const ExplicitMdp truth = build_explicit(sys, max_vertices);
  const SafeRegion true_region = safe_region(truth);
  LearnSolveResult out;
  out.optimal_gain = optimize_mean_cost(true_region).gain;

  SimEnv env(sys, env_seed);
  out.learned = cfg.mode == LearnMode::SoftOnly ? learn_soft_only(env, cfg) : learn_safe(env, true_region, cfg);

  const ExplicitMdp learned = build_explicit(out.learned.system, max_vertices);
  const SafeRegion learned_region = safe_region(learned);
  const ValueReport rep = optimize_mean_cost(learned_region);
  out.learned_gain = rep.gain;

  // Vertices the learned game never produced get the first safe action.
  MemorylessStrategy sigma = transfer_strategy(learned, rep.strategy, truth);
  for (VertexId v : true_region.vertices()) {
    if (truth.owner(v) == Owner::Scheduler && !sigma.defined(v)) sigma.set(v, true_region.safe_actions(v).front());
  }
  out.true_gain = evaluate_strategy(truth, sigma);
  return out;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Solve: return "solve";
    case Method::MctsUnsafe: return "mcts-unsafe";
    case Method::MctsMgs: return "mcts-mgs";
    case Method::MctsEdf: return "mcts-edf";
    case Method::QUnsafe: return "q-unsafe";
    case Method::QMgs: return "q-mgs";
    case Method::QEdf: return "q-edf";
    case Method::Edf: return "edf";
    case Method::RandomSafe: return "random-safe";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  for (Method m : {Method::Solve, Method::MctsUnsafe, Method::MctsMgs, Method::MctsEdf, Method::QUnsafe, Method::QMgs,
                   Method::QEdf, Method::Edf, Method::RandomSafe}) {
    if (to_string(m) == text) return m;
  }
  throw ParseError("unknown method '" + text + "'");
}

TaskSystem resolve_fixture(const std::string& name_or_path) {
  for (const auto& f : fixtures()) {
    if (f.name == name_or_path) return parse_task_system(f.json);
  }
  return load_task_system(name_or_path);
}

void BenchmarkSpec::validate() const {
  if (fixtures.empty()) throw ValidationFailed("benchmark lists no fixtures");
  if (methods.empty()) throw ValidationFailed("benchmark lists no methods");
  if (seeds.empty()) throw ValidationFailed("benchmark lists no seeds");
  for (const auto& f : fixtures) {
    const bool bundled =
        std::any_of(safesched::fixtures().begin(), safesched::fixtures().end(), [&](const Fixture& x) { return x.name == f; });
    if (!bundled && !std::filesystem::exists(f)) throw ValidationFailed("fixture '" + f + "' not found");
  }
  if (mcts.horizon == 0 || mcts.node_budget == 0) throw ValidationFailed("MCTS horizon and budget must be positive");
  if (!(q.alpha > 0.0 && q.alpha <= 1.0)) throw ValidationFailed("Q-learning rate must lie in (0,1]");
  if (!(q.discount >= 0.0 && q.discount <= 1.0)) throw ValidationFailed("discount must lie in [0,1]");
}

namespace {

void run_trial(const BenchmarkSpec& spec, BenchmarkRow& row) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const TaskSystem sys = resolve_fixture(row.fixture);
    switch (row.method) {
      case Method::Solve: {
        const SafeRegion region = safe_region(build_explicit(sys, spec.max_vertices));
        row.mean_cost = optimize_mean_cost(region).gain;
        break;
      }
      case Method::MctsUnsafe:
      case Method::MctsMgs:
      case Method::MctsEdf: {
        MctsRunConfig cfg;
        cfg.advice = row.method == Method::MctsMgs   ? ShieldKind::Mgs
                     : row.method == Method::MctsEdf ? ShieldKind::Edf
                                                     : ShieldKind::None;
        cfg.params = spec.mcts;
        cfg.eval_steps = spec.eval_steps;
        cfg.seed = row.seed;
        const ScheduleRun run = run_mcts(sys, cfg);
        row.mean_cost = run.mean_cost;
        row.violations = run.violations;
        break;
      }
      case Method::QUnsafe:
      case Method::QMgs:
      case Method::QEdf: {
        QLearnConfig cfg;
        cfg.shield = row.method == Method::QMgs   ? ShieldKind::Mgs
                     : row.method == Method::QEdf ? ShieldKind::Edf
                                                  : ShieldKind::None;
        cfg.params = spec.q;
        cfg.params.anneal_steps = spec.train_steps;
        cfg.train_steps = spec.train_steps;
        cfg.eval_steps = spec.eval_steps;
        cfg.seed = row.seed;
        const QLearnResult r = run_qlearning(sys, cfg);
        row.mean_cost = r.mean_cost;
        row.violations = r.eval_misses + r.train_misses;
        break;
      }
      case Method::Edf: {
        EdfPolicy policy;
        const PolicyRun r = run_policy(sys, policy, ShieldKind::None, spec.eval_steps, mix(row.seed, 7), spec.max_vertices);
        row.mean_cost = r.mean_cost;
        row.violations = r.violations;
        break;
      }
      case Method::RandomSafe: {
        RandomPolicy policy(mix(row.seed, 6));
        const PolicyRun r = run_policy(sys, policy, ShieldKind::Mgs, spec.eval_steps, mix(row.seed, 7), spec.max_vertices);
        row.mean_cost = r.mean_cost;
        row.violations = r.violations;
        break;
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkSpec& spec) {
  spec.validate();
  BenchmarkReport report;
  for (const auto& f : spec.fixtures) {
    for (Method m : spec.methods) {
      if (m == Method::Solve) {
        report.rows.push_back(BenchmarkRow{f, m, spec.seeds.front(), 0.0, 0, 0.0, {}});
        continue;
      }
      for (std::uint64_t s : spec.seeds) report.rows.push_back(BenchmarkRow{f, m, s, 0.0, 0, 0.0, {}});
    }
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < report.rows.size(); i = next++) run_trial(spec, report.rows[i]);
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(spec.workers, report.rows.size()));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

void write_benchmark_csv(const BenchmarkReport& report, std::ostream& out) {
  out << "fixture,method,seed,mean_cost,violations,wall_seconds,error\n";
  out << std::setprecision(6);
  for (const auto& r : report.rows) {
    out << csv_field(r.fixture) << ',' << to_string(r.method) << ',' << r.seed << ',' << r.mean_cost << ','
        << r.violations << ',' << r.wall_seconds << ',' << csv_field(r.error) << '\n';
  }
}

void write_benchmark_summary(const BenchmarkReport& report, std::ostream& out) {
  struct Acc {
    double cost = 0.0;
    std::uint64_t violations = 0;
    std::size_t ok = 0;
    std::size_t failed = 0;
  };
  std::vector<std::pair<std::string, Method>> order;
  std::map<std::pair<std::string, Method>, Acc> acc;
  for (const auto& r : report.rows) {
    auto key = std::make_pair(r.fixture, r.method);
    if (!acc.count(key)) order.push_back(key);
    Acc& a = acc[key];
    if (r.error.empty()) {
      a.cost += r.mean_cost;
      a.violations += r.violations;
      ++a.ok;
    } else {
      ++a.failed;
    }
  }
  out << "fixture,method,trials,failed,mean_cost,violations,published\n";
  out << std::setprecision(6);
  for (const auto& key : order) {
    const Acc& a = acc[key];
    std::string published;
    for (const auto& f : fixtures()) {
      if (f.name != key.first) continue;
      if (key.second == Method::Solve && f.reference_optimum) {
        std::ostringstream s;
        s << *f.reference_optimum;
        published = s.str();
      }
      for (const auto& [method, value] : f.reference_row) {
        if (method == to_string(key.second)) published = value;
      }
    }
    out << csv_field(key.first) << ',' << to_string(key.second) << ',' << a.ok << ',' << a.failed << ',';
    if (a.ok) {
      out << a.cost / static_cast<double>(a.ok);
    } else {
      out << "nan";
    }
    out << ',' << a.violations << ',' << published << '\n';
  }
}

}  // namespace safesched
