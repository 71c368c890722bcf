// Command-line front end: model building, synthesis, solving, learning,
// planning, simulation and the benchmark harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "safesched/errors.hpp"
#include "safesched/experiments.hpp"
#include "safesched/fixtures.hpp"
#include "safesched/pac.hpp"

using namespace safesched;
using nlohmann::json;

#ifndef SAFESCHED_COMMIT
#define SAFESCHED_COMMIT "unknown"
#endif

namespace {

enum Exit { kOk = 0, kOther = 1, kInvalid = 2, kUnschedulable = 3, kNotCertified = 4, kBudget = 5 };

struct Global {
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::size_t max_vertices = 2000000;
  std::string format = "json";
  bool late_miss_detection = false;
  std::string out;
};

MissDetection detection(const Global& g) { return g.late_miss_detection ? MissDetection::Late : MissDetection::Early; }

std::string provenance(const Global& g) {
  return "# seed " + std::to_string(g.seed) + " generator " + Rng::kAlgorithm + " commit " + SAFESCHED_COMMIT;
}

/// Loads a bundled fixture or file and rejects systems breaking the standing assumptions.
TaskSystem load_checked(const std::string& what) {
  TaskSystem sys = resolve_fixture(what);
  const auto violations = validate(sys);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) {
      if (!msg.empty()) msg += "; ";
      if (v.task) msg += "task " + std::to_string(*v.task + 1) + ": ";
      msg += to_string(v.kind) + ": " + v.message;
    }
    throw ValidationFailed(msg);
  }
  return sys;
}

/// Output sink: --out file when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ParseError("cannot write '" + path + "'");
    }
  }
  std::ostream& operator*() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit(const Global& g, const json& j) {
  Sink out(g.out);
  *out << j.dump(2) << '\n';
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> s;
  for (std::size_t i = 0; i < count; ++i) s.push_back(first + i);
  return s;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

int cmd_validate(const Global& g, const std::string& file) {
  const TaskSystem sys = resolve_fixture(file);
  const auto violations = validate(sys);
  json j;
  j["valid"] = violations.empty();
  j["tasks"] = sys.size();
  j["hard"] = sys.hard_indices().size();
  j["soft"] = sys.soft_indices().size();
  j["state_space_estimate"] = state_space_estimate(sys);
  json vs = json::array();
  for (const auto& v : violations) {
    json e;
    if (v.task) e["task"] = *v.task + 1;
    e["kind"] = to_string(v.kind);
    e["message"] = v.message;
    vs.push_back(e);
  }
  j["violations"] = vs;
  emit(g, j);
  return violations.empty() ? kOk : kInvalid;
}

int cmd_build(const Global& g, const std::string& file) {
  const TaskSystem sys = load_checked(file);
  const ExplicitMdp m = build_explicit(sys, g.max_vertices, detection(g));
  Sink out(g.out);
  if (g.format == "csv") {
    write_transitions(m, *out);
  } else if (g.format == "dot") {
    write_dot(m, *out);
  } else {
    json j;
    j["vertices"] = m.size();
    j["scheduler"] = m.scheduler_count();
    j["taskgen"] = m.taskgen_count();
    j["edges"] = m.edge_count();
    j["bottom"] = m.bottom().has_value();
    j["min_edge_probability"] = to_fraction_string(m.min_edge_probability());
    *out << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_export(const Global& g, const std::string& file, const std::string& states) {
  const TaskSystem sys = load_checked(file);
  const ExplicitMdp m = build_explicit(sys, g.max_vertices, detection(g));
  Sink out(g.out);
  if (g.format == "dot") {
    write_dot(m, *out);
  } else if (g.format == "csv") {
    write_transitions(m, *out);
  } else {
    json j;
    json vs = json::array();
    for (VertexId v = 0; v < m.size(); ++v) vs.push_back(m.render(v));
    j["states"] = vs;
    json es = json::array();
    for (VertexId v = 0; v < m.size(); ++v) {
      if (m.owner(v) == Owner::Scheduler) {
        for (const auto& e : m.actions(v)) es.push_back({{"src", v}, {"dst", e.target}, {"label", to_string(e.action)}});
      } else if (m.owner(v) == Owner::TaskGen) {
        for (const auto& e : m.outcomes(v)) {
          es.push_back({{"src", v},
                        {"dst", e.target},
                        {"label", e.labels.to_string()},
                        {"prob", to_fraction_string(e.probability)},
                        {"cost", to_fraction_string(e.cost)}});
        }
      }
    }
    j["transitions"] = es;
    *out << j.dump(1) << '\n';
  }
  if (!states.empty()) {
    std::ofstream s(states);
    if (!s) throw ParseError("cannot write '" + states + "'");
    write_state_table(m, s);
  }
  return kOk;
}

int cmd_synth(const Global& g, const std::string& file, bool full) {
  const TaskSystem sys = load_checked(file);
  const SafeRegion region = safe_region(build_explicit(sys, g.max_vertices, detection(g)));
  const ExplicitMdp& m = region.mdp();
  json j;
  j["scheduler_vertices"] = m.scheduler_count();
  j["safe_scheduler_vertices"] = region.scheduler_count();
  j["safe_edges"] = region.edge_count();
  json init = json::array();
  for (auto a : region.safe_actions(m.initial())) init.push_back(to_string(a));
  j["initial_safe_actions"] = init;
  j["single_mec"] = check_single_mec(region);
  if (full) j["mgs"] = json::parse(mgs(region).to_json());
  emit(g, j);
  return kOk;
}

int cmd_check_sampling(const Global& g, const std::string& file) {
  const TaskSystem sys = load_checked(file);
  const SafeRegion region = safe_region(build_explicit(sys, g.max_vertices, detection(g)));
  json j;
  json gfs = json::array();
  bool all = true;
  for (const auto& v : good_for_sampling(region)) {
    gfs.push_back({{"task", v.task + 1}, {"good", v.good}, {"entries", v.entry_count}});
    all = all && v.good;
  }
  j["good_for_sampling"] = all;
  j["sampling_tasks"] = gfs;
  const EfficientReport eff = good_for_efficient_sampling(region);
  j["good_for_efficient_sampling"] = eff.good;
  json tasks = json::array();
  for (const auto& t : eff.tasks) tasks.push_back({{"task", t.task + 1}, {"good", t.good}, {"safe_vertices", t.safe_count}});
  j["efficient_tasks"] = tasks;
  if (eff.good) {
    j["k_edges"] = eff.k_edges;
    j["k_ticks"] = eff.k_ticks;
  }
  emit(g, j);
  return kOk;
}

int cmd_solve(const Global& g, const std::string& file, const std::string& strategy_out, double discount) {
  const TaskSystem sys = load_checked(file);
  const SafeRegion region = safe_region(build_explicit(sys, g.max_vertices, detection(g)));
  SolverOptions opts;
  opts.tol = g.tol;
  const ValueReport rep = optimize_mean_cost(region, opts);
  json j;
  j["gain"] = rep.gain;
  j["iterations"] = rep.iterations;
  j["residual_span"] = rep.residual_span;
  j["safe_scheduler_vertices"] = region.scheduler_count();
  j["initial_action"] = to_string(rep.strategy.at(region.mdp().initial()));
  if (discount > 0.0) j["normalized_discounted"] = (1.0 - discount) * optimize_discounted(region, discount);
  if (!strategy_out.empty()) {
    std::ofstream s(strategy_out);
    if (!s) throw ParseError("cannot write '" + strategy_out + "'");
    s << rep.strategy.to_json() << '\n';
  }
  emit(g, j);
  return kOk;
}

int cmd_learn(const Global& g, const std::string& file, LearnConfig cfg, const std::string& model_out,
              const std::string& sidecar) {
  const TaskSystem sys = load_checked(file);
  cfg.seed = g.seed;
  SimEnv env(sys, g.seed);
  LearnedModel lm;
  if (cfg.mode == LearnMode::SoftOnly) {
    lm = learn_soft_only(env, cfg);
  } else {
    const SafeRegion region = safe_region(build_explicit(sys, g.max_vertices, detection(g)));
    lm = learn_safe(env, region, cfg);
  }
  if (!model_out.empty()) save_task_system(lm.system, model_out);
  if (!sidecar.empty()) {
    std::ofstream s(sidecar);
    s << lm.sidecar_json(cfg) << '\n';
  }
  json j = json::parse(lm.sidecar_json(cfg));
  j["provenance"] = provenance(g);
  j["model"] = json::parse(task_system_to_json(lm.system));
  emit(g, j);
  return lm.complete ? kOk : kBudget;
}

int cmd_bounds(const Global& g, const std::string& file, double eps, double gamma, double beta) {
  const TaskSystem sys = load_checked(file);
  json j;
  j["eps"] = eps;
  j["gamma"] = gamma;
  j["domain_width"] = sys.domain_width();
  if (!sys.has_hard_tasks()) {
    j["samples_per_distribution"] = samples_soft_only(sys, eps, gamma);
    j["steps_soft_only"] = steps_bound_soft_only(sys, eps, gamma);
  } else {
    j["samples_per_distribution"] = samples_all_tasks(sys, eps, gamma);
    j["phase_length"] = phase_length(sys.size(), sys.max_arrival(), sys.domain_width(), eps, gamma);
  }
  const Rational eps_q = parse_rational(std::to_string(eps));
  if (eps > 0.0 && eps < 1.0) j["eta"] = to_double(eta_from_eps(sys, eps_q));
  try {
    const SafeRegion region = safe_region(build_explicit(sys, g.max_vertices, detection(g)));
    const std::size_t n_v = region.mdp().scheduler_count();
    const Rational beta_q = parse_rational(std::to_string(beta));
    j["scheduler_vertices"] = n_v;
    j["beta"] = beta;
    const Rational pi_min = region.mdp().min_edge_probability();
    j["pi_min_edge"] = to_fraction_string(pi_min);
    j["eps_for_beta"] = to_double(eps_for_robustness(beta_q, pi_min, n_v));
    j["eta_threshold"] = to_double(eta_beta_threshold(beta_q, pi_min, n_v));
    const EfficientReport eff = good_for_efficient_sampling(region);
    if (eff.good && sys.has_hard_tasks()) {
      j["k_ticks"] = eff.k_ticks;
      j["steps_efficient"] = steps_bound_efficient(sys.size(), sys.soft_indices().size(), sys.max_arrival(),
                                                   sys.domain_width(), eff.k_ticks, eps, gamma);
    }
  } catch (const StateSpaceExceeded&) {
    j["scheduler_vertices"] = nullptr;
  }
  emit(g, j);
  return kOk;
}

int cmd_mcts(const Global& g, const std::string& file, MctsRunConfig cfg, std::size_t seeds, const std::string& model) {
  const TaskSystem sys = load_checked(file);
  if (!model.empty()) cfg.model = load_checked(model);
  Sink out(g.out);
  *out << provenance(g) << '\n' << "seed,mean_cost,violations\n";
  for (std::uint64_t s : seed_range(g.seed, seeds)) {
    cfg.seed = s;
    const ScheduleRun run = run_mcts(sys, cfg);
    *out << s << ',' << run.mean_cost << ',' << run.violations << '\n';
  }
  return kOk;
}

int cmd_qlearn(const Global& g, const std::string& file, QLearnConfig cfg, std::size_t seeds) {
  const TaskSystem sys = load_checked(file);
  cfg.params.anneal_steps = cfg.train_steps;
  Sink out(g.out);
  *out << provenance(g) << '\n' << "seed,mean_cost,train_misses,eval_misses,table_size\n";
  for (std::uint64_t s : seed_range(g.seed, seeds)) {
    cfg.seed = s;
    const QLearnResult r = run_qlearning(sys, cfg);
    *out << s << ',' << r.mean_cost << ',' << r.train_misses << ',' << r.eval_misses << ',' << r.table_size << '\n';
  }
  return kOk;
}

int cmd_simulate(const Global& g, const std::string& file, const std::string& policy_name, std::uint64_t steps,
                 const std::string& trace) {
  const TaskSystem sys = load_checked(file);
  EnvOptions opts;
  opts.record_trace = !trace.empty();
  std::optional<SafeRegion> region;
  std::shared_ptr<GameGraph> graph;
  std::unique_ptr<Policy> policy;
  std::unique_ptr<Shield> shield;
  if (policy_name == "edf") {
    graph = std::make_shared<GameGraph>(std::make_shared<GameModel>(sys));
    policy = std::make_unique<EdfPolicy>();
    shield = std::make_unique<NoShield>();
  } else if (policy_name == "random" || policy_name == "optimal") {
    region = safe_region(build_explicit(sys, g.max_vertices));
    graph = region->mdp().graph_ptr();
    shield = std::make_unique<MgsShield>(*region);
    if (policy_name == "random") {
      policy = std::make_unique<RandomPolicy>(g.seed + 1);
    } else {
      SolverOptions so;
      so.tol = g.tol;
      policy = std::make_unique<StrategyPolicy>(optimize_mean_cost(*region, so).strategy);
    }
  } else {
    throw ParseError("unknown policy '" + policy_name + "' (expected edf, random or optimal)");
  }
  SimEnv env(graph, g.seed, opts);
  for (std::uint64_t t = 0; t < steps && !env.in_sink(); ++t) {
    const VertexId v = env.vertex();
    env.step(policy->choose(*graph, v, shield->allowed(*graph, v)));
  }
  if (!trace.empty()) {
    std::ofstream s(trace);
    if (!s) throw ParseError("cannot write '" + trace + "'");
    write_trace(env, s);
  }
  json j;
  j["provenance"] = provenance(g);
  j["ticks"] = env.ticks();
  j["mean_cost"] = env.mean_cost();
  j["hard_misses"] = env.hard_misses();
  j["soft_misses"] = env.soft_misses();
  emit(g, j);
  return kOk;
}

int cmd_replay(const Global& g, const std::string& file, const std::string& trace, bool resimulate) {
  const TaskSystem sys = load_checked(file);
  std::ifstream in(trace);
  if (!in) throw ParseError("cannot open trace '" + trace + "'");
  std::optional<std::uint64_t> seed;
  if (resimulate) seed = g.seed;
  const ReplayResult r = replay_trace(sys, in, seed);
  json j;
  j["ok"] = r.ok;
  j["steps"] = r.steps;
  j["message"] = r.message;
  emit(g, j);
  return r.ok ? kOk : kOther;
}

int cmd_bench(const Global& g, BenchmarkSpec spec, const std::string& fixtures, const std::string& methods,
              std::size_t seeds, const std::string& summary) {
  spec.fixtures = split(fixtures);
  spec.methods.clear();
  for (const auto& m : split(methods)) spec.methods.push_back(parse_method(m));
  spec.seeds = seed_range(g.seed, seeds);
  spec.max_vertices = g.max_vertices;
  const BenchmarkReport report = run_benchmark(spec);
  {
    Sink out(g.out);
    *out << provenance(g) << '\n';
    write_benchmark_csv(report, *out);
  }
  std::ofstream s;
  std::ostream* sum = &std::cout;
  if (!summary.empty()) {
    s.open(summary);
    sum = &s;
  }
  *sum << provenance(g) << '\n';
  write_benchmark_summary(report, *sum);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe and optimal scheduling of hard and soft tasks"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--tol", g.tol, "Value iteration tolerance")->capture_default_str();
  app.add_option("--max-vertices", g.max_vertices, "Explicit state-space limit")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "dot"}))->capture_default_str();
  app.add_flag("--late-miss-detection", g.late_miss_detection, "Detect hard misses only at the deadline");
  app.add_option("-o,--out", g.out, "Output file (stdout when omitted)");

  std::string file;
  auto add_file = [&](CLI::App* sub) { sub->add_option("system", file, "Task-system JSON file or bundled fixture name")->required(); };

  auto* validate_cmd = app.add_subcommand("validate", "Check the standing assumptions");
  add_file(validate_cmd);

  auto* build_cmd = app.add_subcommand("build-mdp", "Build the explicit game and print its size");
  add_file(build_cmd);

  std::string states_path;
  auto* export_cmd = app.add_subcommand("export", "Write transitions (csv), Graphviz (dot) or both tables (json)");
  add_file(export_cmd);
  export_cmd->add_option("--states", states_path, "Also write the state table here");

  bool full = false;
  auto* synth_cmd = app.add_subcommand("synth-safe", "Solve the safety game");
  add_file(synth_cmd);
  synth_cmd->add_flag("--full", full, "Include the most general safe scheduler");

  auto* sampling_cmd = app.add_subcommand("check-sampling", "Good-for-sampling verdicts");
  add_file(sampling_cmd);

  std::string strategy_out;
  double discount = 0.0;
  auto* solve_cmd = app.add_subcommand("solve", "Optimal safe mean cost");
  add_file(solve_cmd);
  solve_cmd->add_option("--strategy-out", strategy_out, "Write the optimal strategy as JSON");
  solve_cmd->add_option("--discount", discount, "Also report the normalized discounted value");

  LearnConfig lcfg;
  std::string mode = "soft-only", model_out, sidecar;
  auto* learn_cmd = app.add_subcommand("learn", "PAC-learn the distributions from the simulator");
  add_file(learn_cmd);
  learn_cmd->add_option("--mode", mode, "soft-only, good-for-sampling or good-for-efficient-sampling")->capture_default_str();
  learn_cmd->add_option("--eps", lcfg.eps)->capture_default_str();
  learn_cmd->add_option("--gamma", lcfg.gamma)->capture_default_str();
  learn_cmd->add_option("--budget", lcfg.step_budget, "Tick budget (0: none)");
  learn_cmd->add_option("--model-out", model_out, "Write the learned system");
  learn_cmd->add_option("--sidecar", sidecar, "Write sample counts and settings");

  double beps = 0.1, bgamma = 0.1, beta = 0.5;
  auto* bounds_cmd = app.add_subcommand("bounds", "Sample and step bounds");
  add_file(bounds_cmd);
  bounds_cmd->add_option("--eps", beps)->capture_default_str();
  bounds_cmd->add_option("--gamma", bgamma)->capture_default_str();
  bounds_cmd->add_option("--beta", beta)->capture_default_str();

  MctsRunConfig mcfg;
  std::string advice = "mgs", mcts_model;
  std::size_t seeds = 1;
  auto* mcts_cmd = app.add_subcommand("mcts", "Receding-horizon planning in the simulator");
  add_file(mcts_cmd);
  mcts_cmd->add_option("--advice", advice)->check(CLI::IsMember({"mgs", "edf", "none"}))->capture_default_str();
  mcts_cmd->add_option("--horizon", mcfg.params.horizon)->capture_default_str();
  mcts_cmd->add_option("--budget", mcfg.params.node_budget)->capture_default_str();
  mcts_cmd->add_option("--rollouts", mcfg.params.init_rollouts)->capture_default_str();
  mcts_cmd->add_option("--uct-c", mcfg.params.uct_c)->capture_default_str();
  mcts_cmd->add_option("--eval-steps", mcfg.eval_steps)->capture_default_str();
  mcts_cmd->add_option("--seeds", seeds, "Number of consecutive seeds")->capture_default_str();
  mcts_cmd->add_option("--model", mcts_model, "Plan on this (learned) system instead of the true one");

  QLearnConfig qcfg;
  std::string shield = "mgs";
  double penalty = -1.0;
  auto* q_cmd = app.add_subcommand("qlearn", "Shielded tabular Q-learning");
  add_file(q_cmd);
  q_cmd->add_option("--shield", shield)->check(CLI::IsMember({"mgs", "edf", "none"}))->capture_default_str();
  q_cmd->add_option("--steps", qcfg.train_steps)->capture_default_str();
  q_cmd->add_option("--eval-steps", qcfg.eval_steps)->capture_default_str();
  q_cmd->add_option("--alpha", qcfg.params.alpha)->capture_default_str();
  q_cmd->add_option("--discount", qcfg.params.discount)->capture_default_str();
  q_cmd->add_option("--penalty", penalty, "Hard-miss charge for the unshielded learner");
  q_cmd->add_option("--seeds", seeds, "Number of consecutive seeds")->capture_default_str();

  std::string policy = "edf", trace;
  std::uint64_t steps = 1000;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a policy in the simulator");
  add_file(sim_cmd);
  sim_cmd->add_option("--policy", policy, "edf, random or optimal")->capture_default_str();
  sim_cmd->add_option("--steps", steps)->capture_default_str();
  sim_cmd->add_option("--trace", trace, "Write the trace here");

  std::string trace_in;
  bool resimulate = false;
  auto* replay_cmd = app.add_subcommand("replay", "Check a trace against the model");
  add_file(replay_cmd);
  replay_cmd->add_option("trace", trace_in)->required();
  replay_cmd->add_flag("--resimulate", resimulate, "Also re-run the simulator with --seed");

  BenchmarkSpec bspec;
  std::string bfixtures = "simple,1H2S,2H1S", bmethods = "solve,mcts-mgs,mcts-edf", summary;
  auto* bench_cmd = app.add_subcommand("bench", "Table of methods against fixtures");
  bench_cmd->add_option("--fixtures", bfixtures, "Comma-separated fixture names or files")->capture_default_str();
  bench_cmd->add_option("--methods", bmethods, "Comma-separated methods")->capture_default_str();
  bench_cmd->add_option("--seeds", seeds)->capture_default_str();
  bench_cmd->add_option("--workers", bspec.workers)->capture_default_str();
  bench_cmd->add_option("--horizon", bspec.mcts.horizon)->capture_default_str();
  bench_cmd->add_option("--budget", bspec.mcts.node_budget)->capture_default_str();
  bench_cmd->add_option("--rollouts", bspec.mcts.init_rollouts)->capture_default_str();
  bench_cmd->add_option("--train-steps", bspec.train_steps)->capture_default_str();
  bench_cmd->add_option("--eval-steps", bspec.eval_steps)->capture_default_str();
  bench_cmd->add_option("--summary", summary, "Summary CSV (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return cmd_validate(g, file);
    if (*build_cmd) return cmd_build(g, file);
    if (*export_cmd) return cmd_export(g, file, states_path);
    if (*synth_cmd) return cmd_synth(g, file, full);
    if (*sampling_cmd) return cmd_check_sampling(g, file);
    if (*solve_cmd) return cmd_solve(g, file, strategy_out, discount);
    if (*learn_cmd) {
      lcfg.mode = parse_learn_mode(mode);
      return cmd_learn(g, file, lcfg, model_out, sidecar);
    }
    if (*bounds_cmd) return cmd_bounds(g, file, beps, bgamma, beta);
    if (*mcts_cmd) {
      mcfg.advice = parse_shield_kind(advice);
      return cmd_mcts(g, file, mcfg, seeds, mcts_model);
    }
    if (*q_cmd) {
      qcfg.shield = parse_shield_kind(shield);
      if (penalty >= 0.0) qcfg.penalty = penalty;
      return cmd_qlearn(g, file, qcfg, seeds);
    }
    if (*sim_cmd) return cmd_simulate(g, file, policy, steps, trace);
    if (*replay_cmd) return cmd_replay(g, file, trace_in, resimulate);
    if (*bench_cmd) return cmd_bench(g, bspec, bfixtures, bmethods, seeds, summary);
  } catch (const ValidationFailed& e) {
    std::cerr << "invalid task system: " << e.what() << '\n';
    return kInvalid;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const InvalidDistribution& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const Unschedulable& e) {
    std::cerr << "unschedulable: " << e.what() << '\n';
    return kUnschedulable;
  } catch (const ConditionNotCertified& e) {
    std::cerr << "not certified: " << e.what() << '\n';
    return kNotCertified;
  } catch (const StateSpaceExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOk;
}
