#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "safesched/learning.hpp"
#include "safesched/mcts.hpp"
#include "safesched/mean_cost.hpp"
#include "safesched/policies.hpp"

namespace safesched {

struct QLearnConfig {
  ShieldKind shield = ShieldKind::Mgs;
  QParams params;
  std::uint64_t train_steps = 10000;
  std::uint64_t eval_steps = 600;
  /// Charged on a hard miss by the unshielded learner; default 1000 x max soft cost.
  std::optional<double> penalty;
  std::uint64_t seed = 0;
};

struct QLearnResult {
  double mean_cost = 0.0;
  std::uint64_t train_misses = 0;
  std::uint64_t eval_misses = 0;
  std::size_t table_size = 0;
};

/// Trains a tabular learner in the true environment, then evaluates the greedy
/// policy in a fresh one. Unshielded runs restart after a miss. Throws
/// StateSpaceExceeded when the size estimate is above 1e6, Unschedulable for
/// the MGS shield on an unschedulable system.
QLearnResult run_qlearning(const TaskSystem& sys, const QLearnConfig& cfg);

struct MctsRunConfig {
  ShieldKind advice = ShieldKind::Mgs;
  MctsParams params;
  std::uint64_t eval_steps = 600;
  std::uint64_t seed = 0;
  /// Planning model; the true system when absent.
  std::optional<TaskSystem> model;
};

/// One evaluation of receding-horizon planning. Unadvised runs charge
/// 1000 x max soft cost on the sink and restart after a miss.
ScheduleRun run_mcts(const TaskSystem& sys, const MctsRunConfig& cfg);

/// Mean cost and misses of a fixed policy over `steps` ticks.
struct PolicyRun {
  double mean_cost = 0.0;
  std::uint64_t violations = 0;
};
/// The shield is built over the environment's own graph.
PolicyRun run_policy(const TaskSystem& sys, Policy& policy, ShieldKind shield, std::uint64_t steps, std::uint64_t seed,
                     std::size_t max_vertices = 2000000);

/// Learn, solve on the learned model, and evaluate that strategy on the true game.
struct LearnSolveResult {
  LearnedModel learned;
  double learned_gain = 0.0;
  double true_gain = 0.0;
  double optimal_gain = 0.0;
};
LearnSolveResult learn_and_solve(const TaskSystem& sys, const LearnConfig& cfg, std::uint64_t env_seed,
                                 std::size_t max_vertices = 2000000);

enum class Method { Solve, MctsUnsafe, MctsMgs, MctsEdf, QUnsafe, QMgs, QEdf, Edf, RandomSafe };
std::string to_string(Method m);
Method parse_method(const std::string& text);

struct BenchmarkSpec {
  /// Bundled fixture names or task-system file paths.
  std::vector<std::string> fixtures;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds{0};
  MctsParams mcts;
  QParams q;
  std::uint64_t train_steps = 10000;
  std::uint64_t eval_steps = 600;
  std::size_t max_vertices = 2000000;
  std::size_t workers = 1;

  /// Throws ValidationFailed for an empty or unknown fixture, or no methods.
  void validate() const;
};

struct BenchmarkRow {
  std::string fixture;
  Method method = Method::Solve;
  std::uint64_t seed = 0;
  double mean_cost = 0.0;
  std::uint64_t violations = 0;
  double wall_seconds = 0.0;
  std::string error;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
};

/// Runs every (fixture, method, seed) trial on a worker pool. Solve runs once
/// per fixture. Errors are recorded per row.
BenchmarkReport run_benchmark(const BenchmarkSpec& spec);

void write_benchmark_csv(const BenchmarkReport& report, std::ostream& out);
/// Per (fixture, method): mean cost, total violations, trials, and the
/// published value where there is one.
void write_benchmark_summary(const BenchmarkReport& report, std::ostream& out);

TaskSystem resolve_fixture(const std::string& name_or_path);

}  // namespace safesched
