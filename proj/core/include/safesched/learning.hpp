#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "safesched/safety.hpp"
#include "safesched/sim_env.hpp"

namespace safesched {

enum class LearnMode { SoftOnly, GoodForSampling, GoodForEfficientSampling };

std::string to_string(LearnMode m);
LearnMode parse_learn_mode(const std::string& text);

struct LearnConfig {
  double eps = 0.1;
  double gamma = 0.1;
  /// Seeds the learner's own choices (the random safe walk).
  std::uint64_t seed = 0;
  LearnMode mode = LearnMode::SoftOnly;
  /// Ticks after which learning stops with partial coverage (0: no limit).
  std::uint64_t step_budget = 0;
  /// Replaces the per-distribution sample requirement (tests and demos).
  std::optional<std::uint64_t> samples_override;
};

/// Observed values of one distribution.
struct SampleSet {
  std::map<Tick, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(Tick v) {
    ++counts[v];
    ++total;
  }
};

struct LearnedModel {
  /// Empirical distributions on the known structure.
  TaskSystem system;
  std::vector<SampleSet> computation;
  std::vector<SampleSet> arrival;
  /// Per distribution, some domain element was never observed.
  std::vector<bool> computation_deficient;
  std::vector<bool> arrival_deficient;
  std::uint64_t required = 0;
  std::uint64_t steps = 0;
  std::uint64_t hard_misses = 0;
  /// Every distribution reached the required count.
  bool complete = false;

  /// Sample counts, steps and settings as JSON.
  std::string sidecar_json(const LearnConfig& cfg) const;
};

/// Round robin over soft tasks; the current task is always scheduled when
/// active. Throws HardTasksPresent.
LearnedModel learn_soft_only(SimEnv& env, const LearnConfig& cfg);

/// Safe learning with hard tasks: a hard phase under EDF restricted to safe
/// actions, then one phase per soft task driven by the certified sampling
/// condition. `region` may live on a different graph with the same structure.
/// Throws ConditionNotCertified, SafetyViolation.
LearnedModel learn_safe(SimEnv& env, const SafeRegion& region, const LearnConfig& cfg);

/// Builds the model from samples; distributions without samples fall back to
/// uniform over the declared domain and are flagged.
LearnedModel assemble_model(const TaskSystem& structure_source, std::vector<SampleSet> computation,
                            std::vector<SampleSet> arrival);

/// Lockstep map of a strategy solved on one game onto another game with the
/// same structure (vertices matched by action and outcome labels).
MemorylessStrategy transfer_strategy(const ExplicitMdp& from, const MemorylessStrategy& sigma, const ExplicitMdp& to);

}  // namespace safesched
