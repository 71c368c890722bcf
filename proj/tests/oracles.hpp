#pragma once

// Reference computations used to check the library: brute-force strategy
// enumeration, a dense Markov-chain evaluator, per-label probability formulas
// and a chi-square check.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "safesched/game_graph.hpp"
#include "safesched/safety.hpp"

namespace oracle {

using namespace safesched;

/// Gain of the chain a memoryless strategy induces on `m`, from the initial
/// vertex. Dense long-double elimination over reachable Scheduler vertices,
/// recurrent classes found by SCC decomposition.
long double chain_gain(const ExplicitMdp& m, const MemorylessStrategy& sigma);

struct Enumeration {
  long double min_gain = 0.0L;
  MemorylessStrategy argmin;
  std::uint64_t strategies = 0;
  bool complete = false;
};

/// Minimum gain over every memoryless deterministic strategy choosing safe
/// actions, enumerating only vertices reachable under the partial choice.
/// Stops (complete = false) after `cap` strategies.
Enumeration enumerate_min_gain(const SafeRegion& region, std::uint64_t cap = 2000000);

/// Independent TaskGen probability of a per-task label at a vertex: fin
/// c0(1-a0), sub c0 a0, kill (1-c0) a0, eps (1-c0)(1-a0), with c0 = 1 for no job.
Rational label_probability(const GameModel& model, const TaskState& s, JobEvent e);

/// Pearson statistic against expected probabilities; passes when the
/// chi-square upper tail is at least that of a 3 sigma normal deviation.
struct ChiSquare {
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t df = 0;
  bool pass = false;
};
ChiSquare chi_square(const std::vector<std::uint64_t>& counts, const std::vector<double>& probs);

/// Checks the drawn excerpt of the Example 1 game (vertices by rendering,
/// edges by label, probability and cost). Returns one line per mismatch.
std::vector<std::string> example_one_excerpt_mismatches(const ExplicitMdp& m);

/// Least attractor by the naive fixpoint: repeat full passes until stable.
std::vector<bool> naive_attractor(const ExplicitMdp& m, const std::vector<bool>& bad);

}  // namespace oracle
