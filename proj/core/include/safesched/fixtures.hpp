#pragma once

#include <optional>
#include <string>
#include <vector>

#include "safesched/task_model.hpp"

namespace safesched {

/// A bundled task system.
struct Fixture {
  std::string name;
  std::string description;
  std::string json;
  /// Published optimal mean cost, where one exists.
  std::optional<double> reference_optimum;
  /// Published reference values for the MCTS and tabular rows, keyed by method.
  std::vector<std::pair<std::string, std::string>> reference_row;
};

const std::vector<Fixture>& fixtures();

/// Throws ParameterOutOfRange for an unknown name.
const Fixture& fixture(const std::string& name);
TaskSystem load_fixture(const std::string& name);

}  // namespace safesched
