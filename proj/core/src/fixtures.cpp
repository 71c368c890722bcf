#include "safesched/fixtures.hpp"

#include "safesched/errors.hpp"

namespace safesched {

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = {
      {"example1", "one hard and one soft task, soft miss cost 10",
       R"({"tasks":[{"kind":"hard","computation":{"1":"1"},"deadline":2,"arrival":{"3":"1"}},{"kind":"soft","cost":"10","computation":{"1":"0.4","2":"0.6"},"deadline":2,"arrival":{"3":"1"}}]})",
       2.0, {}},
      {"example2", "hard task blocking the soft task at every release",
       R"({"tasks":[{"kind":"hard","computation":{"2":"1"},"deadline":2,"arrival":{"4":"1"}},{"kind":"soft","cost":"1","computation":{"1":"1/2","2":"1/2"},"deadline":2,"arrival":{"3":"1"}}]})",
       std::nullopt, {}},
      {"simple", "1 hard, 2 soft, Dirac arrivals",
       R"({"tasks":[{"kind":"hard","computation":{"1":"1"},"deadline":2,"arrival":{"3":"1"}},{"kind":"soft","cost":"1","computation":{"1":"1"},"deadline":3,"arrival":{"3":"1"}},{"kind":"soft","cost":"1","computation":{"1":"0.5","2":"0.5"},"deadline":5,"arrival":{"6":"1"}}]})",
       0.0, {{"mcts-unsafe", "0.72"}, {"mcts-mgs", "0"}, {"mcts-edf", "0"}, {"q-unsafe", "1.08"}, {"q-mgs", "0.1"}, {"q-edf", "0"}}},
      {"4S", "4 soft tasks",
       R"({"tasks":[{"kind":"soft","cost":"1.5","computation":{"1":"0.5","2":"0.5"},"deadline":2,"arrival":{"3":"0.5","4":"0.5"}},{"kind":"soft","cost":"1","computation":{"1":"0.7","2":"0.3"},"deadline":3,"arrival":{"3":"0.5","5":"0.5"}},{"kind":"soft","cost":"1.5","computation":{"1":"0.6","3":"0.4"},"deadline":3,"arrival":{"4":"0.5","6":"0.5"}},{"kind":"soft","cost":"1","computation":{"2":"0.5","3":"0.5"},"deadline":4,"arrival":{"4":"0.5","6":"0.5"}}]})",
       0.38, {{"mcts-unsafe", "0.52"}, {"q-unsafe", "0.56"}}},
      {"5S", "5 soft tasks",
       R"({"tasks":[{"kind":"soft","cost":"1.5","computation":{"1":"0.5","2":"0.5"},"deadline":2,"arrival":{"3":"0.5","4":"0.5"}},{"kind":"soft","cost":"1","computation":{"1":"0.7","2":"0.3"},"deadline":3,"arrival":{"3":"0.5","5":"0.5"}},{"kind":"soft","cost":"1.5","computation":{"1":"0.6","3":"0.4"},"deadline":3,"arrival":{"4":"0.5","6":"0.5"}},{"kind":"soft","cost":"1","computation":{"2":"0.5","3":"0.5"},"deadline":4,"arrival":{"4":"0.5","6":"0.5"}},{"kind":"soft","cost":"1","computation":{"1":"0.8","2":"0.2"},"deadline":2,"arrival":{"5":"0.5","7":"0.5"}}]})",
       std::nullopt, {{"mcts-unsafe", "0"}, {"q-unsafe", "0.13"}}},
      {"1H2S", "1 hard, 2 soft",
       R"({"tasks":[{"kind":"hard","computation":{"1":"1"},"deadline":2,"arrival":{"3":"0.5","4":"0.5"}},{"kind":"soft","cost":"0.6","computation":{"1":"0.5","2":"0.5"},"deadline":2,"arrival":{"3":"0.5","4":"0.5"}},{"kind":"soft","cost":"0.6","computation":{"1":"0.6","2":"0.4"},"deadline":3,"arrival":{"4":"0.5","5":"0.5"}}]})",
       0.07, {{"mcts-unsafe", "0.67"}, {"mcts-mgs", "0.14"}, {"mcts-edf", "0.28"}, {"q-unsafe", "0.24"}, {"q-mgs", "0.11"}, {"q-edf", "0.22"}}},
      {"1H3S", "1 hard, 3 soft",
       R"({"tasks":[{"kind":"hard","computation":{"1":"1"},"deadline":2,"arrival":{"3":"0.5","4":"0.5"}},{"kind":"soft","cost":"1.05","computation":{"1":"0.5","2":"0.5"},"deadline":2,"arrival":{"3":"0.5","4":"0.5"}},{"kind":"soft","cost":"1.05","computation":{"1":"0.6","2":"0.4"},"deadline":3,"arrival":{"4":"0.5","5":"0.5"}},{"kind":"soft","cost":"1.05","computation":{"1":"0.5","3":"0.5"},"deadline":3,"arrival":{"5":"0.5","6":"0.5"}}]})",
       0.28, {{"mcts-unsafe", "1.13"}, {"mcts-mgs", "0.45"}, {"mcts-edf", "0.49"}, {"q-unsafe", "inf"}, {"q-mgs", "0.47"}, {"q-edf", "0.47"}}},
      {"2H1S", "2 hard, 1 soft",
       R"({"tasks":[{"kind":"hard","computation":{"1":"1"},"deadline":3,"arrival":{"4":"0.5","5":"0.5"}},{"kind":"hard","computation":{"1":"1"},"deadline":3,"arrival":{"4":"0.5","5":"0.5"}},{"kind":"soft","cost":"1","computation":{"1":"0.5","2":"0.5"},"deadline":4,"arrival":{"4":"0.5","6":"0.5"}}]})",
       0.0, {{"mcts-unsafe", "0.92"}, {"mcts-mgs", "0"}, {"mcts-edf", "0.2"}, {"q-unsafe", "inf"}, {"q-mgs", "0.02"}, {"q-edf", "0.3"}}},
  };
  return all;
}

const Fixture& fixture(const std::string& name) {
  for (const auto& f : fixtures()) {
    if (f.name == name) return f;
  }
  throw ParameterOutOfRange("unknown fixture '" + name + "'");
}

TaskSystem load_fixture(const std::string& name) { return parse_task_system(fixture(name).json); }

}  // namespace safesched
