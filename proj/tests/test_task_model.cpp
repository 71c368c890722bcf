#include <map>
#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "safesched/errors.hpp"
#include "safesched/fixtures.hpp"
#include "safesched/task_model.hpp"

using namespace safesched;

namespace {

Task make(TaskKind kind, FiniteDistribution c, Tick d, FiniteDistribution a, Rational cost = 0) {
  return Task{std::move(c), d, std::move(a), kind, std::move(cost)};
}

FiniteDistribution two(Tick x, const char* px, Tick y, const char* py) {
  return FiniteDistribution(std::map<Tick, Rational>{{x, parse_rational(px)}, {y, parse_rational(py)}});
}

std::vector<ViolationKind> kinds(const TaskSystem& sys) {
  std::vector<ViolationKind> out;
  for (const auto& v : validate(sys)) out.push_back(v.kind);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Validate, ExampleOneIsClean) { EXPECT_TRUE(validate(load_fixture("example1")).empty()); }

TEST(Validate, Violations) {
  using D = FiniteDistribution;
  EXPECT_EQ(kinds(TaskSystem({make(TaskKind::Soft, D::dirac(1), 2, D::dirac(1), 1)})),
            std::vector{ViolationKind::DeadlineExceedsMinArrival});
  EXPECT_EQ(kinds(TaskSystem({make(TaskKind::Soft, D::dirac(3), 2, D::dirac(3), 1)})),
            std::vector{ViolationKind::ComputationExceedsDeadline});
  EXPECT_EQ(kinds(TaskSystem({make(TaskKind::Hard, D::dirac(1), 2, D::dirac(3), 5)})),
            std::vector{ViolationKind::HardTaskWithCost});
  EXPECT_EQ(kinds(TaskSystem({make(TaskKind::Soft, D::dirac(0), 2, D::dirac(3), 1)})),
            std::vector{ViolationKind::ZeroComputationTime});
  EXPECT_EQ(kinds(TaskSystem({make(TaskKind::Soft, D::dirac(1), 2, D::dirac(3), -1)})),
            std::vector{ViolationKind::NegativeCost});
  EXPECT_EQ(kinds(TaskSystem{}), std::vector{ViolationKind::EmptySystem});
}

TEST(Structure, Examples) {
  const auto s1 = structure(load_fixture("example1"));
  ASSERT_EQ(s1.tasks.size(), 2u);
  EXPECT_EQ(s1.tasks[0], (TaskStructure{{1}, 2, {3}, TaskKind::Hard}));
  EXPECT_EQ(s1.tasks[1], (TaskStructure{{1, 2}, 2, {3}, TaskKind::Soft}));

  const auto s2 = structure(load_fixture("example2"));
  EXPECT_EQ(s2.tasks[0], (TaskStructure{{2}, 2, {4}, TaskKind::Hard}));
  EXPECT_EQ(s2.tasks[1], (TaskStructure{{1, 2}, 2, {3}, TaskKind::Soft}));

  const auto s3 = structure(load_fixture("simple"));
  for (const auto& t : s3.tasks) EXPECT_EQ(t.arrival_domain.size(), 1u);
  EXPECT_EQ(s3.tasks[2].computation_domain, (std::vector<Tick>{1, 2}));
}

TEST(EpsilonClose, Systems) {
  const auto a = load_fixture("example1");
  EXPECT_TRUE(systems_epsilon_close(a, a, parse_rational("0.01")));
  auto tasks = a.tasks();
  tasks[1].computation = two(1, "0.45", 2, "0.55");
  const TaskSystem b(tasks);
  EXPECT_TRUE(systems_epsilon_close(a, b, parse_rational("0.05")));
  EXPECT_FALSE(systems_epsilon_close(a, b, parse_rational("0.04")));
  tasks[1].computation = FiniteDistribution::dirac(1);
  EXPECT_FALSE(systems_epsilon_close(a, TaskSystem(tasks), parse_rational("0.9")));
}

TEST(Serialization, ExampleOneFileRoundTrip) {
  const std::string text = read_file(std::string(SAFESCHED_FIXTURE_DIR) + "/example1.json");
  const auto sys = parse_task_system(text);
  ASSERT_EQ(sys.size(), 2u);
  EXPECT_TRUE(sys.task(0).is_hard());
  EXPECT_EQ(sys.task(1).miss_cost, 10);
  EXPECT_EQ(sys.task(1).computation.probability(1), Rational(2, 5));
  const auto again = parse_task_system(task_system_to_json(sys));
  EXPECT_EQ(structure(again), structure(sys));
  EXPECT_TRUE(systems_epsilon_close(again, sys, 0));
  EXPECT_EQ(again.task(1).miss_cost, 10);
}

TEST(Serialization, SaveAndLoad) {
  const auto sys = load_fixture("1H2S");
  const std::string path = testing::TempDir() + "/sys.json";
  save_task_system(sys, path);
  const auto back = load_task_system(path);
  EXPECT_TRUE(systems_epsilon_close(sys, back, 0));
  std::remove(path.c_str());
}

TEST(Serialization, Errors) {
  EXPECT_THROW(parse_task_system("{"), ParseError);
  EXPECT_THROW(parse_task_system(R"({"tasks":[{"kind":"odd","computation":{"1":"1"},"deadline":2,"arrival":{"3":"1"}}]})"),
               ParseError);
  try {
    parse_task_system(R"({"tasks":[{"kind":"soft","computation":{"1":"0.5"},"deadline":2,"arrival":{"3":"1"}}]})");
    ADD_FAILURE() << "mass 1/2 accepted";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("sum to 1/2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_task_system("/nonexistent/file.json"), Error);
  // An empty task list parses; validation reports it.
  EXPECT_EQ(kinds(parse_task_system(R"({"tasks":[]})")), std::vector{ViolationKind::EmptySystem});
}

TEST(Serialization, Distributions) {
  const auto d = parse_distribution(R"({"1":"2/5","2":"0.6"})");
  EXPECT_EQ(d, two(1, "0.4", 2, "0.6"));
  EXPECT_EQ(parse_distribution(distribution_to_json(d)), d);
}

TEST(Fixtures, FilesMatchRegistry) {
  for (const auto& f : fixtures()) {
    const auto from_file = parse_task_system(read_file(std::string(SAFESCHED_FIXTURE_DIR) + "/" + f.name + ".json"));
    EXPECT_TRUE(systems_epsilon_close(from_file, load_fixture(f.name), 0)) << f.name;
    EXPECT_TRUE(validate(from_file).empty()) << f.name;
  }
  EXPECT_THROW(fixture("nope"), ParameterOutOfRange);
}

TEST(TaskSystem, Aggregates) {
  const auto sys = load_fixture("example1");
  EXPECT_EQ(sys.hard_indices(), std::vector<std::size_t>{0});
  EXPECT_EQ(sys.soft_indices(), std::vector<std::size_t>{1});
  EXPECT_EQ(sys.max_arrival(), 3u);
  EXPECT_EQ(sys.max_computation(), 2u);
  EXPECT_EQ(sys.domain_width(), 2u);
  EXPECT_EQ(sys.min_probability(), Rational(2, 5));
  EXPECT_EQ(sys.max_probability(), 1);
  EXPECT_EQ(sys.max_soft_cost(), 10);
}
