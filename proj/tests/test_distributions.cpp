#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "safesched/distributions.hpp"
#include "safesched/errors.hpp"
#include "safesched/rng.hpp"

using namespace safesched;

namespace {

Rational q(const char* s) { return parse_rational(s); }

FiniteDistribution dist(std::initializer_list<std::pair<Tick, const char*>> entries) {
  std::map<Tick, Rational> m;
  for (const auto& [k, v] : entries) m[k] = q(v);
  return FiniteDistribution(m);
}

}  // namespace

TEST(Rational, ParsesDecimalsAndFractions) {
  EXPECT_EQ(q("0.4"), Rational(2, 5));
  EXPECT_EQ(q("2/5"), Rational(2, 5));
  EXPECT_EQ(q("3"), Rational(3));
  EXPECT_EQ(q("1e-2"), Rational(1, 100));
  EXPECT_EQ(q("-0.5"), Rational(-1, 2));
  EXPECT_THROW(q(""), ParseError);
  EXPECT_THROW(q("1/0"), ParseError);
  EXPECT_THROW(q("a.b"), ParseError);
}

TEST(Rational, LeadingZerosAreDecimal) {
  // Leading zeros must not switch the digit parser to octal.
  EXPECT_EQ(q("0.08"), Rational(2, 25));
  EXPECT_EQ(q("0.8"), Rational(4, 5));
  EXPECT_EQ(q("010/3"), Rational(10, 3));
  EXPECT_EQ(q("09"), Rational(9));
}

TEST(Rational, DecimalRendering) {
  EXPECT_EQ(to_decimal_string(Rational(2, 5)), "0.4");
  EXPECT_EQ(to_decimal_string(Rational(1, 3)), "1/3");
  EXPECT_EQ(to_decimal_string(Rational(-1, 20)), "-0.05");
}

TEST(FiniteDistribution, SupportMinMax) {
  EXPECT_EQ(support_min_max(dist({{1, "0.4"}, {2, "0.6"}})), std::make_pair(Tick{1}, Tick{2}));
  EXPECT_EQ(support_min_max(FiniteDistribution::dirac(3)), std::make_pair(Tick{3}, Tick{3}));
  EXPECT_EQ(support_min_max(dist({{1, "0.5"}, {4, "0.1"}, {5, "0.4"}})), std::make_pair(Tick{1}, Tick{5}));
}

TEST(FiniteDistribution, RejectsBadMass) {
  EXPECT_THROW(dist({{1, "0.5"}, {2, "0.6"}}), InvalidDistribution);
  EXPECT_THROW(dist({{1, "-0.5"}, {2, "1.5"}}), InvalidDistribution);
  EXPECT_THROW(dist({}), InvalidDistribution);
  const auto d = dist({{1, "0"}, {2, "1"}});
  EXPECT_EQ(d.support_size(), 1u);
}

TEST(FiniteDistribution, Decrement) {
  EXPECT_EQ(dist({{1, "0.5"}, {4, "0.1"}, {5, "0.4"}}).decrement(), dist({{0, "0.5"}, {3, "0.1"}, {4, "0.4"}}));
  EXPECT_EQ(FiniteDistribution::dirac(3).decrement(), FiniteDistribution::dirac(2));
  EXPECT_EQ(FiniteDistribution::dirac(0).decrement(), FiniteDistribution::dirac(0));
  EXPECT_EQ(dist({{0, "0.5"}, {1, "0.5"}}).decrement(), FiniteDistribution::dirac(0));
}

TEST(FiniteDistribution, ConditionMatchesRatioOracle) {
  const auto d = dist({{0, "0.5"}, {3, "0.1"}, {4, "0.4"}});
  const auto c = d.condition_nonzero();
  // d(k) / (1 - d(0)), computed independently.
  for (Tick k : {3u, 4u}) EXPECT_EQ(c.probability(k), d.probability(k) / (1 - d.probability(0)));
  EXPECT_EQ(c, dist({{3, "0.2"}, {4, "0.8"}}));
  EXPECT_EQ(dist({{0, "0.4"}, {1, "0.6"}}).condition_nonzero(), FiniteDistribution::dirac(1));
  EXPECT_EQ(FiniteDistribution::dirac(2).condition_nonzero(), FiniteDistribution::dirac(2));
  EXPECT_THROW(FiniteDistribution::dirac(0).condition_nonzero(), DegenerateCondition);
}

TEST(FiniteDistribution, EpsilonClose) {
  const auto p = dist({{1, "0.4"}, {2, "0.6"}});
  EXPECT_TRUE(epsilon_close(p, dist({{1, "0.45"}, {2, "0.55"}}), q("0.05")));
  EXPECT_FALSE(epsilon_close(p, dist({{1, "0.45"}, {2, "0.55"}}), q("0.04")));
  EXPECT_FALSE(epsilon_close(p, FiniteDistribution::dirac(1), q("0.5")));
  EXPECT_TRUE(epsilon_close(p, p, q("0.01")));
}

TEST(FiniteDistribution, Rendering) {
  EXPECT_EQ(FiniteDistribution::dirac(3).to_string(), "3");
  EXPECT_EQ(dist({{1, "0.4"}, {2, "0.6"}}).to_string(), "[1:0.4,2:0.6]");
}

TEST(Empirical, Counting) {
  std::vector<Tick> a{1, 1, 2, 1};
  auto e = empirical(a, {1, 2});
  EXPECT_EQ(e.distribution(), dist({{1, "3/4"}, {2, "1/4"}}));
  EXPECT_FALSE(e.deficient());

  std::vector<Tick> b{3, 3, 3};
  EXPECT_EQ(empirical(b, {3}).distribution(), FiniteDistribution::dirac(3));

  std::vector<Tick> c{1, 2, 1, 2};
  auto f = empirical(c, {1, 2, 4});
  EXPECT_EQ(f.distribution(), dist({{1, "1/2"}, {2, "1/2"}}));
  EXPECT_TRUE(f.deficient());
  EXPECT_EQ(f.unobserved, std::vector<Tick>{4});
  EXPECT_EQ(f.frequency(4), 0);

  std::vector<Tick> none;
  EXPECT_THROW(empirical(none, {1}), EmptySample);
}

namespace {

std::uint64_t hoeffding_oracle(std::uint64_t r, long double eps, long double gamma) {
  const long double per = (std::log(2.0L * r) - std::log(gamma)) / (2.0L * eps * eps);
  return r * static_cast<std::uint64_t>(std::ceil(per));
}

}  // namespace

TEST(Hoeffding, Examples) {
  EXPECT_EQ(hoeffding_samples(2, 0.1, 0.05), 440u);
  EXPECT_EQ(hoeffding_samples(1, 0.1, 0.05), 185u);
  EXPECT_EQ(hoeffding_samples(2, 0.5, 0.5), 10u);
  for (std::uint64_t r : {1u, 2u, 3u, 7u}) {
    for (double eps : {0.05, 0.1, 0.3}) {
      for (double g : {0.01, 0.1, 0.4}) EXPECT_EQ(hoeffding_samples(r, eps, g), hoeffding_oracle(r, eps, g));
    }
  }
  EXPECT_THROW(hoeffding_samples(0, 0.1, 0.1), ParameterOutOfRange);
  EXPECT_THROW(hoeffding_samples(2, 0.0, 0.1), ParameterOutOfRange);
  EXPECT_THROW(hoeffding_samples(2, 0.1, 1.0), ParameterOutOfRange);
}

TEST(Hoeffding, EmpiricalConvergence) {
  const auto d = dist({{1, "0.4"}, {2, "0.6"}});
  const double eps = 0.1, gamma = 0.1;
  const auto n = hoeffding_samples(2, eps, gamma);
  int close = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Rng rng(1000 + t);
    std::vector<Tick> s;
    for (std::uint64_t i = 0; i < n; ++i) s.push_back(rng.uniform() < 0.4 ? 1 : 2);
    close += epsilon_close(d, empirical(s, {1, 2}).distribution(), q("0.1"));
  }
  EXPECT_GE(close, static_cast<int>(0.85 * trials));
}

TEST(Rng, SplitMixGolden) {
  // Reference outputs of SplitMix64 seeded with 0.
  Rng r(0);
  EXPECT_EQ(r.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(r.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(r.next(), 0x06c45d188009454fULL);
}

TEST(Rng, UniformInRange) {
  Rng r(5);
  std::vector<std::uint64_t> counts(4, 0);
  for (int i = 0; i < 40000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++counts[r.below(4)];
  }
  EXPECT_TRUE(oracle::chi_square(counts, {0.25, 0.25, 0.25, 0.25}).pass);
}
