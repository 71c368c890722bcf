#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "safesched/rational.hpp"

namespace safesched {

/// Time in CPU ticks.
using Tick = std::uint32_t;

/// Exact probability mass function over a finite set of tick values.
///
/// Only the support is stored: every probability is strictly positive and the
/// entries are kept sorted by value, so structurally equal distributions
/// compare and hash identically. The masses always sum to exactly one.
class FiniteDistribution {
 public:
  using Entry = std::pair<Tick, Rational>;

  /// Builds from a value->mass map. Zero masses are dropped; negative masses or
  /// a total different from one throw InvalidDistribution.
  explicit FiniteDistribution(const std::map<Tick, Rational>& mass);

  static FiniteDistribution dirac(Tick value);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  std::vector<Tick> support() const;

  /// Mass at `value`, zero outside the support.
  Rational probability(Tick value) const;

  bool is_dirac() const noexcept { return entries_.size() == 1; }

  Tick min_value() const noexcept { return entries_.front().first; }
  Tick max_value() const noexcept { return entries_.back().first; }

  Rational min_probability() const;
  Rational max_probability() const;

  /// Shifts every support point down by one tick, flooring at zero.
  FiniteDistribution decrement() const;

  /// Removes the mass at zero and renormalises. Throws DegenerateCondition if
  /// all the mass sits at zero.
  FiniteDistribution condition_nonzero() const;

  std::size_t hash() const noexcept { return hash_; }

  /// Renders as "3" for a Dirac and "[1:0.4,2:0.6]" otherwise.
  std::string to_string() const;

  friend bool operator==(const FiniteDistribution& a, const FiniteDistribution& b) {
    return a.hash_ == b.hash_ && a.entries_ == b.entries_;
  }

 private:
  struct Sorted {};
  FiniteDistribution(Sorted, std::vector<Entry> sorted_entries);
  void rehash();

  std::vector<Entry> entries_;
  std::size_t hash_ = 0;
};

std::pair<Tick, Tick> support_min_max(const FiniteDistribution& d);

/// True iff both supports coincide and every pointwise gap is at most eps.
bool epsilon_close(const FiniteDistribution& p, const FiniteDistribution& q, const Rational& eps);

/// Relative-frequency estimate of a distribution from samples.
struct EmpiricalEstimate {
  /// Counts per observed value.
  std::map<Tick, std::uint64_t> counts;
  std::uint64_t total = 0;
  /// Declared domain elements that never occurred in the sample.
  std::vector<Tick> unobserved;
  /// Observed values that lie outside the declared domain.
  std::vector<Tick> outside_domain;

  bool deficient() const noexcept { return !unobserved.empty(); }
  /// The relative frequencies over the observed values.
  FiniteDistribution distribution() const;
  /// Relative frequency of `value` (zero when unobserved).
  Rational frequency(Tick value) const;
};

/// Throws EmptySample when `samples` is empty.
EmpiricalEstimate empirical(std::span<const Tick> samples, const std::set<Tick>& domain);

/// Total number of i.i.d. samples that make the empirical estimate of a
/// distribution with r domain elements eps-close with probability >= 1-gamma:
/// r * ceil((ln 2r - ln gamma) / (2 eps^2)).
/// Throws ParameterOutOfRange unless 0<eps<1, 0<gamma<1 and r>=1.
std::uint64_t hoeffding_samples(std::uint64_t r, double eps, double gamma);

/// Per-element part of hoeffding_samples: ceil((ln(log_numerator) - ln gamma) / (2 eps^2)),
/// bumped by one when the unrounded value lands within 1e-9 of an integer.
std::uint64_t hoeffding_ceiling(double log_numerator, double eps, double gamma);

}  // namespace safesched

template <>
struct std::hash<safesched::FiniteDistribution> {
  std::size_t operator()(const safesched::FiniteDistribution& d) const noexcept { return d.hash(); }
};
