#include "safesched/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "safesched/errors.hpp"

namespace safesched {

FiniteDistribution::FiniteDistribution(const std::map<Tick, Rational>& mass) {
  Rational total = 0;
  for (const auto& [value, p] : mass) {
    if (sgn(p) < 0) throw InvalidDistribution("negative probability at " + std::to_string(value));
    if (sgn(p) == 0) continue;
    entries_.emplace_back(value, p);
    total += p;
  }
  if (entries_.empty()) throw InvalidDistribution("distribution has empty support");
  if (total != 1)
    throw InvalidDistribution("probabilities sum to " + to_fraction_string(total) + ", not 1");
  rehash();
}

FiniteDistribution::FiniteDistribution(Sorted, std::vector<Entry> sorted_entries)
    : entries_(std::move(sorted_entries)) {
  rehash();
}

FiniteDistribution FiniteDistribution::dirac(Tick value) {
  return FiniteDistribution(Sorted{}, std::vector<Entry>{{value, Rational(1)}});
}

void FiniteDistribution::rehash() {
  std::size_t h = entries_.size();
  for (const auto& [value, p] : entries_) {
    h ^= std::hash<Tick>{}(value) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= hash_value(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  hash_ = h;
}

std::vector<Tick> FiniteDistribution::support() const {
  std::vector<Tick> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

Rational FiniteDistribution::probability(Tick value) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), value,
                             [](const Entry& e, Tick v) { return e.first < v; });
  if (it == entries_.end() || it->first != value) return 0;
  return it->second;
}

Rational FiniteDistribution::min_probability() const {
  Rational best = entries_.front().second;
  for (const auto& e : entries_) best = std::min(best, e.second);
  return best;
}

Rational FiniteDistribution::max_probability() const {
  Rational best = entries_.front().second;
  for (const auto& e : entries_) best = std::max(best, e.second);
  return best;
}

FiniteDistribution FiniteDistribution::decrement() const {
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& [value, p] : entries_) {
    Tick shifted = value == 0 ? 0 : value - 1;
    if (!out.empty() && out.back().first == shifted)
      out.back().second += p;
    else
      out.emplace_back(shifted, p);
  }
  return FiniteDistribution(Sorted{}, std::move(out));
}

FiniteDistribution FiniteDistribution::condition_nonzero() const {
  if (entries_.front().first != 0) return *this;
  const Rational& at_zero = entries_.front().second;
  if (at_zero == 1) throw DegenerateCondition("cannot condition a distribution concentrated at zero");
  Rational remaining = 1 - at_zero;
  std::vector<Entry> out;
  out.reserve(entries_.size() - 1);
  for (auto it = entries_.begin() + 1; it != entries_.end(); ++it)
    out.emplace_back(it->first, Rational(it->second / remaining));
  return FiniteDistribution(Sorted{}, std::move(out));
}

std::string FiniteDistribution::to_string() const {
  if (is_dirac()) return std::to_string(entries_.front().first);
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ',';
    os << entries_[i].first << ':' << to_decimal_string(entries_[i].second);
  }
  os << ']';
  return os.str();
}

std::pair<Tick, Tick> support_min_max(const FiniteDistribution& d) {
  return {d.min_value(), d.max_value()};
}

bool epsilon_close(const FiniteDistribution& p, const FiniteDistribution& q, const Rational& eps) {
  const auto& a = p.entries();
  const auto& b = q.entries();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first) return false;
    if (abs(a[i].second - b[i].second) > eps) return false;
  }
  return true;
}

FiniteDistribution EmpiricalEstimate::distribution() const {
  if (total == 0) throw EmptySample("no samples recorded");
  std::map<Tick, Rational> mass;
  for (const auto& [value, count] : counts)
    mass[value] = Rational(mpz_class(static_cast<unsigned long>(count)),
                           mpz_class(static_cast<unsigned long>(total)));
  for (auto& [value, p] : mass) p.canonicalize();
  return FiniteDistribution(mass);
}

Rational EmpiricalEstimate::frequency(Tick value) const {
  auto it = counts.find(value);
  if (it == counts.end() || total == 0) return 0;
  Rational r(mpz_class(static_cast<unsigned long>(it->second)), mpz_class(static_cast<unsigned long>(total)));
  r.canonicalize();
  return r;
}

EmpiricalEstimate empirical(std::span<const Tick> samples, const std::set<Tick>& domain) {
  if (samples.empty()) throw EmptySample("empirical estimate needs at least one sample");
  EmpiricalEstimate est;
  for (Tick s : samples) ++est.counts[s];
  est.total = samples.size();
  for (Tick v : domain)
    if (!est.counts.contains(v)) est.unobserved.push_back(v);
  if (!domain.empty())
    for (const auto& [v, c] : est.counts)
      if (!domain.contains(v)) est.outside_domain.push_back(v);
  return est;
}

std::uint64_t hoeffding_ceiling(double log_numerator, double eps, double gamma) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterOutOfRange("eps must lie in (0,1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterOutOfRange("gamma must lie in (0,1)");
  if (!(log_numerator >= 1.0)) throw ParameterOutOfRange("log argument must be >= 1");
  const double raw = (std::log(log_numerator) - std::log(gamma)) / (2.0 * eps * eps);
  double rounded = std::ceil(raw);
  if (std::fabs(raw - std::round(raw)) < 1e-9) rounded = std::round(raw) + 1.0;
  return static_cast<std::uint64_t>(rounded);
}

std::uint64_t hoeffding_samples(std::uint64_t r, double eps, double gamma) {
  if (r < 1) throw ParameterOutOfRange("domain size must be >= 1");
  return r * hoeffding_ceiling(2.0 * static_cast<double>(r), eps, gamma);
}

}  // namespace safesched
