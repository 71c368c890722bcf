#include "safesched/pac.hpp"

#include "safesched/distributions.hpp"
#include "safesched/errors.hpp"

namespace safesched {

namespace {

void check_beta(const Rational& beta) {
  if (!(beta > 0 && beta <= 1)) throw ParameterOutOfRange("beta must lie in (0,1]");
}

}  // namespace

std::uint64_t steps_bound_soft_only(std::size_t soft_tasks, Tick a_max, std::size_t dd, double eps, double gamma) {
  if (soft_tasks == 0 || dd == 0) throw ParameterOutOfRange("need at least one soft task and domain element");
  const double f = static_cast<double>(soft_tasks);
  const double d = static_cast<double>(dd);
  return soft_tasks * a_max * dd * hoeffding_ceiling(4.0 * d * f, eps, gamma);
}

std::uint64_t steps_bound_soft_only(const TaskSystem& sys, double eps, double gamma) {
  if (sys.has_hard_tasks()) throw HardTasksPresent("soft-only bound needs a system without hard tasks");
  return steps_bound_soft_only(sys.size(), sys.max_arrival(), sys.domain_width(), eps, gamma);
}

std::uint64_t samples_soft_only(const TaskSystem& sys, double eps, double gamma) {
  const double d = static_cast<double>(sys.domain_width());
  return sys.domain_width() * hoeffding_ceiling(4.0 * d * static_cast<double>(sys.soft_indices().size()), eps, gamma);
}

std::uint64_t samples_all_tasks(const TaskSystem& sys, double eps, double gamma) {
  const double d = static_cast<double>(sys.domain_width());
  return sys.domain_width() * hoeffding_ceiling(4.0 * d * static_cast<double>(sys.size()), eps, gamma);
}

std::uint64_t phase_length(std::size_t tasks, Tick a_max, std::size_t dd, double eps, double gamma) {
  return a_max * dd * hoeffding_ceiling(4.0 * static_cast<double>(dd) * static_cast<double>(tasks), eps, gamma);
}

std::uint64_t steps_bound_efficient(std::size_t tasks, std::size_t soft_tasks, Tick a_max, std::size_t dd,
                                    std::uint64_t k, double eps, double gamma) {
  const std::uint64_t t = phase_length(tasks, a_max, dd, eps, gamma);
  return t + soft_tasks * (t + k);
}

Rational eta_from_eps(std::size_t n, const Rational& pi_max, const Rational& eps) {
  if (!(eps > 0 && eps < 1)) throw ParameterOutOfRange("eps must lie in (0,1)");
  Rational s = pi_max + eps;
  if (s > 1) s = 1;
  Rational hi = 1;
  Rational lo = 1;
  const Rational low_base = s - eps;
  for (std::size_t k = 0; k < 2 * n; ++k) {
    hi *= s;
    lo *= low_base;
  }
  return hi - lo;
}

Rational eta_from_eps(const TaskSystem& sys, const Rational& eps) {
  return eta_from_eps(sys.size(), sys.max_probability(), eps);
}

Rational eta_beta_threshold(const Rational& beta, const Rational& pi_min, std::size_t scheduler_vertices) {
  check_beta(beta);
  return beta * pi_min / Rational(8 * static_cast<long>(scheduler_vertices));
}

Rational eps_for_robustness(const Rational& beta, const Rational& pi_min, std::size_t scheduler_vertices) {
  check_beta(beta);
  const Rational bp = beta * pi_min;
  return bp / (Rational(8 * static_cast<long>(scheduler_vertices)) + bp);
}

double perturbation_gap(std::size_t scheduler_vertices, const Rational& eta, const Rational& pi_min) {
  const Rational ratio = eta / pi_min;
  const Rational v = static_cast<long>(scheduler_vertices);
  const Rational denom = 1 - 2 * v * ratio;
  if (denom <= 0) throw DenominatorNonpositive("2|V| eta / pi_min must be below 1");
  return to_double(Rational(4 * v * ratio / denom));
}

}  // namespace safesched
