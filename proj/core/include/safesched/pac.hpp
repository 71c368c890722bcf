#pragma once

#include <cstddef>
#include <cstdint>

#include "safesched/rational.hpp"
#include "safesched/task_model.hpp"

namespace safesched {

/// |F| * a_max * dd * ceil((ln(4 dd |F|) - ln gamma) / (2 eps^2)).
std::uint64_t steps_bound_soft_only(std::size_t soft_tasks, Tick a_max, std::size_t dd, double eps, double gamma);
/// Same bound for a soft-only system, with dd the widest distribution domain.
/// Throws HardTasksPresent.
std::uint64_t steps_bound_soft_only(const TaskSystem& sys, double eps, double gamma);

/// Samples per distribution in soft-only learning: dd * ceil((ln(4 dd |F|) - ln gamma) / (2 eps^2)).
std::uint64_t samples_soft_only(const TaskSystem& sys, double eps, double gamma);
/// Samples per distribution when all |sys| tasks are learned: dd * ceil((ln(4 dd n) - ln gamma) / (2 eps^2)).
std::uint64_t samples_all_tasks(const TaskSystem& sys, double eps, double gamma);

/// T = a_max * dd * ceil((ln(4 dd n) - ln gamma) / (2 eps^2)).
std::uint64_t phase_length(std::size_t tasks, Tick a_max, std::size_t dd, double eps, double gamma);
/// T + |F| (T + K) with K in ticks.
std::uint64_t steps_bound_efficient(std::size_t tasks, std::size_t soft_tasks, Tick a_max, std::size_t dd,
                                    std::uint64_t k, double eps, double gamma);

/// s^(2n) - (s - eps)^(2n) with s = min(1, pi_max + eps). Throws ParameterOutOfRange unless 0 < eps < 1.
Rational eta_from_eps(std::size_t n, const Rational& pi_max, const Rational& eps);
Rational eta_from_eps(const TaskSystem& sys, const Rational& eps);

/// beta * pi_min / (8 |V|).
Rational eta_beta_threshold(const Rational& beta, const Rational& pi_min, std::size_t scheduler_vertices);

/// beta * pi_min / (8 |V| + beta * pi_min).
Rational eps_for_robustness(const Rational& beta, const Rational& pi_min, std::size_t scheduler_vertices);

/// 4|V|(eta/pi_min) / (1 - 2|V|(eta/pi_min)). Throws DenominatorNonpositive.
double perturbation_gap(std::size_t scheduler_vertices, const Rational& eta, const Rational& pi_min);

}  // namespace safesched
