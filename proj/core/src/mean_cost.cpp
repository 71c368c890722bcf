#include "safesched/mean_cost.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "safesched/errors.hpp"

namespace safesched {

Rational mean_cost_prefix(std::span<const Rational> costs) {
  if (costs.empty()) throw EmptyPrefix("mean cost of an empty prefix");
  Rational sum = 0;
  for (const auto& c : costs) sum += c;
  return sum / static_cast<long>(costs.size());
}

double discounted_sum(std::span<const double> costs, double d) {
  if (!(d > 0.0 && d < 1.0)) throw ParameterOutOfRange("discount must lie in (0,1)");
  double sum = 0.0;
  double w = 1.0;
  for (double c : costs) {
    sum += c * w;
    w *= d;
  }
  return sum;
}

TickMdp TickMdp::from_mdp(const ExplicitMdp& m) {
  TickMdp t;
  t.build(m, nullptr);
  return t;
}

TickMdp TickMdp::from_region(const SafeRegion& region) {
  TickMdp t;
  t.build(region.mdp(), &region);
  return t;
}

void TickMdp::build(const ExplicitMdp& m, const SafeRegion* region) {
  state_.assign(m.size(), UINT32_MAX);
  for (VertexId v = 0; v < m.size(); ++v) {
    if (m.owner(v) == Owner::TaskGen) continue;
    if (region && !region->contains(v)) continue;
    state_[v] = static_cast<std::uint32_t>(vertex_.size());
    vertex_.push_back(v);
  }
  initial_ = state_[m.initial()];
  action_begin_.push_back(0);
  std::map<std::uint32_t, double> merged;
  for (VertexId v : vertex_) {
    const auto& edges = region ? region->safe_edges(v) : m.actions(v);
    for (const auto& e : edges) {
      Action a;
      a.action = e.action;
      a.begin = static_cast<std::uint32_t>(targets_.size());
      merged.clear();
      if (m.owner(e.target) == Owner::TaskGen) {
        for (const auto& o : m.outcomes(e.target)) {
          a.cost += o.p * o.c;
          merged[state_[o.target]] += o.p;
        }
      } else {
        merged[state_[e.target]] += 1.0;  // sink self-loop
      }
      for (auto [s, p] : merged) {
        if (s == UINT32_MAX) throw ValidationFailed("tick model leaves its state set");
        targets_.push_back(s);
        probs_.push_back(p);
      }
      a.end = static_cast<std::uint32_t>(targets_.size());
      actions_.push_back(a);
    }
    action_begin_.push_back(static_cast<std::uint32_t>(actions_.size()));
  }
}

namespace {

double q_value(const TickMdp& t, const TickMdp::Action& a, const std::vector<double>& h) {
  double q = a.cost;
  auto tg = t.targets(a);
  auto pr = t.probs(a);
  for (std::size_t k = 0; k < tg.size(); ++k) q += pr[k] * h[tg[k]];
  return q;
}

}  // namespace

ValueReport optimize_mean_cost(const TickMdp& t, std::size_t vertex_count, const SolverOptions& opts) {
  const std::size_t n = t.state_count();
  std::vector<double> h(n, 0.0);
  std::vector<double> th(n, 0.0);
  const std::uint32_t ref = t.initial_state();
  ValueReport report;
  bool converged = false;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::uint32_t s = 0; s < n; ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& a : t.actions(s)) best = std::min(best, q_value(t, a, h));
      th[s] = best;
      lo = std::min(lo, best - h[s]);
      hi = std::max(hi, best - h[s]);
    }
    report.iterations = it;
    report.residual_span = hi - lo;
    report.gain = 0.5 * (hi + lo);
    if (hi - lo < opts.tol) {
      converged = true;
      break;
    }
    const double shift = (1.0 - opts.tau) * h[ref] + opts.tau * th[ref];
    for (std::uint32_t s = 0; s < n; ++s) h[s] = (1.0 - opts.tau) * h[s] + opts.tau * th[s] - shift;
  }
  if (!converged) throw NoConvergence("value iteration did not converge in " + std::to_string(opts.max_iter) + " iterations");

  report.bias.assign(vertex_count, 0.0);
  report.strategy = MemorylessStrategy(vertex_count);
  for (std::uint32_t s = 0; s < n; ++s) {
    report.bias[t.vertex(s)] = h[s];
    auto acts = t.actions(s);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : acts) best = std::min(best, q_value(t, a, h));
    const double slack = 1e-9 * std::max(1.0, std::abs(best));
    for (const auto& a : acts) {
      if (q_value(t, a, h) <= best + slack) {
        report.strategy.set(t.vertex(s), a.action);
        break;
      }
    }
  }
  if (report.gain < 0.0 && report.gain > -opts.tol) report.gain = 0.0;
  return report;
}

ValueReport optimize_mean_cost(const SafeRegion& region, const SolverOptions& opts) {
  return optimize_mean_cost(TickMdp::from_region(region), region.mdp().size(), opts);
}

double evaluate_strategy(const ExplicitMdp& m, const MemorylessStrategy& sigma) {
  const TickMdp t = TickMdp::from_mdp(m);
  // Chosen action per reachable state.
  std::vector<const TickMdp::Action*> chosen(t.state_count(), nullptr);
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> local(t.state_count(), UINT32_MAX);
  std::vector<std::uint32_t> stack{t.initial_state()};
  local[t.initial_state()] = 0;
  order.push_back(t.initial_state());
  while (!stack.empty()) {
    std::uint32_t s = stack.back();
    stack.pop_back();
    const VertexId v = t.vertex(s);
    const TickMdp::Action* pick = nullptr;
    if (m.owner(v) == Owner::Bottom) {
      pick = &t.actions(s).front();
    } else {
      if (!sigma.defined(v)) throw NonTotalStrategy("strategy undefined at vertex " + std::to_string(v));
      const SchedulerAction a = sigma.at(v);
      for (const auto& act : t.actions(s)) {
        if (act.action == a) pick = &act;
      }
      if (!pick) throw NonTotalStrategy("strategy picks unavailable action at vertex " + std::to_string(v));
    }
    chosen[s] = pick;
    for (std::uint32_t w : t.targets(*pick)) {
      if (local[w] == UINT32_MAX) {
        local[w] = static_cast<std::uint32_t>(order.size());
        order.push_back(w);
        stack.push_back(w);
      }
    }
  }
  const std::size_t n = order.size();
  Eigen::VectorXd cost(n);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t k = 0; k < n; ++k) {
    const auto* a = chosen[order[k]];
    cost[static_cast<Eigen::Index>(k)] = a->cost;
    auto tg = t.targets(*a);
    auto pr = t.probs(*a);
    for (std::size_t j = 0; j < tg.size(); ++j) {
      trip.emplace_back(static_cast<int>(k), static_cast<int>(local[tg[j]]), pr[j]);
    }
  }
  Eigen::SparseMatrix<double> p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  p.setFromTriplets(trip.begin(), trip.end());

  // pi (P - I) = 0 with the last equation replaced by sum(pi) = 1.
  {
    std::vector<Eigen::Triplet<double>> sys;
    const int last = static_cast<int>(n) - 1;
    for (int k = 0; k < p.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(p, k); it; ++it) {
        if (it.col() != last) sys.emplace_back(static_cast<int>(it.col()), static_cast<int>(it.row()), it.value());
      }
    }
    for (int k = 0; k < last; ++k) sys.emplace_back(k, k, -1.0);
    for (int k = 0; k <= last; ++k) sys.emplace_back(last, k, 1.0);
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    a.setFromTriplets(sys.begin(), sys.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() == Eigen::Success) {
      Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      b[last] = 1.0;
      Eigen::VectorXd pi = lu.solve(b);
      const double residual = (a * pi - b).lpNorm<Eigen::Infinity>();
      if (lu.info() == Eigen::Success && residual < 1e-9 && pi.minCoeff() > -1e-9) return std::max(0.0, pi.dot(cost));
    }
  }

  // Several recurrent classes: limit distribution of the lazy chain from the start.
  Eigen::SparseMatrix<double> pt = p.transpose();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  x[0] = 1.0;
  for (std::size_t it = 0; it < 10000000; ++it) {
    Eigen::VectorXd next = 0.5 * (x + pt * x);
    const double delta = (next - x).lpNorm<1>();
    x = std::move(next);
    if (delta < 1e-14) break;
  }
  return std::max(0.0, x.dot(cost));
}

double optimize_discounted(const SafeRegion& region, double d, double tol) {
  if (!(d > 0.0 && d < 1.0)) throw ParameterOutOfRange("discount must lie in (0,1)");
  const TickMdp t = TickMdp::from_region(region);
  std::vector<double> v(t.state_count(), 0.0);
  std::vector<double> next(v.size(), 0.0);
  for (std::size_t it = 0; it < 100000000; ++it) {
    double change = 0.0;
    for (std::uint32_t s = 0; s < v.size(); ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& a : t.actions(s)) {
        double q = a.cost;
        auto tg = t.targets(a);
        auto pr = t.probs(a);
        for (std::size_t k = 0; k < tg.size(); ++k) q += d * pr[k] * v[tg[k]];
        best = std::min(best, q);
      }
      next[s] = best;
      change = std::max(change, std::abs(best - v[s]));
    }
    v.swap(next);
    if (change * d / (1.0 - d) < tol) break;
  }
  return v[t.initial_state()];
}

}  // namespace safesched
