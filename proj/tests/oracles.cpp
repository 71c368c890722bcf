#include "oracles.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace oracle {

namespace {

using Matrix = std::vector<std::vector<long double>>;

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
std::vector<long double> solve(Matrix a, std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) < 1e-30L) throw std::runtime_error("singular system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      if (f == 0.0L) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

long double to_ld(const Rational& q) {
  return static_cast<long double>(q.get_num().get_d()) / static_cast<long double>(q.get_den().get_d());
}

}  // namespace

long double chain_gain(const ExplicitMdp& m, const MemorylessStrategy& sigma) {
  // States: Scheduler vertices and the sink, reached one tick apart.
  std::map<VertexId, std::size_t> index;
  std::vector<VertexId> states;
  std::vector<std::map<std::size_t, long double>> p;
  std::vector<long double> cost;
  std::deque<VertexId> queue;
  auto id_of = [&](VertexId v) {
    auto [it, fresh] = index.emplace(v, states.size());
    if (fresh) {
      states.push_back(v);
      p.emplace_back();
      cost.push_back(0.0L);
      queue.push_back(v);
    }
    return it->second;
  };
  id_of(m.initial());
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    const std::size_t s = index.at(v);
    if (m.owner(v) == Owner::Bottom) {
      p[s][s] = 1.0L;
      continue;
    }
    if (!sigma.defined(v)) throw std::runtime_error("strategy undefined at a reachable vertex");
    VertexId mid = kNoVertex;
    for (const auto& e : m.actions(v)) {
      if (e.action == sigma.at(v)) mid = e.target;
    }
    if (mid == kNoVertex) throw std::runtime_error("strategy picks an unavailable action");
    long double c = 0.0L;
    for (const auto& e : m.outcomes(mid)) {
      const long double q = to_ld(e.probability);
      c += q * to_ld(e.cost);
      const std::size_t t = id_of(e.target);
      p[s][t] += q;
    }
    cost[s] = c;
  }
  const std::size_t n = states.size();

  // Tarjan SCC; bottom components are the recurrent classes.
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on(n, false);
  std::vector<std::size_t> stack;
  int counter = 0, comps = 0;
  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (const auto& [w, q] : p[v]) {
      if (q <= 0.0L) continue;
      if (idx[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      while (true) {
        const std::size_t w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp[w] = comps;
        if (w == v) break;
      }
      ++comps;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (idx[v] < 0) strong(v);
  }
  std::vector<bool> bottom(comps, true);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& [w, q] : p[v]) {
      if (q > 0.0L && comp[w] != comp[v]) bottom[comp[v]] = false;
    }
  }

  // Stationary distribution per recurrent class.
  std::vector<long double> g(n, 0.0L);
  std::vector<bool> known(n, false);
  for (int c = 0; c < comps; ++c) {
    if (!bottom[c]) continue;
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < n; ++v) {
      if (comp[v] == c) members.push_back(v);
    }
    const std::size_t k = members.size();
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < k; ++i) local[members[i]] = i;
    // pi (P - I) = 0 with the last equation replaced by sum pi = 1.
    Matrix a(k, std::vector<long double>(k, 0.0L));
    std::vector<long double> b(k, 0.0L);
    for (std::size_t i = 0; i < k; ++i) {
      for (const auto& [w, q] : p[members[i]]) a[local.at(w)][i] += q;
      a[i][i] -= 1.0L;
    }
    for (std::size_t i = 0; i < k; ++i) a[k - 1][i] = 1.0L;
    b[k - 1] = 1.0L;
    const auto pi = solve(a, b);
    long double gc = 0.0L;
    for (std::size_t i = 0; i < k; ++i) gc += pi[i] * cost[members[i]];
    for (std::size_t v : members) {
      g[v] = gc;
      known[v] = true;
    }
  }

  // Transient states: g = P g.
  std::vector<std::size_t> transient;
  for (std::size_t v = 0; v < n; ++v) {
    if (!known[v]) transient.push_back(v);
  }
  if (!transient.empty()) {
    const std::size_t k = transient.size();
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < k; ++i) local[transient[i]] = i;
    Matrix a(k, std::vector<long double>(k, 0.0L));
    std::vector<long double> b(k, 0.0L);
    for (std::size_t i = 0; i < k; ++i) {
      a[i][i] = 1.0L;
      for (const auto& [w, q] : p[transient[i]]) {
        if (known[w]) {
          b[i] += q * g[w];
        } else {
          a[i][local.at(w)] -= q;
        }
      }
    }
    const auto x = solve(a, b);
    for (std::size_t i = 0; i < k; ++i) g[transient[i]] = x[i];
  }
  return g[0];
}

Enumeration enumerate_min_gain(const SafeRegion& region, std::uint64_t cap) {
  const ExplicitMdp& m = region.mdp();
  Enumeration out;
  out.min_gain = std::numeric_limits<long double>::infinity();
  MemorylessStrategy sigma(m.size());
  std::vector<bool> assigned(m.size(), false);

  // First reachable Scheduler vertex without a choice, or none.
  auto open_vertex = [&]() -> std::optional<VertexId> {
    std::vector<bool> seen(m.size(), false);
    std::deque<VertexId> q{m.initial()};
    seen[m.initial()] = true;
    while (!q.empty()) {
      const VertexId v = q.front();
      q.pop_front();
      if (m.owner(v) == Owner::Scheduler) {
        if (!assigned[v]) return v;
        for (const auto& e : m.actions(v)) {
          if (e.action == sigma.at(v) && !seen[e.target]) {
            seen[e.target] = true;
            q.push_back(e.target);
          }
        }
      } else if (m.owner(v) == Owner::TaskGen) {
        for (const auto& e : m.outcomes(v)) {
          if (!seen[e.target]) {
            seen[e.target] = true;
            q.push_back(e.target);
          }
        }
      }
    }
    return std::nullopt;
  };

  std::function<void()> dfs = [&] {
    if (out.strategies >= cap) return;
    const auto v = open_vertex();
    if (!v) {
      ++out.strategies;
      const long double g = chain_gain(m, sigma);
      if (g < out.min_gain) {
        out.min_gain = g;
        out.argmin = sigma;
      }
      return;
    }
    assigned[*v] = true;
    for (SchedulerAction a : region.safe_actions(*v)) {
      sigma.set(*v, a);
      dfs();
    }
    assigned[*v] = false;
  };
  dfs();
  out.complete = out.strategies < cap;
  return out;
}

Rational label_probability(const GameModel& model, const TaskState& s, JobEvent e) {
  const Rational a0 = model.distribution(s.to_arrival).probability(0);
  if (s.rct == kNoJob) {
    if (e == JobEvent::Sub) return a0;
    if (e == JobEvent::Eps) return 1 - a0;
    return 0;
  }
  const Rational c0 = model.distribution(s.rct).probability(0);
  switch (e) {
    case JobEvent::Fin: return c0 * (1 - a0);
    case JobEvent::Sub: return c0 * a0;
    case JobEvent::KillSub: return (1 - c0) * a0;
    case JobEvent::Eps: return (1 - c0) * (1 - a0);
  }
  return 0;
}

ChiSquare chi_square(const std::vector<std::uint64_t>& counts, const std::vector<double>& probs) {
  ChiSquare out;
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expect = probs[i] * static_cast<double>(total);
    if (expect <= 0.0) continue;
    const double d = static_cast<double>(counts[i]) - expect;
    out.statistic += d * d / expect;
    ++out.df;
  }
  if (out.df > 0) --out.df;
  if (out.df == 0) {
    out.pass = out.statistic < 1e-9;
    return out;
  }
  // Upper tail mass of a one-sided 3 sigma normal deviation.
  const double tail = 0.5 * std::erfc(3.0 / std::sqrt(2.0));
  out.threshold = boost::math::quantile(
      boost::math::complement(boost::math::chi_squared(static_cast<double>(out.df)), tail));
  out.pass = out.statistic <= out.threshold;
  return out;
}

std::vector<bool> naive_attractor(const ExplicitMdp& m, const std::vector<bool>& bad) {
  std::vector<bool> in = bad;
  bool changed = true;
  while (changed) {
    changed = false;
    for (VertexId v = 0; v < m.size(); ++v) {
      if (in[v]) continue;
      bool add = false;
      if (m.owner(v) == Owner::Scheduler) {
        add = !m.actions(v).empty();
        for (const auto& e : m.actions(v)) add = add && in[e.target];
      } else if (m.owner(v) == Owner::TaskGen) {
        for (const auto& e : m.outcomes(v)) add = add || in[e.target];
      } else {
        add = false;
      }
      if (add) {
        in[v] = true;
        changed = true;
      }
    }
  }
  return in;
}

}  // namespace oracle

namespace oracle {

std::vector<std::string> example_one_excerpt_mismatches(const ExplicitMdp& m) {
  // Task 1 is the hard task; "0!" marks a job that finished during the tick.
  const std::map<std::string, std::string> vertices = {
      {"vinit", "S:(1,2,3)/([1:0.4,2:0.6],2,3)"},
      {"v1", "T:(1,1,2)/([0:0.4,1:0.6],1,2)"},
      {"v2", "T:(0!,1,2)/([1:0.4,2:0.6],1,2)"},
      {"v3", "T:(1,1,2)/([1:0.4,2:0.6],1,2)"},
      {"v4", "S:(1,1,2)/(0,1,2)"},
      {"v5", "S:(1,1,2)/(1,1,2)"},
      {"v6", "S:(0,1,2)/([1:0.4,2:0.6],1,2)"},
      {"v7", "S:(1,1,2)/([1:0.4,2:0.6],1,2)"},
      {"v8", "T:(0!,0,1)/(0,0,1)"},
      {"v9", "S:(0,0,1)/(0,0,1)"},
      {"v10", "T:(0,0,0)/(0,0,0)"},
      {"v11", "T:(0!,0,1)/(1,0,1)"},
      {"v12", "S:(0,0,1)/(1,0,1)"},
      {"v13", "T:(0,0,0)/(1,0,0)"},
      {"v14", "T:(1,0,1)/([1:0.4,2:0.6],0,1)"},
      {"bot", "BOT"},
  };
  struct Drawn {
    std::string src, dst, label, prob, cost;
  };
  const std::vector<Drawn> edges = {
      {"vinit", "v1", "t2", "", ""},
      {"vinit", "v2", "t1", "", ""},
      {"vinit", "v3", "eps", "", ""},
      {"v1", "v4", "(eps,fin)", "2/5", "0"},
      {"v1", "v5", "(eps,eps)", "3/5", "0"},
      {"v2", "v6", "(fin,eps)", "1", "0"},
      {"v3", "v7", "(eps,eps)", "1", "0"},
      {"v4", "v8", "t1", "", ""},
      {"v8", "v9", "(fin,eps)", "1", "0"},
      {"v9", "v10", "eps", "", ""},
      {"v10", "vinit", "(sub,sub)", "1", "0"},
      {"v5", "v11", "t1", "", ""},
      {"v11", "v12", "(fin,eps)", "1", "0"},
      {"v12", "v13", "eps", "", ""},
      {"v13", "vinit", "(sub,killANDsub)", "1", "10"},
      {"v7", "v14", "eps", "", ""},
      {"v14", "bot", "(eps,eps)", "1", "0"},
      {"bot", "bot", "eps", "", ""},
  };
  // Dotted stubs: actions drawn without their targets.
  const std::vector<std::pair<std::string, std::vector<std::string>>> stubs = {
      {"v5", {"t2", "eps"}}, {"v6", {"t2", "eps"}}, {"v7", {"t2", "t1"}}};

  std::vector<std::string> bad;
  std::map<std::string, VertexId> id;
  for (VertexId v = 0; v < m.size(); ++v) {
    for (const auto& [name, text] : vertices) {
      if (m.render(v) == text) id[name] = v;
    }
  }
  for (const auto& [name, text] : vertices) {
    if (!id.count(name)) bad.push_back("missing vertex " + name + " " + text);
  }
  if (!bad.empty()) return bad;
  if (m.initial() != id.at("vinit")) bad.push_back("vinit is not the initial vertex");

  for (const auto& e : edges) {
    const VertexId s = id.at(e.src), t = id.at(e.dst);
    bool found = false;
    if (m.owner(s) == Owner::TaskGen) {
      for (const auto& c : m.outcomes(s)) {
        if (c.target == t && c.labels.to_string() == e.label && to_fraction_string(c.probability) == e.prob &&
            to_fraction_string(c.cost) == e.cost) {
          found = true;
        }
      }
    } else {
      for (const auto& a : m.actions(s)) {
        if (a.target == t && to_string(a.action) == e.label) found = true;
      }
    }
    if (!found) bad.push_back("missing edge " + e.src + " -" + e.label + "-> " + e.dst);
  }
  for (const auto& [name, labels] : stubs) {
    for (const auto& label : labels) {
      bool found = false;
      for (const auto& a : m.actions(id.at(name))) found = found || to_string(a.action) == label;
      if (!found) bad.push_back("missing action " + label + " at " + name);
    }
  }
  return bad;
}

}  // namespace oracle
