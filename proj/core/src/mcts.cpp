#include "safesched/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "safesched/errors.hpp"

namespace safesched {

Mcts::Mcts(std::shared_ptr<GameGraph> model, Advice& advice, MctsParams params)
    : model_(std::move(model)), advice_(&advice), params_(params) {}

const std::vector<SchedulerAction>& Mcts::advised(VertexId v) {
  if (v >= advice_known_.size()) {
    advice_known_.resize(v + 1, false);
    advice_cache_.resize(v + 1);
  }
  if (!advice_known_[v]) {
    auto allowed = advice_->allowed(*model_, v);
    std::sort(allowed.begin(), allowed.end());
    advice_cache_[v] = std::move(allowed);
    advice_known_[v] = true;
  }
  return advice_cache_[v];
}

std::uint32_t Mcts::make_node(VertexId v, std::uint32_t depth) {
  Node n;
  n.vertex = v;
  n.depth = depth;
  if (model_->owner(v) == Owner::Scheduler && depth < params_.horizon) n.allowed = advised(v);
  nodes_.push_back(std::move(n));
  ++stats_.nodes;
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::pair<VertexId, double> Mcts::resolve(VertexId taskgen, std::size_t& index, Rng& rng) {
  index = model_->sample_outcome(taskgen, rng.uniform());
  const ChanceEdge& e = model_->outcomes_of(taskgen)[index];
  double cost = e.c;
  if (model_->owner(e.target) == Owner::Bottom) cost += params_.hard_penalty;
  note_cost(cost);
  return {e.target, cost};
}

double Mcts::rollout(VertexId v, std::uint32_t depth, Rng& rng) {
  double total = 0.0;
  for (std::uint32_t d = depth; d < params_.horizon; ++d) {
    if (model_->owner(v) != Owner::Scheduler) break;
    const auto& allowed = advised(v);
    if (allowed.empty()) break;
    const SchedulerAction a = allowed[rng.below(allowed.size())];
    ++stats_.advice_checks;
    const VertexId mid = model_->successor(v, a);
    if (mid == kNoVertex) {
      ++stats_.advice_violations;
      break;
    }
    std::size_t idx = 0;
    auto [next, cost] = resolve(mid, idx, rng);
    total += cost;
    v = next;
    ++stats_.simulated_ticks;
  }
  return total;
}

SchedulerAction Mcts::decide(VertexId root_vertex, Rng& rng) {
  ++stats_.decisions;
  nodes_.clear();
  const std::uint32_t root = make_node(root_vertex, 0);
  if (nodes_[root].allowed.empty()) throw NoAllowedAction("advice allows no action at vertex " + std::to_string(root_vertex));
  if (nodes_[root].allowed.size() == 1) return nodes_[root].allowed.front();

  auto init_value = [&](std::uint32_t node) {
    const Node& n = nodes_[node];
    if (params_.init_rollouts == 0 || model_->owner(n.vertex) != Owner::Scheduler) return 0.0;
    double sum = 0.0;
    for (std::size_t r = 0; r < params_.init_rollouts; ++r) sum += rollout(n.vertex, n.depth, rng);
    stats_.rollouts += params_.init_rollouts;
    return sum / static_cast<double>(params_.init_rollouts);
  };

  struct Step {
    std::uint32_t node;
    std::uint32_t child;
    double cost;
  };
  std::vector<Step> path;
  const std::size_t max_iterations = 4 * params_.node_budget + 64;
  std::size_t created = 0;
  for (std::size_t iter = 0; iter < max_iterations && created < params_.node_budget; ++iter) {
    path.clear();
    std::uint32_t cur = root;
    double leaf = 0.0;
    while (true) {
      Node& n = nodes_[cur];
      if (n.depth >= params_.horizon || model_->owner(n.vertex) != Owner::Scheduler || n.allowed.empty()) break;
      std::uint32_t ci = 0;
      if (n.children.size() < n.allowed.size()) {
        const SchedulerAction a = n.allowed[n.children.size()];
        Child c;
        c.action = a;
        c.taskgen = model_->successor(n.vertex, a);
        if (c.taskgen == kNoVertex) throw IllegalAction("advice returned an unavailable action");
        n.children.push_back(std::move(c));
        ci = static_cast<std::uint32_t>(n.children.size() - 1);
      } else {
        const double scale = max_step_cost_ > 0.0
                                 ? max_step_cost_ * static_cast<double>(params_.horizon - n.depth)
                                 : 1.0;
        const double log_n = std::log(static_cast<double>(std::max<std::uint32_t>(n.visits, 1)));
        double best = std::numeric_limits<double>::infinity();
        for (std::uint32_t k = 0; k < n.children.size(); ++k) {
          const Child& c = n.children[k];
          const double mean = c.total / c.visits;
          const double score = mean / scale - params_.uct_c * std::sqrt(log_n / c.visits);
          if (score < best) {
            best = score;
            ci = k;
          }
        }
      }
      ++stats_.advice_checks;
      std::size_t idx = 0;
      const VertexId taskgen = nodes_[cur].children[ci].taskgen;
      auto [target, cost] = resolve(taskgen, idx, rng);
      path.push_back(Step{cur, ci, cost});
      auto& outs = nodes_[cur].children[ci].outcomes;
      auto it = std::find_if(outs.begin(), outs.end(), [&](const auto& p) { return p.first == idx; });
      if (it != outs.end()) {
        cur = it->second;
        continue;
      }
      const std::uint32_t depth = nodes_[cur].depth + 1;
      const std::uint32_t fresh = make_node(target, depth);
      nodes_[cur].children[ci].outcomes.emplace_back(static_cast<std::uint32_t>(idx), fresh);
      ++created;
      leaf = init_value(fresh);
      nodes_[fresh].visits = 1;
      nodes_[fresh].total = leaf;
      break;
    }
    double ret = leaf;
    for (auto s = path.rbegin(); s != path.rend(); ++s) {
      ret += s->cost;
      Node& n = nodes_[s->node];
      n.visits += 1;
      n.total += ret;
      Child& c = n.children[s->child];
      c.visits += 1;
      c.total += ret;
    }
  }

  const Node& r = nodes_[root];
  const Child* best = nullptr;
  for (const Child& c : r.children) {
    if (c.visits == 0) continue;
    if (!best) {
      best = &c;
      continue;
    }
    const double m = c.total / c.visits;
    const double bm = best->total / best->visits;
    if (m < bm - 1e-12 || (std::abs(m - bm) <= 1e-12 && c.visits < best->visits)) best = &c;
  }
  return best ? best->action : r.allowed.front();
}

ScheduleRun run_mcts_schedule(SimEnv& env, std::shared_ptr<GameGraph> model, Advice& advice, const MctsParams& params,
                              std::uint64_t eval_steps, std::uint64_t seed) {
  ModelTracker tracker(model);
  Mcts search(model, advice, params);
  Rng rng(seed);
  ScheduleRun run;
  const double cost0 = env.total_cost();
  const std::uint64_t miss0 = env.hard_misses();
  if (env.ticks() != 0) throw ParameterOutOfRange("run_mcts_schedule needs a fresh environment");
  for (std::uint64_t t = 0; t < eval_steps; ++t) {
    const VertexId v = tracker.vertex();
    SchedulerAction a = SchedulerAction::idle();
    if (model->owner(v) == Owner::Scheduler) {
      a = search.decide(v, rng);
    }
    const Observation& obs = env.step(a);
    tracker.advance(a, obs);
    run.actions.push_back(a);
  }
  run.steps = eval_steps;
  run.mean_cost = eval_steps ? (env.total_cost() - cost0) / static_cast<double>(eval_steps) : 0.0;
  run.violations = env.hard_misses() - miss0;
  run.stats = search.stats();
  return run;
}

}  // namespace safesched
