#include "safesched/game_graph.hpp"

#include <algorithm>

#include "safesched/errors.hpp"

namespace safesched {

GameGraph::GameGraph(std::shared_ptr<GameModel> model) : model_(std::move(model)) {
  intern(model_->initial_vertex());
}

VertexId GameGraph::intern(const GameVertex& v) {
  auto it = index_.find(v);
  if (it != index_.end()) return it->second;
  VertexId id = static_cast<VertexId>(nodes_.size());
  nodes_.push_back(Node{v, false, {}, {}, {}});
  index_.emplace(v, id);
  if (v.is_bottom()) bottom_ = id;
  return id;
}

std::optional<VertexId> GameGraph::find(const GameVertex& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void GameGraph::expand(VertexId id) {
  if (nodes_[id].expanded) return;
  // Copy: interning may grow the deque but never moves existing nodes.
  const GameVertex v = nodes_[id].vertex;
  std::vector<SchedulerEdge> actions;
  std::vector<ChanceEdge> outcomes;
  std::vector<double> cumulative;
  if (v.owner == Owner::Bottom) {
    actions.push_back(SchedulerEdge{SchedulerAction::idle(), id});
  } else if (v.owner == Owner::Scheduler) {
    for (SchedulerAction a : model_->scheduler_actions(v)) {
      actions.push_back(SchedulerEdge{a, intern(model_->apply_scheduler(v, a))});
    }
  } else {
    auto outs = model_->taskgen_outcomes(v);
    double acc = 0.0;
    for (auto& [o, next] : outs) {
      ChanceEdge e;
      e.target = intern(next);
      e.labels = o.labels;
      e.probability = o.probability;
      e.cost = o.cost;
      e.p = to_double(o.probability);
      e.c = to_double(o.cost);
      acc += e.p;
      cumulative.push_back(acc);
      outcomes.push_back(std::move(e));
    }
    if (!cumulative.empty()) cumulative.back() = 1.0;
  }
  Node& node = nodes_[id];
  node.actions = std::move(actions);
  node.outcomes = std::move(outcomes);
  node.cumulative = std::move(cumulative);
  node.expanded = true;
}

const std::vector<SchedulerEdge>& GameGraph::actions(VertexId id) {
  expand(id);
  return nodes_[id].actions;
}

const std::vector<ChanceEdge>& GameGraph::outcomes(VertexId id) {
  expand(id);
  return nodes_[id].outcomes;
}

VertexId GameGraph::successor(VertexId id, SchedulerAction a) {
  for (const auto& e : actions(id)) {
    if (e.action == a) return e.target;
  }
  return kNoVertex;
}

std::size_t GameGraph::sample_outcome(VertexId id, double u) {
  expand(id);
  const auto& cum = nodes_[id].cumulative;
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) return cum.size() - 1;
  return static_cast<std::size_t>(it - cum.begin());
}

}  // namespace safesched
