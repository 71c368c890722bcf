#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "safesched/game.hpp"

namespace safesched {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct SchedulerEdge {
  SchedulerAction action;
  VertexId target = kNoVertex;
};

struct ChanceEdge {
  VertexId target = kNoVertex;
  EventLabels labels;
  Rational probability;
  Rational cost;
  double p = 0.0;
  double c = 0.0;
};

/// Interned game vertices with lazily expanded successor lists.
///
/// Vertex ids are assigned in discovery order, so two graphs explored in the
/// same order agree on every id. References returned by the accessors stay
/// valid while the graph grows.
class GameGraph {
 public:
  explicit GameGraph(std::shared_ptr<GameModel> model);

  GameModel& model() noexcept { return *model_; }
  const GameModel& model() const noexcept { return *model_; }
  std::shared_ptr<GameModel> model_ptr() const noexcept { return model_; }

  VertexId initial() const noexcept { return 0; }
  VertexId intern(const GameVertex& v);
  std::optional<VertexId> find(const GameVertex& v) const;
  /// Id of the sink if it has been discovered.
  std::optional<VertexId> bottom() const noexcept { return bottom_; }

  const GameVertex& vertex(VertexId id) const { return nodes_.at(id).vertex; }
  Owner owner(VertexId id) const { return nodes_[id].vertex.owner; }
  std::size_t size() const noexcept { return nodes_.size(); }

  bool expanded(VertexId id) const { return nodes_[id].expanded; }
  void expand(VertexId id);

  /// Expanding accessors.
  const std::vector<SchedulerEdge>& actions(VertexId id);
  const std::vector<ChanceEdge>& outcomes(VertexId id);
  /// Accessors for already expanded vertices.
  const std::vector<SchedulerEdge>& actions_of(VertexId id) const { return nodes_[id].actions; }
  const std::vector<ChanceEdge>& outcomes_of(VertexId id) const { return nodes_[id].outcomes; }

  /// Successor of a Scheduler vertex under `a`, or kNoVertex if unavailable.
  VertexId successor(VertexId id, SchedulerAction a);
  /// Index of the outcome selected by a uniform draw u in [0,1).
  std::size_t sample_outcome(VertexId id, double u);

  std::string render(VertexId id) const { return model_->render(vertex(id)); }

 private:
  struct Node {
    GameVertex vertex;
    bool expanded = false;
    std::vector<SchedulerEdge> actions;
    std::vector<ChanceEdge> outcomes;
    std::vector<double> cumulative;
  };

  std::shared_ptr<GameModel> model_;
  std::deque<Node> nodes_;
  std::unordered_map<GameVertex, VertexId> index_;
  std::optional<VertexId> bottom_;
};

/// Fully expanded reachable part of the game, numbered in BFS order.
class ExplicitMdp {
 public:
  ExplicitMdp() = default;
  explicit ExplicitMdp(std::shared_ptr<GameGraph> graph);

  const GameGraph& graph() const noexcept { return *graph_; }
  std::shared_ptr<GameGraph> graph_ptr() const noexcept { return graph_; }
  const GameModel& model() const noexcept { return graph_->model(); }
  const TaskSystem& system() const noexcept { return graph_->model().system(); }

  std::size_t size() const noexcept { return size_; }
  VertexId initial() const noexcept { return 0; }
  std::optional<VertexId> bottom() const noexcept { return graph_->bottom(); }
  Owner owner(VertexId id) const { return graph_->owner(id); }
  const GameVertex& vertex(VertexId id) const { return graph_->vertex(id); }
  const std::vector<SchedulerEdge>& actions(VertexId id) const { return graph_->actions_of(id); }
  const std::vector<ChanceEdge>& outcomes(VertexId id) const { return graph_->outcomes_of(id); }
  std::string render(VertexId id) const { return graph_->render(id); }

  std::size_t scheduler_count() const noexcept { return scheduler_count_; }
  std::size_t taskgen_count() const noexcept { return taskgen_count_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  /// Smallest positive probability on any TaskGen edge.
  const Rational& min_edge_probability() const noexcept { return min_edge_prob_; }

  /// Successor of a Scheduler vertex under `a`, or kNoVertex.
  VertexId successor(VertexId id, SchedulerAction a) const;
  /// Predecessor lists (built on demand, cached).
  const std::vector<std::vector<VertexId>>& predecessors() const;

 private:
  std::shared_ptr<GameGraph> graph_;
  std::size_t size_ = 0;
  std::size_t scheduler_count_ = 0;
  std::size_t taskgen_count_ = 0;
  std::size_t edge_count_ = 0;
  Rational min_edge_prob_ = 1;
  mutable std::shared_ptr<std::vector<std::vector<VertexId>>> preds_;
};

/// BFS from the initial vertex with canonical successor ordering.
/// Throws StateSpaceExceeded when more than `max_vertices` are discovered.
ExplicitMdp build_explicit(const TaskSystem& sys, std::size_t max_vertices,
                           MissDetection detection = MissDetection::Early);
ExplicitMdp build_explicit(std::shared_ptr<GameModel> model, std::size_t max_vertices);

/// Edge label: the action for Scheduler edges, "(fin,eps)" for TaskGen edges.
/// One line per edge: "src dst prob cost label".
void write_transitions(const ExplicitMdp& m, std::ostream& out);
/// One line per vertex: "id owner rendering".
void write_state_table(const ExplicitMdp& m, std::ostream& out);
/// Graphviz rendering. Throws ParameterOutOfRange above `max_vertices`.
void write_dot(const ExplicitMdp& m, std::ostream& out, std::size_t max_vertices = 2000);

}  // namespace safesched
