#include <algorithm>
#include <ostream>

#include "safesched/errors.hpp"
#include "safesched/game_graph.hpp"

namespace safesched {

ExplicitMdp::ExplicitMdp(std::shared_ptr<GameGraph> graph) : graph_(std::move(graph)) {
  size_ = graph_->size();
  for (VertexId v = 0; v < size_; ++v) {
    switch (graph_->owner(v)) {
      case Owner::Scheduler:
        ++scheduler_count_;
        edge_count_ += graph_->actions_of(v).size();
        break;
      case Owner::TaskGen:
        ++taskgen_count_;
        edge_count_ += graph_->outcomes_of(v).size();
        for (const auto& e : graph_->outcomes_of(v)) {
          if (e.probability < min_edge_prob_) min_edge_prob_ = e.probability;
        }
        break;
      case Owner::Bottom:
        edge_count_ += 1;
        break;
    }
  }
}

VertexId ExplicitMdp::successor(VertexId id, SchedulerAction a) const {
  for (const auto& e : actions(id)) {
    if (e.action == a) return e.target;
  }
  return kNoVertex;
}

const std::vector<std::vector<VertexId>>& ExplicitMdp::predecessors() const {
  if (!preds_) {
    auto preds = std::make_shared<std::vector<std::vector<VertexId>>>(size_);
    for (VertexId v = 0; v < size_; ++v) {
      if (owner(v) == Owner::TaskGen) {
        for (const auto& e : outcomes(v)) (*preds)[e.target].push_back(v);
      } else {
        for (const auto& e : actions(v)) (*preds)[e.target].push_back(v);
      }
    }
    for (auto& p : *preds) {
      std::sort(p.begin(), p.end());
      p.erase(std::unique(p.begin(), p.end()), p.end());
    }
    preds_ = std::move(preds);
  }
  return *preds_;
}

ExplicitMdp build_explicit(std::shared_ptr<GameModel> model, std::size_t max_vertices) {
  auto graph = std::make_shared<GameGraph>(std::move(model));
  // Ids are handed out in discovery order, so walking ids in order is a BFS.
  for (VertexId v = 0; v < graph->size(); ++v) {
    graph->expand(v);
    if (graph->size() > max_vertices) {
      throw StateSpaceExceeded("explicit MDP exceeds " + std::to_string(max_vertices) + " vertices");
    }
  }
  return ExplicitMdp(std::move(graph));
}

ExplicitMdp build_explicit(const TaskSystem& sys, std::size_t max_vertices, MissDetection detection) {
  return build_explicit(std::make_shared<GameModel>(sys, detection), max_vertices);
}

namespace {

const char* owner_name(Owner o) {
  switch (o) {
    case Owner::Scheduler: return "S";
    case Owner::TaskGen: return "T";
    case Owner::Bottom: return "B";
  }
  return "?";
}

}  // namespace

void write_transitions(const ExplicitMdp& m, std::ostream& out) {
  for (VertexId v = 0; v < m.size(); ++v) {
    if (m.owner(v) == Owner::TaskGen) {
      for (const auto& e : m.outcomes(v)) {
        out << v << ' ' << e.target << ' ' << to_fraction_string(e.probability) << ' '
            << to_decimal_string(e.cost) << ' ' << e.labels.to_string() << '\n';
      }
    } else {
      for (const auto& e : m.actions(v)) {
        out << v << ' ' << e.target << " 1 0 " << to_string(e.action) << '\n';
      }
    }
  }
}

void write_state_table(const ExplicitMdp& m, std::ostream& out) {
  for (VertexId v = 0; v < m.size(); ++v) {
    out << v << ' ' << owner_name(m.owner(v)) << ' ' << m.render(v) << '\n';
  }
}

void write_dot(const ExplicitMdp& m, std::ostream& out, std::size_t max_vertices) {
  if (m.size() > max_vertices) {
    throw ParameterOutOfRange("DOT export is limited to " + std::to_string(max_vertices) + " vertices");
  }
  out << "digraph game {\n";
  for (VertexId v = 0; v < m.size(); ++v) {
    const char* shape = m.owner(v) == Owner::TaskGen ? "circle" : "box";
    out << "  v" << v << " [shape=" << shape << ",label=\"" << m.render(v) << "\"];\n";
  }
  for (VertexId v = 0; v < m.size(); ++v) {
    if (m.owner(v) == Owner::TaskGen) {
      for (const auto& e : m.outcomes(v)) {
        out << "  v" << v << " -> v" << e.target << " [label=\"" << e.labels.to_string() << ' '
            << to_decimal_string(e.probability);
        if (e.cost != 0) out << " cost=" << to_decimal_string(e.cost);
        out << "\"];\n";
      }
    } else {
      for (const auto& e : m.actions(v)) {
        out << "  v" << v << " -> v" << e.target << " [label=\"" << to_string(e.action) << "\"];\n";
      }
    }
  }
  out << "}\n";
}

}  // namespace safesched
