#include "ppc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace ppc {

Graph Graph::make(int n_nodes, std::vector<Edge> edges) {
  if (n_nodes < 1) {
    throw StructuralError("graph must have at least one node");
  }
  for (auto& [i, j] : edges) {
    if (i == j) {
      std::ostringstream os;
      os << "self-loop on node " << i;
      throw StructuralError(os.str());
    }
    if (i > j) std::swap(i, j);
    if (i < 1 || j > n_nodes) {
      std::ostringstream os;
      os << "edge (" << i << ", " << j << ") outside node range 1.." << n_nodes;
      throw StructuralError(os.str());
    }
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    std::ostringstream os;
    os << "duplicate edge (" << dup->first << ", " << dup->second << ")";
    throw StructuralError(os.str());
  }
  return Graph{n_nodes, std::move(edges)};
}

IncidenceMatrix build_incidence(const Graph& graph) {
  const int m = static_cast<int>(graph.edges.size());
  IncidenceMatrix out;
  out.entries = Eigen::MatrixXi::Zero(graph.n_nodes, m);
  out.edge_order = graph.edges;
  for (int l = 0; l < m; ++l) {
    const auto& [i, j] = graph.edges[static_cast<std::size_t>(l)];
    out.entries(i - 1, l) = 1;
    out.entries(j - 1, l) = -1;
  }
  return out;
}

Eigen::MatrixXd edge_laplacian(const IncidenceMatrix& incidence) {
  return (incidence.entries.transpose() * incidence.entries).cast<double>();
}

Eigen::MatrixXd graph_laplacian(const Graph& graph) {
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(graph.n_nodes, graph.n_nodes);
  for (const auto& [i, j] : graph.edges) {
    lap(i - 1, i - 1) += 1.0;
    lap(j - 1, j - 1) += 1.0;
    lap(i - 1, j - 1) -= 1.0;
    lap(j - 1, i - 1) -= 1.0;
  }
  return lap;
}

bool is_connected(const Graph& graph) {
  if (graph.n_nodes == 1) return true;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(graph.n_nodes) + 1);
  for (const auto& [i, j] : graph.edges) {
    adj[static_cast<std::size_t>(i)].push_back(j);
    adj[static_cast<std::size_t>(j)].push_back(i);
  }
  std::vector<bool> seen(static_cast<std::size_t>(graph.n_nodes) + 1, false);
  std::queue<int> frontier;
  frontier.push(1);
  seen[1] = true;
  int reached = 1;
  while (!frontier.empty()) {
    int node = frontier.front();
    frontier.pop();
    for (int next : adj[static_cast<std::size_t>(node)]) {
      if (!seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = true;
        ++reached;
        frontier.push(next);
      }
    }
  }
  return reached == graph.n_nodes;
}

Graph union_graph(const std::vector<Graph>& graphs) {
  if (graphs.empty()) {
    throw StructuralError("union of an empty graph list");
  }
  const int n = graphs.front().n_nodes;
  std::vector<Edge> edges;
  for (const auto& g : graphs) {
    if (g.n_nodes != n) {
      std::ostringstream os;
      os << "union over mismatched node counts " << n << " and " << g.n_nodes;
      throw StructuralError(os.str());
    }
    edges.insert(edges.end(), g.edges.begin(), g.edges.end());
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph{n, std::move(edges)};
}

SwitchingSchedule SwitchingSchedule::make(std::vector<Segment> segments,
                                          std::map<std::string, Graph> graphs,
                                          bool cyclic, double dwell_min,
                                          double window_max) {
  if (segments.empty()) {
    throw StructuralError("schedule has no segments");
  }
  if (!(dwell_min > 0.0)) {
    throw StructuralError("dwell_min must be positive");
  }
  double total = 0.0;
  for (const auto& seg : segments) {
    if (seg.duration < dwell_min) {
      std::ostringstream os;
      os << "segment '" << seg.graph_id << "' duration " << seg.duration
         << " below dwell_min " << dwell_min;
      throw StructuralError(os.str());
    }
    if (!graphs.contains(seg.graph_id)) {
      throw StructuralError("segment references unknown graph '" +
                            seg.graph_id + "'");
    }
    total += seg.duration;
  }
  if (cyclic && total > window_max * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "cycle length " << total << " exceeds window_max " << window_max;
    throw StructuralError(os.str());
  }
  const int n = graphs.begin()->second.n_nodes;
  for (const auto& [id, g] : graphs) {
    if (g.n_nodes != n) {
      throw StructuralError("graph '" + id + "' node count differs from catalog");
    }
  }
  return SwitchingSchedule{std::move(segments), std::move(graphs), cyclic,
                           dwell_min, window_max};
}

double SwitchingSchedule::cycle_length() const {
  double total = 0.0;
  for (const auto& seg : segments) total += seg.duration;
  return total;
}

const Graph& SwitchingSchedule::graph(const std::string& id) const {
  auto it = graphs.find(id);
  if (it == graphs.end()) {
    throw StructuralError("unknown graph id '" + id + "'");
  }
  return it->second;
}

bool is_jointly_connected(const SwitchingSchedule& schedule) {
  std::vector<Graph> all;
  all.reserve(schedule.graphs.size());
  if (schedule.cyclic) {
    // One full cycle covers every window.
    for (const auto& seg : schedule.segments) {
      all.push_back(schedule.graph(seg.graph_id));
    }
    return is_connected(union_graph(all));
  }
  // Non-cyclic: chunk consecutive segments into windows of length at most
  // window_max and require each window's union to be connected.
  std::vector<Graph> window;
  double span = 0.0;
  for (const auto& seg : schedule.segments) {
    if (!window.empty() && span + seg.duration > schedule.window_max) {
      if (!is_connected(union_graph(window))) return false;
      window.clear();
      span = 0.0;
    }
    window.push_back(schedule.graph(seg.graph_id));
    span += seg.duration;
  }
  return is_connected(union_graph(window));
}

ActiveSegment active_graph(const SwitchingSchedule& schedule, double t) {
  if (t < 0.0) {
    throw DomainError("active_graph requires t >= 0");
  }
  const double cycle = schedule.cycle_length();
  double offset = 0.0;
  double local = t;
  if (schedule.cyclic) {
    const double wraps = std::floor(t / cycle);
    offset = wraps * cycle;
    local = t - offset;
  } else if (t >= cycle) {
    std::ostringstream os;
    os << "t = " << t << " beyond schedule horizon " << cycle;
    throw ScheduleRangeError(os.str());
  }
  double start = 0.0;
  for (const auto& seg : schedule.segments) {
    const double end = start + seg.duration;
    if (local < end || &seg == &schedule.segments.back()) {
      return ActiveSegment{seg.graph_id, offset + start, offset + end};
    }
    start = end;
  }
  throw ScheduleRangeError("empty schedule");  // unreachable for valid schedules
}

}  // namespace ppc
