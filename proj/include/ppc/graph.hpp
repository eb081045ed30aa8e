#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ppc/errors.hpp"

namespace ppc {

/// Undirected edge as an ordered node pair, 1-based, first < second.
using Edge = std::pair<int, int>;

/// Undirected, unweighted graph on nodes 1..n_nodes.
/// Edges are stored normalized (i < j) and sorted lexicographically, so edge
/// identity and column order are stable across graphs sharing an edge.
struct Graph {
  int n_nodes = 0;
  std::vector<Edge> edges;

  /// Validates, normalizes pair orientation, sorts, and rejects duplicates
  /// and self-loops. Throws StructuralError naming the offending edge.
  static Graph make(int n_nodes, std::vector<Edge> edges);
};

/// Node-by-edge incidence matrix with entries in {-1, 0, +1}.
/// Column l for edge (i, j), i < j, has +1 at row i-1 and -1 at row j-1.
struct IncidenceMatrix {
  Eigen::MatrixXi entries;       // n_nodes x n_edges
  std::vector<Edge> edge_order;  // column index -> node pair
};

IncidenceMatrix build_incidence(const Graph& graph);

/// Edge Laplacian B^T B; symmetric positive semidefinite, n_edges square.
Eigen::MatrixXd edge_laplacian(const IncidenceMatrix& incidence);

/// Graph Laplacian D - A with unit weights; equals B B^T.
Eigen::MatrixXd graph_laplacian(const Graph& graph);

/// Breadth-first reachability of every node from node 1.
bool is_connected(const Graph& graph);

/// Deduplicated edge union; all graphs must share n_nodes.
Graph union_graph(const std::vector<Graph>& graphs);

struct Segment {
  std::string graph_id;
  double duration = 0.0;  // seconds
};

/// Active topology at a queried time: graph id plus the absolute time span
/// [start, end) of the current segment occurrence.
struct ActiveSegment {
  std::string graph_id;
  double start = 0.0;
  double end = 0.0;
};

/// Piecewise-constant topology signal: an ordered segment sequence over a
/// catalog of graphs, optionally repeating forever.
struct SwitchingSchedule {
  std::vector<Segment> segments;
  std::map<std::string, Graph> graphs;
  bool cyclic = false;
  double dwell_min = 0.0;   // minimum dwell per segment
  double window_max = 0.0;  // joint-connectivity window length

  static SwitchingSchedule make(std::vector<Segment> segments,
                                std::map<std::string, Graph> graphs,
                                bool cyclic, double dwell_min,
                                double window_max);

  double cycle_length() const;
  const Graph& graph(const std::string& id) const;
};

/// Joint connectivity: the union of graphs within every window of length
/// <= window_max is connected. For cyclic schedules this reduces to the
/// union over one full cycle.
bool is_jointly_connected(const SwitchingSchedule& schedule);

/// Right-continuous switching signal: at a switch instant the new graph is
/// active. Cyclic schedules wrap modulo cycle length. Throws
/// ScheduleRangeError past a non-cyclic horizon.
ActiveSegment active_graph(const SwitchingSchedule& schedule, double t);

}  // namespace ppc
