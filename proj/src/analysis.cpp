#include "ppc/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "ppc/transform.hpp"

namespace ppc {

ComplianceReport compliance(const Trajectory& traj, const Scenario& scenario) {
  if (traj.samples.empty()) {
    throw StructuralError("compliance requires a nonempty trajectory");
  }
  ComplianceReport report;
  report.position.min_margin = std::numeric_limits<double>::infinity();
  report.velocity.min_margin = std::numeric_limits<double>::infinity();

  for (const auto& sample : traj.samples) {
    const Graph& graph = scenario.schedule.graph(sample.graph_id);
    for (std::size_t l = 0; l < graph.edges.size(); ++l) {
      const Edge& edge = graph.edges[l];
      const auto idx = static_cast<Eigen::Index>(l);
      const double my = rho(scenario.funnels_y.for_edge(edge), sample.t) -
                        std::abs(sample.y[idx]);
      const double mz = rho(scenario.funnels_z.for_edge(edge), sample.t) -
                        std::abs(sample.z[idx]);
      if (my < report.position.min_margin) {
        report.position = {my, sample.t, edge, my <= 0.0};
      }
      if (mz < report.velocity.min_margin) {
        report.velocity = {mz, sample.t, edge, mz <= 0.0};
      }
    }
  }
  if (std::isinf(report.position.min_margin)) {
    // No edge ever active; vacuously compliant.
    report.position.min_margin = report.velocity.min_margin = 0.0;
  }
  report.violated = report.position.violated || report.velocity.violated;
  return report;
}

double lyapunov(const SystemState& state, const Graph& graph,
                const GainSet& gains, const FunnelSpec& funnels_y,
                const FunnelSpec& funnels_z) {
  const IncidenceMatrix incidence = build_incidence(graph);
  const Eigen::MatrixXd b = incidence.entries.cast<double>();
  const TransformBundle ty =
      transform_edges(b.transpose() * state.x, incidence.edge_order, funnels_y,
                      state.t, Channel::position);
  const TransformBundle tz =
      transform_edges(b.transpose() * state.v, incidence.edge_order, funnels_z,
                      state.t, Channel::velocity);
  // Quadratic term on the disagreement components. The absolute state drifts
  // with the conserved mean velocity, which the edge dynamics never see, so
  // evaluating the form on mean-removed coordinates is what keeps V a bounded,
  // decreasing certificate along a converging run.
  const Eigen::VectorXd xd = state.x.array() - state.x.mean();
  const Eigen::VectorXd vd = state.v.array() - state.v.mean();
  const double quad = gains.h1 * xd.squaredNorm() +
                      (gains.h3 - gains.h2) * xd.dot(vd) +
                      gains.h4 * vd.squaredNorm();
  return 0.5 * quad + 0.5 * gains.h5 * ty.eps.squaredNorm() +
         0.5 * gains.h6 * tz.eps.squaredNorm();
}

ConsensusMetrics consensus_metrics(const Trajectory& traj, double threshold) {
  if (traj.samples.empty()) {
    throw StructuralError("consensus_metrics requires a nonempty trajectory");
  }
  ConsensusMetrics m;
  const Sample& last = traj.samples.back();
  m.terminal_max_y = last.y.size() ? last.y.cwiseAbs().maxCoeff() : 0.0;
  m.terminal_max_z = last.z.size() ? last.z.cwiseAbs().maxCoeff() : 0.0;

  const double mean_v0 = traj.samples.front().v.mean();
  m.mean_velocity_drift = 0.0;
  for (const auto& sample : traj.samples) {
    m.mean_velocity_drift =
        std::max(m.mean_velocity_drift, std::abs(sample.v.mean() - mean_v0));
  }

  // Scan from the end: settle time is the earliest sample after which the
  // max edge |y| never re-exceeds the threshold.
  m.settled = false;
  m.settle_time = last.t;
  for (auto it = traj.samples.rbegin(); it != traj.samples.rend(); ++it) {
    const double max_y = it->y.size() ? it->y.cwiseAbs().maxCoeff() : 0.0;
    if (max_y >= threshold) break;
    m.settled = true;
    m.settle_time = it->t;
  }
  return m;
}

namespace {
void append_number(std::string& row, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  row += buf;
}
}  // namespace

std::size_t export_csv(const Trajectory& traj, const Scenario& scenario,
                       const std::string& destination) {
  std::vector<Graph> catalog;
  catalog.reserve(scenario.schedule.graphs.size());
  for (const auto& [id, g] : scenario.schedule.graphs) catalog.push_back(g);
  const std::vector<Edge> all_edges = union_graph(catalog).edges;

  std::ofstream out(destination, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + destination + "' for writing");
  }

  std::string row = "t";
  for (int i = 1; i <= scenario.n_agents; ++i) row += ",x_" + std::to_string(i);
  for (int i = 1; i <= scenario.n_agents; ++i) row += ",v_" + std::to_string(i);
  row += ",graph_id";
  for (const auto& [i, j] : all_edges) {
    row += ",y_" + std::to_string(i) + "-" + std::to_string(j);
  }
  for (const auto& [i, j] : all_edges) {
    row += ",z_" + std::to_string(i) + "-" + std::to_string(j);
  }
  row += ",rho_y,rho_z,V\n";
  out << row;

  std::size_t rows = 0;
  for (const auto& sample : traj.samples) {
    const Graph& graph = scenario.schedule.graph(sample.graph_id);
    std::map<Edge, Eigen::Index> active;
    for (std::size_t l = 0; l < graph.edges.size(); ++l) {
      active[graph.edges[l]] = static_cast<Eigen::Index>(l);
    }
    row.clear();
    append_number(row, sample.t);
    for (Eigen::Index i = 0; i < sample.x.size(); ++i) {
      row += ',';
      append_number(row, sample.x[i]);
    }
    for (Eigen::Index i = 0; i < sample.v.size(); ++i) {
      row += ',';
      append_number(row, sample.v[i]);
    }
    row += ',' + sample.graph_id;
    for (const auto& edge : all_edges) {
      row += ',';
      if (auto it = active.find(edge); it != active.end()) {
        append_number(row, sample.y[it->second]);
      }
    }
    for (const auto& edge : all_edges) {
      row += ',';
      if (auto it = active.find(edge); it != active.end()) {
        append_number(row, sample.z[it->second]);
      }
    }
    row += ',';
    append_number(row, sample.rho_y);
    row += ',';
    append_number(row, sample.rho_z);
    row += ',';
    append_number(row, sample.lyapunov);
    row += '\n';
    out << row;
    ++rows;
  }
  out.flush();
  if (!out) {
    throw Error("write failure on '" + destination + "'");
  }
  return rows;
}

}  // namespace ppc
