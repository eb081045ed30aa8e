#pragma once

#include <string>

#include "ppc/controller.hpp"
#include "ppc/graph.hpp"
#include "ppc/performance.hpp"
#include "ppc/simulator.hpp"

namespace ppc {

struct ChannelCompliance {
  double min_margin = 0.0;  // min over samples and edges of rho(t) - |s_l(t)|
  double t_at_min = 0.0;
  Edge edge_at_min{0, 0};
  bool violated = false;    // min_margin <= 0
};

struct ComplianceReport {
  ChannelCompliance position;
  ChannelCompliance velocity;
  bool violated = false;
};

/// Funnel-compliance margins at every recorded sample against the per-edge
/// funnels of the sample's active graph.
ComplianceReport compliance(const Trajectory& traj, const Scenario& scenario);

/// Potential diagnostic
///   V = 1/2 (h1 ||x||^2 + (h3 - h2) x'v + h4 ||v||^2)
///       + h5/2 ||eps_y(y_hat)||^2 + h6/2 ||eps_z(z_hat)||^2.
/// Diagnostic only; monotone decrease is not asserted anywhere.
double lyapunov(const SystemState& state, const Graph& graph,
                const GainSet& gains, const FunnelSpec& funnels_y,
                const FunnelSpec& funnels_z);

struct ConsensusMetrics {
  double terminal_max_y = 0.0;
  double terminal_max_z = 0.0;
  double settle_time = 0.0;  // first t after which max edge |y| stays below threshold
  bool settled = false;
  double mean_velocity_drift = 0.0;  // max_t |mean(v(t)) - mean(v(0))|
};

ConsensusMetrics consensus_metrics(const Trajectory& traj, double threshold);

/// Writes the trajectory as CSV with a schema fixed by the catalog union of
/// edges: t, x_1..x_N, v_1..v_N, graph_id, per-edge y_{i-j}, z_{i-j} (blank
/// when inactive), rho_y, rho_z, V. Values printed with 17 significant
/// digits. Returns the number of data rows written.
std::size_t export_csv(const Trajectory& traj, const Scenario& scenario,
                       const std::string& destination);

}  // namespace ppc
