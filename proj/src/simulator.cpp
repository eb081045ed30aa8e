#include "ppc/simulator.hpp"

#include <cmath>
#include <sstream>

#include "ppc/analysis.hpp"
#include "ppc/transform.hpp"

namespace ppc {

namespace {

// Steps per segment; throws unless dt divides the duration (1e-12 relative).
std::vector<long> segment_steps(const SwitchingSchedule& schedule, double dt) {
  std::vector<long> steps;
  steps.reserve(schedule.segments.size());
  for (const auto& seg : schedule.segments) {
    const double ratio = seg.duration / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-12 * std::max(1.0, rounded)) {
      std::ostringstream os;
      os << "dt = " << dt << " does not divide segment '" << seg.graph_id
         << "' duration " << seg.duration;
      throw StructuralError(os.str());
    }
    steps.push_back(static_cast<long>(rounded));
  }
  return steps;
}

}  // namespace

void Scenario::validate() const {
  if (n_agents < 1) throw StructuralError("scenario requires n_agents >= 1");
  if (initial.x.size() != n_agents || initial.v.size() != n_agents) {
    throw StructuralError("initial state length does not match n_agents");
  }
  if (!initial.x.allFinite() || !initial.v.allFinite()) {
    throw StructuralError("initial state has non-finite entries");
  }
  for (const auto& [id, g] : schedule.graphs) {
    if (g.n_nodes != n_agents) {
      throw StructuralError("graph '" + id + "' node count differs from n_agents");
    }
  }
  if (!(dt > 0.0)) throw StructuralError("dt must be positive");
  if (!(t_end > 0.0)) throw StructuralError("t_end must be positive");
  segment_steps(schedule, dt);
  const double ratio = t_end / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-12 * std::max(1.0, ratio)) {
    throw StructuralError("dt does not divide t_end");
  }
  if (!schedule.cyclic && schedule.cycle_length() < t_end - 1e-12) {
    throw StructuralError("non-cyclic schedule ends before t_end");
  }
  if (monitor.sample_stride < 1) {
    throw StructuralError("sample_stride must be >= 1");
  }
  if (!(monitor.guard > 0.0) || monitor.guard >= 1.0) {
    throw StructuralError("guard threshold must lie in (0, 1)");
  }
}

std::vector<EdgeMargin> check_feasibility(const Scenario& scenario,
                                          const SystemState& state,
                                          const Graph& graph) {
  std::vector<EdgeMargin> margins;
  margins.reserve(graph.edges.size());
  for (const auto& edge : graph.edges) {
    const auto [i, j] = edge;
    const double y = state.x[i - 1] - state.x[j - 1];
    const double z = state.v[i - 1] - state.v[j - 1];
    const double rho_y = rho(scenario.funnels_y.for_edge(edge), state.t);
    const double rho_z = rho(scenario.funnels_z.for_edge(edge), state.t);
    const double y_hat = y / rho_y;
    const double z_hat = z / rho_z;
    if (!in_region(y_hat) || !in_region(z_hat)) {
      const bool pos = !in_region(y_hat);
      std::ostringstream os;
      os << "infeasible activation: edge (" << i << ", " << j << ") "
         << (pos ? "position" : "velocity") << " error "
         << (pos ? y : z) << " outside funnel bound "
         << (pos ? rho_y : rho_z) << " at t = " << state.t;
      throw InfeasibleActivation(os.str(), pos ? "position" : "velocity", i, j,
                                 state.t, pos ? y : z, pos ? rho_y : rho_z);
    }
    margins.push_back(
        {edge, std::min(1.0 - std::abs(y_hat), 1.0 - std::abs(z_hat))});
  }
  return margins;
}

Derivative derivative(const SystemState& state, const Graph& graph,
                      const Scenario& scenario) {
  const IncidenceMatrix incidence = build_incidence(graph);
  Eigen::VectorXd u = control(incidence, state.x, state.v, scenario.funnels_y,
                              scenario.funnels_z, state.t, scenario.gains);
  return Derivative{state.v, std::move(u)};
}

SystemState step_rk4(const SystemState& state, double dt, const Graph& graph,
                     const Scenario& scenario, std::vector<SimEvent>* events) {
  const IncidenceMatrix incidence = build_incidence(graph);
  const double guard = scenario.monitor.guard;
  int clamped = 0;

  auto accel = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                   double t, int stage) {
    Eigen::VectorXd u = control(incidence, x, v, scenario.funnels_y,
                                scenario.funnels_z, t, scenario.gains, guard,
                                &clamped);
    if (!u.allFinite()) {
      std::ostringstream os;
      os << "integration blowup: non-finite input at stage " << stage
         << ", t = " << t << ", step starting " << state.t;
      throw IntegrationBlowup(os.str());
    }
    return u;
  };

  const double t0 = state.t;
  const double half = 0.5 * dt;

  const Eigen::VectorXd a1 = accel(state.x, state.v, t0, 1);
  const Eigen::VectorXd x2 = state.x + half * state.v;
  const Eigen::VectorXd v2 = state.v + half * a1;
  const Eigen::VectorXd a2 = accel(x2, v2, t0 + half, 2);
  const Eigen::VectorXd x3 = state.x + half * v2;
  const Eigen::VectorXd v3 = state.v + half * a2;
  const Eigen::VectorXd a3 = accel(x3, v3, t0 + half, 3);
  const Eigen::VectorXd x4 = state.x + dt * v3;
  const Eigen::VectorXd v4 = state.v + dt * a3;
  const Eigen::VectorXd a4 = accel(x4, v4, t0 + dt, 4);

  SystemState next;
  next.t = t0 + dt;
  next.x = state.x + (dt / 6.0) * (state.v + 2.0 * v2 + 2.0 * v3 + v4);
  next.v = state.v + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  if (!next.x.allFinite() || !next.v.allFinite()) {
    std::ostringstream os;
    os << "integration blowup: non-finite state after step from t = " << t0;
    throw IntegrationBlowup(os.str());
  }
  if (clamped > 0 && events) {
    std::ostringstream os;
    os << clamped << " stage transform(s) guard-clamped in step from t = " << t0;
    events->push_back({EventKind::guard_clamp, t0, os.str()});
  }
  return next;
}

namespace {

Sample make_sample(const SystemState& state, const std::string& graph_id,
                   const Graph& graph, const Scenario& scenario) {
  const IncidenceMatrix incidence = build_incidence(graph);
  const Eigen::MatrixXd b = incidence.entries.cast<double>();
  Sample s;
  s.t = state.t;
  s.x = state.x;
  s.v = state.v;
  s.graph_id = graph_id;
  s.y = b.transpose() * state.x;
  s.z = b.transpose() * state.v;
  s.u = control(incidence, state.x, state.v, scenario.funnels_y,
                scenario.funnels_z, state.t, scenario.gains);
  s.rho_y = rho(scenario.funnels_y.base, state.t);
  s.rho_z = rho(scenario.funnels_z.base, state.t);
  s.lyapunov = lyapunov(state, graph, scenario.gains, scenario.funnels_y,
                        scenario.funnels_z);
  return s;
}

// Strict post-step funnel check against the graph that produced the step.
void check_observed(const SystemState& state, const Graph& graph,
                    const Scenario& scenario) {
  const IncidenceMatrix incidence = build_incidence(graph);
  const Eigen::MatrixXd b = incidence.entries.cast<double>();
  transform_edges(b.transpose() * state.x, incidence.edge_order,
                  scenario.funnels_y, state.t, Channel::position);
  transform_edges(b.transpose() * state.v, incidence.edge_order,
                  scenario.funnels_z, state.t, Channel::velocity);
}

}  // namespace

Trajectory simulate(const Scenario& scenario) {
  scenario.validate();

  Trajectory traj;
  traj.gains_feasible =
      validate_gains(scenario.gains, alpha_bar(scenario.funnels_y.base),
                     alpha_bar(scenario.funnels_z.base))
          .feasible;
  traj.jointly_connected = is_jointly_connected(scenario.schedule);

  const std::vector<long> seg_steps = segment_steps(scenario.schedule, scenario.dt);
  const long n_steps = std::lround(scenario.t_end / scenario.dt);
  const long stride = scenario.monitor.sample_stride;

  SystemState state = scenario.initial;
  state.t = 0.0;

  std::size_t seg = 0;
  long step_in_seg = 0;
  const Graph* graph = &scenario.schedule.graph(scenario.schedule.segments[0].graph_id);
  std::string graph_id = scenario.schedule.segments[0].graph_id;

  auto halt = [&](const Error& e) {
    throw SimulationHalted(e.what(), std::move(traj));
  };

  try {
    check_feasibility(scenario, state, *graph);
  } catch (const InfeasibleActivation& e) {
    halt(e);
  }
  traj.samples.push_back(make_sample(state, graph_id, *graph, scenario));

  for (long k = 0; k < n_steps; ++k) {
    try {
      state = step_rk4(state, scenario.dt, *graph, scenario, &traj.events);
    } catch (const Error& e) {
      halt(e);
    }
    state.t = static_cast<double>(k + 1) * scenario.dt;  // exact grid time
    ++step_in_seg;

    if (step_in_seg == seg_steps[seg]) {
      // Switch instant: the new graph is active from this time on.
      step_in_seg = 0;
      ++seg;
      if (seg == seg_steps.size()) {
        if (!scenario.schedule.cyclic) {
          if (k + 1 < n_steps) {
            halt(StructuralError("schedule exhausted before t_end"));
          }
          seg = seg_steps.size() - 1;  // keep last graph for the final sample
        } else {
          seg = 0;
        }
      }
      const std::string& next_id = scenario.schedule.segments[seg].graph_id;
      if (k + 1 < n_steps || scenario.schedule.cyclic) {
        graph = &scenario.schedule.graph(next_id);
        if (next_id != graph_id) {
          traj.events.push_back(
              {EventKind::topology_switch, state.t, graph_id + " -> " + next_id});
        }
        graph_id = next_id;
        try {
          check_feasibility(scenario, state, *graph);
        } catch (const InfeasibleActivation& e) {
          halt(e);
        }
      }
    } else {
      try {
        check_observed(state, *graph, scenario);
      } catch (const FunnelViolation& e) {
        halt(e);
      }
    }

    if ((k + 1) % stride == 0 || k + 1 == n_steps) {
      traj.samples.push_back(make_sample(state, graph_id, *graph, scenario));
    }
  }
  return traj;
}

}  // namespace ppc
