#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ppc/controller.hpp"
#include "ppc/graph.hpp"
#include "ppc/performance.hpp"

namespace ppc {

struct SystemState {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd v;
};

struct MonitorSettings {
  int sample_stride = 10;  // record every stride-th step
  double guard = 1e-9;     // stage-probe clamp distance from the funnel wall
};

/// Complete simulation description.
struct Scenario {
  int n_agents = 0;
  SystemState initial;
  SwitchingSchedule schedule;
  FunnelSpec funnels_y;
  FunnelSpec funnels_z;
  GainSet gains{};
  double t_end = 0.0;
  double dt = 1e-3;
  MonitorSettings monitor;
  std::string csv_path;  // optional output destination

  /// Enforces grid and sizing invariants: dt > 0, dt divides every segment
  /// duration and t_end (1e-12 relative), state lengths match n_agents and
  /// every catalog graph.
  void validate() const;
};

struct Sample {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  std::string graph_id;
  Eigen::VectorXd y;  // sized to the active graph's edge count
  Eigen::VectorXd z;
  Eigen::VectorXd u;
  double rho_y = 0.0;  // base-funnel bounds at this time
  double rho_z = 0.0;
  double lyapunov = 0.0;
};

enum class EventKind { topology_switch, guard_clamp };

struct SimEvent {
  EventKind kind;
  double t = 0.0;
  std::string detail;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<SimEvent> events;
  bool gains_feasible = true;     // certificate flags recorded at start
  bool jointly_connected = true;
};

/// Run halted mid-flight; carries the partial trajectory up to the halt.
class SimulationHalted : public Error {
public:
  SimulationHalted(std::string message, Trajectory partial)
      : Error(std::move(message)),
        partial(std::make_shared<Trajectory>(std::move(partial))) {}

  std::shared_ptr<Trajectory> partial;
};

struct EdgeMargin {
  Edge edge;
  double margin;  // min(1 - |y_hat|, 1 - |z_hat|)
};

/// Assumption-3 check: every edge of the graph strictly inside both funnels at
/// state.t. Throws InfeasibleActivation naming edge, channel, value, bound.
std::vector<EdgeMargin> check_feasibility(const Scenario& scenario,
                                          const SystemState& state,
                                          const Graph& graph);

struct Derivative {
  Eigen::VectorXd dx;  // = v
  Eigen::VectorXd dv;  // = u
};

Derivative derivative(const SystemState& state, const Graph& graph,
                      const Scenario& scenario);

/// Classical RK4 update over [state.t, state.t + dt], which must lie within
/// one schedule segment. All four stages use the same graph; stage transforms
/// are guard-clamped (clamp events appended to *events when given). Throws
/// IntegrationBlowup on non-finite stage values.
SystemState step_rk4(const SystemState& state, double dt, const Graph& graph,
                     const Scenario& scenario,
                     std::vector<SimEvent>* events = nullptr);

/// Integrates the closed loop from t = 0 to t_end. Runs check_feasibility at
/// t = 0 and at every switch against the newly active graph; records samples
/// every monitor stride and switch events. Infeasible activation or a
/// post-step funnel violation raises SimulationHalted with the partial
/// trajectory.
Trajectory simulate(const Scenario& scenario);

}  // namespace ppc
