#include "ppc/paper_scenario.hpp"

namespace ppc {

Scenario reference_scenario() {
  Scenario sc;
  sc.n_agents = 5;
  sc.initial.t = 0.0;
  sc.initial.x = Eigen::VectorXd{{-0.5, 1.0, 2.5, 1.5, 2.0}};
  sc.initial.v = Eigen::VectorXd{{1.5, -0.5, -2.5, -3.0, -2.0}};

  std::map<std::string, Graph> graphs;
  graphs.emplace("G1", Graph::make(5, {{1, 2}, {2, 3}}));
  graphs.emplace("G2", Graph::make(5, {{3, 4}}));
  graphs.emplace("G3", Graph::make(5, {{4, 5}, {1, 5}}));
  sc.schedule = SwitchingSchedule::make(
      {{"G1", 0.1}, {"G2", 0.1}, {"G3", 0.1}}, std::move(graphs),
      /*cyclic=*/true, /*dwell_min=*/0.1, /*window_max=*/0.3);

  sc.funnels_y.base = PerformanceFunction::make(5.0, 0.1, 1.5);
  sc.funnels_z.base = PerformanceFunction::make(5.0, 0.1, 0.8);

  sc.gains = GainSet::make(10.0, 1.0, 6.0, 1.5, 1.6, 1.5, /*phi=*/1.0,
                           /*a2=*/0.1, /*a3=*/0.5, /*a4=*/0.1);

  sc.t_end = 5.0;
  sc.dt = 1e-3;
  sc.monitor.sample_stride = 10;
  return sc;
}

}  // namespace ppc
