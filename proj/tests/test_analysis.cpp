#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ppc/analysis.hpp"
#include "ppc/paper_scenario.hpp"

using namespace ppc;

namespace {
GainSet reference_gains() {
  return GainSet::make(10.0, 1.0, 6.0, 1.5, 1.6, 1.5, 1.0, 0.1, 0.5, 0.1);
}

const FunnelSpec kPos{PerformanceFunction::make(5.0, 0.1, 1.5), {}};
const FunnelSpec kVel{PerformanceFunction::make(5.0, 0.1, 0.8), {}};

Scenario short_reference(double t_end) {
  Scenario sc = reference_scenario();
  sc.t_end = t_end;
  return sc;
}
}  // namespace

TEST_CASE("compliance on a clean short run") {
  Scenario sc = short_reference(1.0);
  Trajectory traj = simulate(sc);
  ComplianceReport report = compliance(traj, sc);
  CHECK_FALSE(report.violated);
  CHECK(report.position.min_margin > 0.0);
  CHECK(report.velocity.min_margin > 0.0);
}

TEST_CASE("compliance flags an injected violation") {
  Scenario sc = short_reference(0.5);
  Trajectory traj = simulate(sc);
  // Push one sampled edge outside its funnel.
  Sample& tampered = traj.samples[5];
  REQUIRE(tampered.y.size() > 0);
  tampered.y[0] = rho(sc.funnels_y.base, tampered.t) + 0.5;
  ComplianceReport report = compliance(traj, sc);
  CHECK(report.violated);
  CHECK(report.position.violated);
  CHECK(report.position.t_at_min == doctest::Approx(tampered.t));
}

TEST_CASE("compliance requires samples") {
  Scenario sc = short_reference(0.5);
  Trajectory empty;
  CHECK_THROWS_AS(compliance(empty, sc), StructuralError);
}

TEST_CASE("lyapunov at the origin is zero") {
  SystemState state{0.0, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)};
  Graph g = Graph::make(3, {{1, 2}, {2, 3}});
  CHECK(lyapunov(state, g, reference_gains(), kPos, kVel) == 0.0);
}

TEST_CASE("lyapunov hand evaluation") {
  // One edge at y_hat = 0.5, v = 0:
  // V = h1/2 * ||x||^2 + h5/2 * ln(3)^2.
  SystemState state{0.0, Eigen::VectorXd{{1.25, -1.25}}, Eigen::VectorXd::Zero(2)};
  Graph g = Graph::make(2, {{1, 2}});
  const double expected =
      0.5 * 10.0 * 3.125 + 0.5 * 1.6 * std::log(3.0) * std::log(3.0);
  CHECK(lyapunov(state, g, reference_gains(), kPos, kVel) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("lyapunov nonnegative over feasible probe states") {
  Graph g = Graph::make(2, {{1, 2}});
  GainSet gains = reference_gains();
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) {
      SystemState state{0.0, Eigen::VectorXd{{0.5 * i, 0.0}},
                        Eigen::VectorXd{{0.5 * j, 0.0}}};
      CHECK(lyapunov(state, g, gains, kPos, kVel) >= 0.0);
    }
  }
}

TEST_CASE("lyapunov propagates funnel violations") {
  SystemState state{0.0, Eigen::VectorXd{{6.0, 0.0}}, Eigen::VectorXd::Zero(2)};
  Graph g = Graph::make(2, {{1, 2}});
  CHECK_THROWS_AS(lyapunov(state, g, reference_gains(), kPos, kVel),
                  FunnelViolation);
}

TEST_CASE("consensus metrics on an equilibrium trajectory") {
  Scenario sc = reference_scenario();
  sc.initial.x = Eigen::VectorXd::Constant(5, 1.0);
  sc.initial.v = Eigen::VectorXd::Zero(5);
  sc.t_end = 0.5;
  Trajectory traj = simulate(sc);
  ConsensusMetrics m = consensus_metrics(traj, 0.1);
  CHECK(m.terminal_max_y == 0.0);
  CHECK(m.terminal_max_z == 0.0);
  CHECK(m.settled);
  CHECK(m.settle_time == 0.0);
  CHECK(m.mean_velocity_drift == 0.0);
}

TEST_CASE("consensus metrics flag diverging synthetic data") {
  Scenario sc = short_reference(0.5);
  Trajectory traj = simulate(sc);
  // Inflate the terminal relative positions beyond any sensible threshold.
  for (auto& s : traj.samples) {
    if (s.y.size()) s.y.array() += 100.0;
  }
  ConsensusMetrics m = consensus_metrics(traj, 0.1);
  CHECK_FALSE(m.settled);
  CHECK(m.terminal_max_y > 100.0 - 5.0);
}

TEST_CASE("settle time is monotone nonincreasing in threshold") {
  Scenario sc = short_reference(2.0);
  Trajectory traj = simulate(sc);
  double prev_settle = std::numeric_limits<double>::infinity();
  for (double threshold : {0.5, 1.0, 2.0, 4.0}) {
    ConsensusMetrics m = consensus_metrics(traj, threshold);
    if (m.settled) {
      CHECK(m.settle_time <= prev_settle);
      prev_settle = m.settle_time;
    }
  }
}

TEST_CASE("csv export schema and row count") {
  Scenario sc = short_reference(0.5);
  Trajectory traj = simulate(sc);
  const auto path = std::filesystem::temp_directory_path() / "ppc_test_traj.csv";
  const std::size_t rows = export_csv(traj, sc, path.string());
  CHECK(rows == traj.samples.size());

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.starts_with("t,x_1,x_2,x_3,x_4,x_5,v_1"));
  CHECK(header.find("graph_id") != std::string::npos);
  // Catalog union: 5 edges, each with a y and z column.
  CHECK(header.find("y_1-2") != std::string::npos);
  CHECK(header.find("z_4-5") != std::string::npos);
  CHECK(header.find(",rho_y,rho_z,V") != std::string::npos);

  std::size_t data_rows = 0;
  std::string line;
  while (std::getline(in, line)) ++data_rows;
  CHECK(data_rows == rows);
  std::filesystem::remove(path);
}

TEST_CASE("csv round trip is lossless") {
  Scenario sc = short_reference(0.3);
  Trajectory traj = simulate(sc);
  const auto path = std::filesystem::temp_directory_path() / "ppc_roundtrip.csv";
  export_csv(traj, sc, path.string());

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  for (const auto& sample : traj.samples) {
    REQUIRE(std::getline(in, line));
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    CHECK(std::strtod(field.c_str(), nullptr) == sample.t);
    for (Eigen::Index i = 0; i < sample.x.size(); ++i) {
      std::getline(row, field, ',');
      CHECK(std::strtod(field.c_str(), nullptr) == sample.x[i]);
    }
    for (Eigen::Index i = 0; i < sample.v.size(); ++i) {
      std::getline(row, field, ',');
      CHECK(std::strtod(field.c_str(), nullptr) == sample.v[i]);
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("csv export of an empty trajectory writes only the header") {
  Scenario sc = short_reference(0.3);
  Trajectory empty;
  const auto path = std::filesystem::temp_directory_path() / "ppc_empty.csv";
  CHECK(export_csv(empty, sc, path.string()) == 0);
  std::ifstream in(path);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1);
  std::filesystem::remove(path);
}
