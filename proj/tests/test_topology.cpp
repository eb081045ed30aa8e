#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "ppc/graph.hpp"
#include "ppc/paper_scenario.hpp"

using namespace ppc;

namespace {
Graph path3() { return Graph::make(3, {{1, 2}, {2, 3}}); }

SwitchingSchedule reference_schedule() { return reference_scenario().schedule; }
}  // namespace

TEST_CASE("graph construction validates structure") {
  CHECK_THROWS_AS(Graph::make(3, {{1, 1}}), StructuralError);
  CHECK_THROWS_AS(Graph::make(3, {{1, 4}}), StructuralError);
  CHECK_THROWS_AS(Graph::make(3, {{1, 2}, {2, 1}}), StructuralError);
  CHECK_THROWS_AS(Graph::make(0, {}), StructuralError);
  // Orientation normalized and columns sorted lexicographically.
  Graph g = Graph::make(3, {{3, 2}, {2, 1}});
  CHECK(g.edges == std::vector<Edge>{{1, 2}, {2, 3}});
}

TEST_CASE("incidence matrix of the path graph") {
  IncidenceMatrix b = build_incidence(path3());
  REQUIRE(b.entries.rows() == 3);
  REQUIRE(b.entries.cols() == 2);
  CHECK(b.entries(0, 0) == 1);
  CHECK(b.entries(1, 0) == -1);
  CHECK(b.entries(2, 0) == 0);
  CHECK(b.entries(0, 1) == 0);
  CHECK(b.entries(1, 1) == 1);
  CHECK(b.entries(2, 1) == -1);
  CHECK(b.edge_order == std::vector<Edge>{{1, 2}, {2, 3}});
}

TEST_CASE("incidence matrix edge cases") {
  IncidenceMatrix none = build_incidence(Graph::make(1, {}));
  CHECK(none.entries.rows() == 1);
  CHECK(none.entries.cols() == 0);

  IncidenceMatrix one = build_incidence(Graph::make(2, {{1, 2}}));
  Eigen::MatrixXd le = edge_laplacian(one);
  REQUIRE(le.rows() == 1);
  CHECK(le(0, 0) == 2.0);
}

TEST_CASE("edge Laplacian of the path graph") {
  Eigen::MatrixXd le = edge_laplacian(build_incidence(path3()));
  REQUIRE(le.rows() == 2);
  CHECK(le(0, 0) == 2.0);
  CHECK(le(0, 1) == -1.0);
  CHECK(le(1, 0) == -1.0);
  CHECK(le(1, 1) == 2.0);

  CHECK(edge_laplacian(build_incidence(Graph::make(2, {}))).size() == 0);
}

TEST_CASE("triangle edge Laplacian has a zero eigenvalue") {
  Graph tri = Graph::make(3, {{1, 2}, {1, 3}, {2, 3}});
  Eigen::MatrixXd le = edge_laplacian(build_incidence(tri));
  REQUIRE(le.rows() == 3);
  for (int i = 0; i < 3; ++i) CHECK(le(i, i) == 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(le);
  CHECK(std::abs(eig.eigenvalues().minCoeff()) < 1e-12);  // cycle space
}

TEST_CASE("graph Laplacian") {
  Eigen::MatrixXd lap = graph_laplacian(Graph::make(2, {{1, 2}}));
  CHECK(lap(0, 0) == 1.0);
  CHECK(lap(0, 1) == -1.0);
  CHECK(lap(1, 0) == -1.0);
  CHECK(lap(1, 1) == 1.0);

  Eigen::MatrixXd lp = graph_laplacian(path3());
  Eigen::MatrixXi b = build_incidence(path3()).entries;
  CHECK((lp - (b * b.transpose()).cast<double>()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random graphs: L = B B^T exactly, column sums zero, PSD spectrum") {
  std::mt19937 rng(20240117);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        if (std::bernoulli_distribution(0.4)(rng)) edges.emplace_back(i, j);
      }
    }
    Graph g = Graph::make(n, edges);
    IncidenceMatrix b = build_incidence(g);
    CHECK((b.entries.colwise().sum().array() == 0).all());
    Eigen::MatrixXi prod = b.entries * b.entries.transpose();
    CHECK((graph_laplacian(g) - prod.cast<double>()).cwiseAbs().maxCoeff() == 0.0);
    if (!g.edges.empty()) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(edge_laplacian(b));
      CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
  }
}

TEST_CASE("connectivity") {
  CHECK(is_connected(path3()));
  CHECK(is_connected(Graph::make(1, {})));
  CHECK_FALSE(is_connected(Graph::make(5, {{1, 2}})));
}

TEST_CASE("union graph") {
  Graph a = Graph::make(3, {{1, 2}});
  Graph b = Graph::make(3, {{1, 2}, {2, 3}});
  CHECK(union_graph({a, b}).edges == std::vector<Edge>{{1, 2}, {2, 3}});
  CHECK(union_graph({b}).edges == b.edges);
  CHECK_THROWS_AS(union_graph({a, Graph::make(4, {})}), StructuralError);
}

TEST_CASE("reference graphs are individually disconnected, jointly connected") {
  SwitchingSchedule sched = reference_schedule();
  std::vector<Graph> parts;
  for (const auto& [id, g] : sched.graphs) {
    CHECK_FALSE(is_connected(g));
    parts.push_back(g);
  }
  CHECK(is_connected(union_graph(parts)));
  CHECK(is_jointly_connected(sched));
}

TEST_CASE("joint connectivity fails for never-merging cliques") {
  std::map<std::string, Graph> graphs;
  graphs.emplace("A", Graph::make(5, {{1, 2}, {3, 4}}));
  graphs.emplace("B", Graph::make(5, {{1, 3}, {2, 4}}));
  auto sched = SwitchingSchedule::make({{"A", 0.1}, {"B", 0.1}}, graphs, true,
                                       0.1, 0.2);
  CHECK_FALSE(is_jointly_connected(sched));  // node 5 isolated in the union
}

TEST_CASE("single connected segment is jointly connected") {
  std::map<std::string, Graph> graphs;
  graphs.emplace("G", path3());
  auto sched = SwitchingSchedule::make({{"G", 1.0}}, graphs, false, 1.0, 1.0);
  CHECK(is_jointly_connected(sched));
}

TEST_CASE("schedule validation") {
  std::map<std::string, Graph> graphs;
  graphs.emplace("G", path3());
  CHECK_THROWS_AS(SwitchingSchedule::make({{"G", 0.05}}, graphs, true, 0.1, 1.0),
                  StructuralError);
  CHECK_THROWS_AS(SwitchingSchedule::make({{"H", 1.0}}, graphs, true, 0.1, 1.0),
                  StructuralError);
  CHECK_THROWS_AS(SwitchingSchedule::make({{"G", 1.0}}, graphs, true, 0.1, 0.5),
                  StructuralError);
}

TEST_CASE("active graph is right-continuous and wraps cyclically") {
  SwitchingSchedule sched = reference_schedule();

  ActiveSegment a = active_graph(sched, 0.05);
  CHECK(a.graph_id == "G1");
  CHECK(a.start == doctest::Approx(0.0));
  CHECK(a.end == doctest::Approx(0.1));

  CHECK(active_graph(sched, 0.1).graph_id == "G2");  // new graph at the switch
  ActiveSegment w = active_graph(sched, 0.35);
  CHECK(w.graph_id == "G1");
  CHECK(w.start == doctest::Approx(0.3));

  CHECK_THROWS_AS(active_graph(sched, -0.1), DomainError);
}

TEST_CASE("non-cyclic horizon") {
  std::map<std::string, Graph> graphs;
  graphs.emplace("G", path3());
  auto sched = SwitchingSchedule::make({{"G", 1.0}}, graphs, false, 1.0, 1.0);
  CHECK(active_graph(sched, 0.5).graph_id == "G");
  CHECK_THROWS_AS(active_graph(sched, 1.5), ScheduleRangeError);
}

TEST_CASE("active graph partitions the horizon") {
  SwitchingSchedule sched = reference_schedule();
  double prev_end = 0.0;
  for (int k = 0; k < 40; ++k) {
    const double t = 0.025 * k;
    ActiveSegment seg = active_graph(sched, t);
    CHECK(seg.start <= t + 1e-12);
    CHECK(t < seg.end + 1e-12);
    CHECK(seg.start >= prev_end - 0.1 - 1e-12);
    prev_end = seg.end;
  }
}

TEST_CASE("cyclic joint connectivity equals connectivity of one cycle union") {
  SwitchingSchedule sched = reference_schedule();
  std::vector<Graph> cycle;
  for (const auto& seg : sched.segments) cycle.push_back(sched.graph(seg.graph_id));
  CHECK(is_jointly_connected(sched) == is_connected(union_graph(cycle)));
}
