#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "ppc/scenario_io.hpp"

using namespace ppc;

namespace {

std::string scenario_file(const std::string& name) {
  return std::string(SCENARIO_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Single targeted substitution; fails the test if the needle is absent.
std::string patched(std::string text, const std::string& needle,
                    const std::string& replacement) {
  const std::size_t at = text.find(needle);
  REQUIRE(at != std::string::npos);
  return text.replace(at, needle.size(), replacement);
}

}  // namespace

TEST_CASE("bundled reference scenario parses to the expected model") {
  Scenario sc = parse_scenario(scenario_file("paper.toml"));
  CHECK(sc.n_agents == 5);
  CHECK(sc.initial.x[0] == -0.5);
  CHECK(sc.initial.v[3] == -3.0);
  CHECK(sc.funnels_y.base.decay == 1.5);
  CHECK(sc.funnels_z.base.decay == 0.8);
  CHECK(sc.gains.h1 == 10.0);
  CHECK(sc.gains.a3 == 0.5);
  CHECK(sc.schedule.cyclic);
  CHECK(sc.schedule.segments.size() == 3);
  CHECK(sc.schedule.graph("G1").edges == std::vector<Edge>{{1, 2}, {2, 3}});
  CHECK(sc.schedule.graph("G3").edges == std::vector<Edge>{{1, 5}, {4, 5}});
  CHECK(sc.t_end == 5.0);
  CHECK(sc.dt == 0.001);
  CHECK(sc.monitor.sample_stride == 10);
}

TEST_CASE("equilibrium and infeasible-start fixtures") {
  CHECK_NOTHROW(parse_scenario(scenario_file("equilibrium.toml")));
  // Well-formed file, infeasible start state: Assumption-3 pre-check fires.
  CHECK_THROWS_AS(parse_scenario(scenario_file("infeasible_start.toml")),
                  InfeasibleActivation);
}

TEST_CASE("non-dividing dt is rejected") {
  std::string text = patched(read_file(scenario_file("paper.toml")),
                             "dt = 0.001", "dt = 0.03");
  CHECK_THROWS_AS(parse_scenario_text(text, "patched"), ParseError);
}

TEST_CASE("inverted funnel bounds name the funnel table") {
  std::string text = patched(read_file(scenario_file("paper.toml")),
                             "[funnels.position]\nrho0 = 5.0",
                             "[funnels.position]\nrho0 = 0.05");
  try {
    parse_scenario_text(text, "patched");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("funnels.position") != std::string::npos);
  }
}

TEST_CASE("unknown keys are rejected") {
  std::string text = read_file(scenario_file("paper.toml"));
  text += "\n[extras]\nmystery = 1.0\n";
  try {
    parse_scenario_text(text, "patched");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("mystery") != std::string::npos);
  }
}

TEST_CASE("missing table is reported") {
  std::string text = patched(read_file(scenario_file("paper.toml")),
                             "[gains]", "[gains_typo]");
  CHECK_THROWS_AS(parse_scenario_text(text, "patched"), ParseError);
}

TEST_CASE("syntax errors carry line numbers") {
  const std::string text = "[agents]\ncount ==== what\n";
  try {
    parse_scenario_text(text, "bad");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bad:2") != std::string::npos);
  }
}

TEST_CASE("per-edge funnel overrides parse") {
  std::string text = read_file(scenario_file("paper.toml"));
  text += "\n[funnels.position.edges.\"1-2\"]\nrho0 = 6.0\nrho_inf = 0.2\ndecay = 1.0\n";
  Scenario sc = parse_scenario_text(text, "patched");
  CHECK(sc.funnels_y.for_edge({1, 2}).rho0 == 6.0);
  CHECK(sc.funnels_y.for_edge({2, 3}).rho0 == 5.0);
}

TEST_CASE("parsed scenarios simulate without start-time precondition failures") {
  Scenario sc = parse_scenario(scenario_file("equilibrium.toml"));
  CHECK_NOTHROW(simulate(sc));
}
