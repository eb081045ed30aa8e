#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ppc/analysis.hpp"
#include "ppc/paper_scenario.hpp"
#include "ppc/scenario_io.hpp"
#include "ppc/simulator.hpp"

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInvalidInput = 2;

void print_feasibility(const ppc::FeasibilityReport& report) {
  std::cout << "gain feasibility (alpha_bar_y = " << report.alpha_bar_y
            << ", alpha_bar_z = " << report.alpha_bar_z << ")\n"
            << "  c1 = " << report.c1 << "\n  c2 = " << report.c2
            << "\n  c3 = " << report.c3 << "\n  c4 = " << report.c4 << "\n"
            << "  feasible: " << (report.feasible ? "yes" : "no") << "\n";
}

ppc::FeasibilityReport gains_report(const ppc::Scenario& sc, bool paper_alpha_bars) {
  const double ay = paper_alpha_bars ? sc.funnels_y.base.decay
                                     : ppc::alpha_bar(sc.funnels_y.base);
  const double az = paper_alpha_bars ? sc.funnels_z.base.decay
                                     : ppc::alpha_bar(sc.funnels_z.base);
  return ppc::validate_gains(sc.gains, ay, az);
}

int run_and_report(const ppc::Scenario& scenario, const std::string& csv_path,
                   bool paper_alpha_bars) {
  const ppc::FeasibilityReport report = gains_report(scenario, paper_alpha_bars);
  print_feasibility(report);
  const bool jointly = ppc::is_jointly_connected(scenario.schedule);
  std::cout << "jointly connected: " << (jointly ? "yes" : "no") << "\n";

  ppc::Trajectory traj;
  try {
    traj = ppc::simulate(scenario);
  } catch (const ppc::SimulationHalted& halt) {
    std::cerr << "simulation halted: " << halt.what() << "\n";
    if (!csv_path.empty() && !halt.partial->samples.empty()) {
      ppc::export_csv(*halt.partial, scenario, csv_path);
      std::cerr << "partial trajectory written to " << csv_path << "\n";
    }
    return kExitViolation;
  }

  const ppc::ComplianceReport comp = ppc::compliance(traj, scenario);
  const ppc::ConsensusMetrics metrics =
      ppc::consensus_metrics(traj, scenario.funnels_y.base.rho_inf);

  std::cout << "funnel compliance\n"
            << "  position min margin: " << comp.position.min_margin << " at t = "
            << comp.position.t_at_min << ", edge (" << comp.position.edge_at_min.first
            << ", " << comp.position.edge_at_min.second << ")\n"
            << "  velocity min margin: " << comp.velocity.min_margin << " at t = "
            << comp.velocity.t_at_min << ", edge (" << comp.velocity.edge_at_min.first
            << ", " << comp.velocity.edge_at_min.second << ")\n"
            << "  violated: " << (comp.violated ? "yes" : "no") << "\n"
            << "consensus\n"
            << "  terminal max |y|: " << metrics.terminal_max_y << "\n"
            << "  terminal max |z|: " << metrics.terminal_max_z << "\n"
            << "  settled: " << (metrics.settled ? "yes" : "no");
  if (metrics.settled) std::cout << " at t = " << metrics.settle_time;
  std::cout << "\n  mean-velocity drift: " << metrics.mean_velocity_drift << "\n"
            << "events: " << traj.events.size() << " ("
            << "switches and guard clamps)\n";

  if (!csv_path.empty()) {
    const std::size_t rows = ppc::export_csv(traj, scenario, csv_path);
    std::cout << "wrote " << rows << " rows to " << csv_path << "\n";
  }
  return (!comp.violated && metrics.settled) ? kExitCertified : kExitViolation;
}

void write_funnel_bounds(const ppc::Scenario& scenario, const ppc::Trajectory& traj,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ppc::Error("cannot open '" + path + "' for writing");
  out << "t,rho_y,neg_rho_y,rho_z,neg_rho_z\n";
  char buf[160];
  for (const auto& s : traj.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                  s.rho_y, -s.rho_y, s.rho_z, -s.rho_z);
    out << buf;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Funnel-constrained consensus simulator for double-integrator "
               "agents over switching topologies"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string csv_path;
  double dt_override = 0.0;
  bool paper_alpha_bars = false;
  std::string out_dir = ".";
  if (const char* env = std::getenv("PPCSIM_OUT_DIR")) out_dir = env;

  auto* sim = app.add_subcommand("simulate", "Run a scenario file and certify it");
  sim->add_option("file", scenario_path, "scenario file")->required();
  sim->add_option("--csv", csv_path, "trajectory CSV destination");
  sim->add_option("--dt", dt_override, "override integration step");
  sim->add_flag("--paper-alpha-bars", paper_alpha_bars,
                "validate gains with the funnel decay rates instead of the exact suprema");

  auto* val = app.add_subcommand("validate-gains", "Check the gain inequalities");
  val->add_option("file", scenario_path, "scenario file")->required();
  val->add_flag("--paper-alpha-bars", paper_alpha_bars,
                "use the funnel decay rates as alpha bars");

  auto* topo = app.add_subcommand("check-topology", "Check joint connectivity");
  topo->add_option("file", scenario_path, "scenario file")->required();

  auto* repro = app.add_subcommand("reproduce-paper",
                                   "Run the bundled five-agent reference scenario");
  repro->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      ppc::Scenario sc = ppc::parse_scenario(scenario_path);
      if (dt_override > 0.0) sc.dt = dt_override;
      if (!csv_path.empty()) sc.csv_path = csv_path;
      return run_and_report(sc, sc.csv_path, paper_alpha_bars);
    }
    if (val->parsed()) {
      const ppc::Scenario sc = ppc::parse_scenario(scenario_path);
      const ppc::FeasibilityReport report = gains_report(sc, paper_alpha_bars);
      print_feasibility(report);
      return report.feasible ? kExitCertified : kExitViolation;
    }
    if (topo->parsed()) {
      const ppc::Scenario sc = ppc::parse_scenario(scenario_path);
      const bool ok = ppc::is_jointly_connected(sc.schedule);
      std::cout << "jointly connected: " << (ok ? "yes" : "no") << "\n";
      return ok ? kExitCertified : kExitViolation;
    }
    // reproduce-paper
    const ppc::Scenario sc = ppc::reference_scenario();
    std::filesystem::create_directories(out_dir);
    const std::string traj_csv = (std::filesystem::path(out_dir) / "trajectory.csv").string();
    const int status = run_and_report(sc, traj_csv, paper_alpha_bars);
    if (status == kExitCertified) {
      const ppc::Trajectory traj = ppc::simulate(sc);
      const std::string bounds_csv =
          (std::filesystem::path(out_dir) / "funnel_bounds.csv").string();
      write_funnel_bounds(sc, traj, bounds_csv);
      std::cout << "wrote funnel bounds to " << bounds_csv << "\n";
    }
    return status;
  } catch (const ppc::SimulationHalted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  } catch (const ppc::InfeasibleActivation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  } catch (const ppc::FunnelViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  } catch (const ppc::IntegrationBlowup& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  } catch (const ppc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
}
