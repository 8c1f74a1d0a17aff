#include <iostream>

#include <CLI11.hpp>

#include "invmeas/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Moment-SOS approximation of invariant measures of polynomial systems"};

  invmeas::RunConfig config;
  std::string norm = "inf";

  app.add_option("--system", config.system,
                 "builtin system name or path to a .json definition")
      ->required();
  app.add_option("--mode", config.mode, "ac | singular | simulate | compare")
      ->required()
      ->check(CLI::IsMember({"ac", "singular", "simulate", "compare"}));
  app.add_option("--order", config.order, "relaxation order r");
  app.add_option("--norm", norm, "density norm bound: 2 or inf")
      ->check(CLI::IsMember({"2", "inf"}));
  app.add_option("--grid", config.grid_resolution, "grid nodes per axis");
  app.add_option("--out", config.out_dir, "output directory");
  app.add_option("--seed", config.seed, "simulation seed");
  app.add_option("--gap-tol", config.solver.gap_tol, "solver duality gap tolerance");
  app.add_option("--feas-tol", config.solver.feas_tol, "solver feasibility tolerance");
  app.add_option("--diam", config.diam, "diameter bound of the support, in (0,1]");
  app.add_option("--vol", config.vol, "volume bound of the support, in (0,1]");
  app.add_option("--support-grid", config.support_grid,
                 "compare mode: support_grid.csv from a singular run");
  app.add_option("--attractor", config.attractor,
                 "compare mode: attractor.csv from a simulate run");

  CLI11_PARSE(app, argc, argv);
  config.p_norm = (norm == "2") ? invmeas::PNorm::Two : invmeas::PNorm::Infinity;

  try {
    if (config.mode == "ac") return invmeas::cmd_ac(config);
    if (config.mode == "singular") return invmeas::cmd_singular(config);
    if (config.mode == "simulate") return invmeas::cmd_simulate(config);
    if (config.mode == "compare") {
      if (config.support_grid.empty() || config.attractor.empty()) {
        std::cerr << "compare mode requires --support-grid and --attractor\n";
        return 64;
      }
      return invmeas::cmd_compare(config);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}
