#pragma once

#include <optional>
#include <string>

#include "invmeas/christoffel.hpp"
#include "invmeas/relaxation.hpp"
#include "invmeas/system_io.hpp"

namespace invmeas {

struct RunConfig {
  std::string system;
  std::string mode;  // ac | singular | simulate | compare
  std::string out_dir = ".";
  int order = 4;
  PNorm p_norm = PNorm::Infinity;
  int grid_resolution = 201;
  SdpOptions solver;
  unsigned seed = 42;
  double diam = 1.0;
  double vol = 1.0;
  std::string support_grid;  // compare: support_grid.csv path
  std::string attractor;     // compare: attractor.csv path
};

/// One extracted density piece over an interval of the observable axis.
struct DensityPiece {
  double lo = 0.0;
  double hi = 0.0;
  DensityApproximation approx;
};

struct AcRun {
  BenchmarkSpec spec;
  AcRelaxation relaxation;
  SdpSolution solution;
  MomentVector total_moments;                     // scaled coordinates
  std::optional<MomentVector> observable_marginal;  // lifted systems
  std::vector<DensityPiece> density_1d;
  std::optional<DensityApproximation> density_nd;  // full-state systems
  bool low_mass = false;

  double density_at(double x) const;  // 1-d piecewise evaluation
};

struct SingularRun {
  BenchmarkSpec spec;
  SingularRelaxation relaxation;
  SdpSolution solution;
  MomentVector u;  // scaled coordinates
  double u0 = 0.0;
  double v0 = 0.0;
  bool threshold_unreachable = false;
  std::string threshold_message;
  std::optional<ChristoffelModel> model;
  std::optional<GridSet> grid;  // original coordinates
};

struct CompareResult {
  double support_distance = 0.0;
  double coverage = 0.0;
  bool empty_mask = false;
};

AcRun run_ac(const RunConfig& config);
SingularRun run_singular(const RunConfig& config);
CompareResult run_compare(const GridSet& grid, const PointCloud& cloud);

/// Batch entry points: run, write the artifacts into config.out_dir and
/// return the process exit code (0 only for an optimal, non-degenerate run).
int cmd_ac(const RunConfig& config);
int cmd_singular(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_compare(const RunConfig& config);

}  // namespace invmeas
