#include "invmeas/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace invmeas {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["system"] = c.system;
  j["mode"] = c.mode;
  j["order"] = c.order;
  j["p_norm"] = to_string(c.p_norm);
  j["grid"] = c.grid_resolution;
  j["out"] = c.out_dir;
  j["seed"] = c.seed;
  j["gap_tol"] = c.solver.gap_tol;
  j["feas_tol"] = c.solver.feas_tol;
  j["diam"] = c.diam;
  j["vol"] = c.vol;
  return j;
}

ordered_json solver_json(const SdpSolution& s) {
  ordered_json j;
  j["status"] = to_string(s.status);
  j["iterations"] = s.iterations;
  j["objective"] = s.objective_value;
  j["dual_objective"] = s.dual_objective;
  j["duality_gap"] = s.duality_gap;
  j["max_eq_residual"] = s.max_eq_residual;
  j["min_block_eigenvalue"] = s.min_block_eigenvalue;
  j["message"] = s.message;
  return j;
}

void write_json(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::filesystem::path prepare_out_dir(const RunConfig& c) {
  std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Whether the observable intervals of the cells tile the observable axis
// without overlap (then densities are extracted per cell).
bool cells_partition_axis(const BenchmarkSpec& spec, int axis) {
  const auto& cells = spec.system.cells;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      const double lo = std::max(cells[i].set.box.lo[axis], cells[j].set.box.lo[axis]);
      const double hi = std::min(cells[i].set.box.hi[axis], cells[j].set.box.hi[axis]);
      if (hi - lo > 1e-9) return false;
    }
  }
  return true;
}

MomentVector interval_lebesgue(double lo, double hi, int order) {
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, lo);
  b.hi = Eigen::VectorXd::Constant(1, hi);
  return box_lebesgue_moments(b, order);
}

}  // namespace

double AcRun::density_at(double x) const {
  Eigen::VectorXd p(1);
  p[0] = x;
  for (const auto& piece : density_1d) {
    if (x >= piece.lo - 1e-12 && x <= piece.hi + 1e-12) return piece.approx.h.eval(p);
  }
  return 0.0;
}

AcRun run_ac(const RunConfig& config) {
  AcRun run{.spec = resolve_system(config.system),
            .relaxation = {},
            .solution = {},
            .total_moments = MomentVector(1, 0)};
  run.relaxation = build_ac(run.spec.system, config.order, config.p_norm);
  run.solution = solve(run.relaxation.problem, config.solver);
  run.total_moments = run.relaxation.total_moments(run.solution.x);
  run.low_mass = config.order >= 6 && run.solution.objective_value < 1e-3;

  const int r = config.order;
  const auto& sys = run.spec.system;
  if (run.spec.lifted()) {
    const int axis = sys.observed()[0];
    run.observable_marginal = run.total_moments.marginal({axis});
    if (cells_partition_axis(run.spec, axis)) {
      for (int i = 0; i < run.relaxation.num_cells; ++i) {
        const double lo = sys.cells[i].set.box.lo[axis];
        const double hi = sys.cells[i].set.box.hi[axis];
        const MomentVector mi =
            run.relaxation.cell_moments(run.solution.x, i).marginal({axis});
        run.density_1d.push_back(
            {lo, hi, extract_density(mi, interval_lebesgue(lo, hi, 2 * r), r)});
      }
    } else {
      double lo = sys.cells[0].set.box.lo[axis];
      double hi = sys.cells[0].set.box.hi[axis];
      for (const auto& cell : sys.cells) {
        lo = std::min(lo, cell.set.box.lo[axis]);
        hi = std::max(hi, cell.set.box.hi[axis]);
      }
      run.density_1d.push_back({lo, hi,
                                extract_density(*run.observable_marginal,
                                                interval_lebesgue(lo, hi, 2 * r), r)});
    }
  } else if (run.relaxation.num_cells == 1) {
    run.density_nd =
        extract_density(run.total_moments, run.relaxation.cell_reference[0], r);
  }
  return run;
}

int cmd_ac(const RunConfig& config) {
  const auto dir = prepare_out_dir(config);
  AcRun run = run_ac(config);
  const auto& sys = run.spec.system;

  // Moment table in original coordinates.
  MomentVector original = run.total_moments;
  if ((run.spec.scaling.scale.array() != 1.0).any() ||
      (run.spec.scaling.offset.array() != 0.0).any()) {
    original = affine_pushforward_moments(
        run.total_moments, run.spec.scaling.scale.cwiseInverse().asDiagonal(),
        -run.spec.scaling.offset.cwiseQuotient(run.spec.scaling.scale));
  }
  write_moment_csv((dir / "moments.csv").string(), original);

  // Density grid.
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  if (!run.density_1d.empty()) {
    header = {"x", "density"};
    const bool has_exact = static_cast<bool>(run.spec.exact_density);
    if (has_exact) header.push_back("density_exact");
    const double lo = run.density_1d.front().lo;
    const double hi = run.density_1d.back().hi;
    for (int i = 0; i < config.grid_resolution; ++i) {
      const double x =
          lo + (hi - lo) * i / static_cast<double>(config.grid_resolution - 1);
      std::vector<double> row{x, run.density_at(x)};
      if (has_exact) row.push_back(run.spec.exact_density(x));
      rows.push_back(std::move(row));
    }
  } else if (run.density_nd) {
    const int n = sys.dimension();
    header.resize(n);
    for (int i = 0; i < n; ++i) header[i] = "x" + std::to_string(i + 1);
    header.push_back("density");
    const Box& box = sys.global_box;
    std::vector<int> idx(n, 0);
    for (;;) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) {
        x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * idx[i] /
                               static_cast<double>(config.grid_resolution - 1);
      }
      if (sys.cells[0].set.contains(x)) {
        std::vector<double> row(x.data(), x.data() + n);
        row.push_back(run.density_nd->h.eval(x));
        rows.push_back(std::move(row));
      }
      int axis = n - 1;
      while (axis >= 0 && ++idx[axis] == config.grid_resolution) idx[axis--] = 0;
      if (axis < 0) break;
    }
  }
  write_csv((dir / "density_grid.csv").string(), header, rows);

  ordered_json report;
  report["schema_version"] = 1;
  report["config"] = config_json(config);
  report["solver"] = solver_json(run.solution);
  report["mass"] = run.solution.objective_value;
  if (run.observable_marginal) {
    std::vector<double> m;
    for (int k = 0; k <= 2 * config.order; ++k) {
      m.push_back((*run.observable_marginal)[MultiIndex{k}]);
    }
    report["marginal_moments"] = m;
    if (run.spec.exact_moment) {
      std::vector<double> err;
      for (int k = 0; k <= 2 * config.order; ++k) {
        err.push_back(m[k] - run.spec.exact_moment(k));
      }
      report["marginal_moment_errors"] = err;
    }
  }
  if (run.low_mass) {
    report["notice"] = "no admissible AC invariant density detected at this order";
  }
  write_json((dir / "report.json").string(), report);
  return run.solution.status == SdpStatus::Optimal ? 0 : 1;
}

SingularRun run_singular(const RunConfig& config) {
  SingularRun run{.spec = resolve_system(config.system),
                  .relaxation = {},
                  .solution = {},
                  .u = MomentVector(1, 0)};
  run.relaxation = build_singular(run.spec.system, config.order);
  run.solution = solve(run.relaxation.problem, config.solver);
  run.u = run.relaxation.u(run.solution.x);
  run.u0 = run.u.mass();
  run.v0 = run.relaxation.v(run.solution.x).mass();

  try {
    const ThresholdResult thr =
        threshold_alpha(run.spec.system.dimension(), config.order, config.diam, config.vol);
    run.model = build_christoffel(run.u, config.order, thr);
    run.grid = sublevel_grid(*run.model, run.spec.original_box, config.grid_resolution,
                             run.spec.scaling.matrix(), run.spec.scaling.offset);
  } catch (const ThresholdUnreachable& e) {
    run.threshold_unreachable = true;
    run.threshold_message = e.what();
  }
  return run;
}

int cmd_singular(const RunConfig& config) {
  const auto dir = prepare_out_dir(config);
  SingularRun run = run_singular(config);

  MomentVector u_original = run.u;
  if ((run.spec.scaling.scale.array() != 1.0).any() ||
      (run.spec.scaling.offset.array() != 0.0).any()) {
    u_original = affine_pushforward_moments(
        run.u, run.spec.scaling.scale.cwiseInverse().asDiagonal(),
        -run.spec.scaling.offset.cwiseQuotient(run.spec.scaling.scale));
  }
  write_moment_csv((dir / "u_moments.csv").string(), u_original);

  bool empty_mask = false;
  if (run.grid) {
    const int n = run.spec.system.dimension();
    std::vector<std::string> header(n);
    for (int i = 0; i < n; ++i) header[i] = "x" + std::to_string(i + 1);
    header.push_back("p_value");
    header.push_back("in_set");
    std::vector<std::vector<double>> rows;
    rows.reserve(run.grid->num_points());
    std::size_t in_count = 0;
    for (std::size_t flat = 0; flat < run.grid->num_points(); ++flat) {
      const Eigen::VectorXd x = run.grid->point(flat);
      std::vector<double> row(x.data(), x.data() + n);
      row.push_back(run.grid->p_values[flat]);
      row.push_back(run.grid->mask[flat] ? 1.0 : 0.0);
      in_count += run.grid->mask[flat];
      rows.push_back(std::move(row));
    }
    empty_mask = in_count == 0;
    write_csv((dir / "support_grid.csv").string(), header, rows);

    ordered_json sidecar;
    sidecar["d"] = run.model->d;
    sidecar["alpha"] = run.model->alpha;
    sidecar["delta"] = run.model->delta;
    sidecar["threshold"] = run.model->threshold;
    sidecar["floored_eigs"] = run.model->floored_eigenvalues;
    sidecar["grid"] = ordered_json::object();
    sidecar["grid"]["lo"] =
        std::vector<double>(run.spec.original_box.lo.data(),
                            run.spec.original_box.lo.data() + n);
    sidecar["grid"]["hi"] =
        std::vector<double>(run.spec.original_box.hi.data(),
                            run.spec.original_box.hi.data() + n);
    sidecar["grid"]["resolution"] = config.grid_resolution;
    write_json((dir / "support_grid.json").string(), sidecar);
  }

  ordered_json report;
  report["schema_version"] = 1;
  report["config"] = config_json(config);
  report["solver"] = solver_json(run.solution);
  report["u0"] = run.u0;
  report["v0"] = run.v0;
  if (run.model) {
    report["alpha"] = run.model->alpha;
    report["delta"] = run.model->delta;
    report["threshold"] = run.model->threshold;
    report["floored_eigenvalues"] = run.model->floored_eigenvalues;
  }
  if (run.threshold_unreachable) {
    report["error"] = "threshold_unreachable";
    report["error_detail"] = run.threshold_message;
  }
  if (empty_mask) report["degenerate"] = "empty sublevel set";
  write_json((dir / "report.json").string(), report);

  if (run.threshold_unreachable) return 2;
  if (run.solution.status != SdpStatus::Optimal) return 1;
  return empty_mask ? 3 : 0;
}

int cmd_simulate(const RunConfig& config) {
  const auto dir = prepare_out_dir(config);
  const BenchmarkSpec spec = resolve_system(config.system);
  const PointCloud cloud = simulate_attractor(spec, config.seed);
  write_cloud_csv((dir / "attractor.csv").string(), cloud);
  ordered_json report;
  report["schema_version"] = 1;
  report["config"] = config_json(config);
  report["points"] = cloud.points.size();
  report["dropped"] = cloud.dropped;
  write_json((dir / "report.json").string(), report);
  return cloud.points.empty() ? 1 : 0;
}

CompareResult run_compare(const GridSet& grid, const PointCloud& cloud) {
  CompareResult res;
  res.empty_mask =
      std::none_of(grid.mask.begin(), grid.mask.end(), [](bool b) { return b; });
  // Convention: an empty sublevel set has distance zero but is flagged.
  res.support_distance = res.empty_mask ? 0.0 : support_distance(grid, cloud.points);
  res.coverage = coverage_fraction(grid, cloud.points);
  return res;
}

int cmd_compare(const RunConfig& config) {
  const auto dir = prepare_out_dir(config);
  // Grid geometry comes from the sidecar written next to the CSV.
  std::filesystem::path grid_path(config.support_grid);
  std::filesystem::path sidecar_path = grid_path;
  sidecar_path.replace_extension(".json");
  std::ifstream side(sidecar_path);
  if (!side) {
    throw std::invalid_argument("cmd_compare: missing grid sidecar " +
                                sidecar_path.string());
  }
  const auto sidecar = ordered_json::parse(side);
  const auto lo = sidecar.at("grid").at("lo").get<std::vector<double>>();
  const auto hi = sidecar.at("grid").at("hi").get<std::vector<double>>();
  const int resolution = sidecar.at("grid").at("resolution").get<int>();
  const double threshold = sidecar.at("threshold").get<double>();
  const int n = static_cast<int>(lo.size());

  GridSet grid;
  for (int i = 0; i < n; ++i) {
    grid.axes.push_back(Eigen::VectorXd::LinSpaced(resolution, lo[i], hi[i]));
  }
  std::ifstream csv(grid_path);
  if (!csv) throw std::invalid_argument("cmd_compare: cannot open " + config.support_grid);
  std::string line;
  std::getline(csv, line);  // header
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::size_t start = 0;
    std::vector<double> vals;
    while (start <= line.size()) {
      const std::size_t comma = line.find(',', start);
      vals.push_back(std::stod(
          line.substr(start, comma == std::string::npos ? comma : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    grid.p_values.push_back(vals[n]);
    grid.mask.push_back(vals[n + 1] != 0.0);
  }
  (void)threshold;

  const PointCloud cloud = read_cloud_csv(config.attractor);
  const CompareResult res = run_compare(grid, cloud);

  ordered_json report;
  report["schema_version"] = 1;
  report["config"] = config_json(config);
  report["support_distance"] = res.support_distance;
  report["coverage"] = res.coverage;
  if (res.empty_mask) report["degenerate"] = "empty sublevel set";
  write_json((dir / "compare.json").string(), report);
  return res.empty_mask ? 3 : 0;
}

}  // namespace invmeas
