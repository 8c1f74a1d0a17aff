#pragma once

#include <functional>
#include <optional>
#include <string>

#include "invmeas/invariance.hpp"

namespace invmeas {

/// Diagonal affine change of coordinates x_scaled = scale .* x + offset.
struct ScalingMap {
  Eigen::VectorXd scale;
  Eigen::VectorXd offset;

  static ScalingMap identity(int n);
  /// Maps `from` onto `to` axis by axis.
  static ScalingMap box_to_box(const Box& from, const Box& to);

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd invert(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd matrix() const { return scale.asDiagonal(); }
};

/// Simulation recipe for the reference attractor cloud.
struct SimProtocol {
  Eigen::VectorXd center;    // of the initial sampling disk (original coords)
  double radius = 0.1;
  int num_trajectories = 1;
  int burn_in = 0;           // discarded leading steps (or samples)
  int keep = 0;              // retained samples per trajectory
  double t_end = 0.0;        // continuous systems
  double dt = 1e-3;
  int keep_stride = 1;       // continuous: state recorded every stride steps
};

/// A benchmark: the scaled polynomial (or lifted piecewise-polynomial)
/// system plus the exact dynamics in original coordinates for simulation,
/// and exact densities/moments where known.
struct BenchmarkSpec {
  std::string name;
  DynamicalSystem system;  // scaled coordinates
  ScalingMap scaling;      // original -> scaled
  Box original_box;        // state constraints in original coordinates

  /// Exact update map (discrete) or vector field (continuous) in original
  /// coordinates; may involve the non-polynomial operations the lifting
  /// removes.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> true_dynamics;

  /// Exact invariant density of the observable marginal, when known.
  std::function<double(double)> exact_density;
  /// Exact moments of that density, when known.
  std::function<double(int)> exact_moment;

  SimProtocol sim;

  bool lifted() const { return !system.observed_axes.empty(); }
};

BenchmarkSpec make_circle_rotation(double w);
BenchmarkSpec make_koda(int which);  // 3, 4 or 5
BenchmarkSpec make_rotational_flow();
BenchmarkSpec make_henon(double a = 1.4, double b = 0.3);
BenchmarkSpec make_vanderpol(double a = 0.5);
BenchmarkSpec make_arneodo(double a = -5.5, double b = 3.5, double c = -1.0);

/// Builtin benchmark lookup by name; throws std::invalid_argument on
/// unknown names. Known names: circle-rotation, koda3, koda4, koda5,
/// rotational-flow, henon, vanderpol, arneodo.
BenchmarkSpec make_benchmark(const std::string& name);
std::vector<std::string> benchmark_names();

struct PointCloud {
  std::vector<Eigen::VectorXd> points;
  int dropped = 0;  // samples that left the state constraints
};

/// Iterates the exact map from x0, discards burn_in steps and keeps the
/// next n_steps iterates; points outside the original box are dropped.
PointCloud iterate_map(const BenchmarkSpec& spec, const Eigen::VectorXd& x0,
                       int n_steps, int burn_in);

/// Fixed-step fourth-order Runge-Kutta integration; the state after each
/// step is appended. Throws on state blow-up.
PointCloud integrate_ode(const BenchmarkSpec& spec, const Eigen::VectorXd& x0,
                         double t_end, double dt);

/// Reference attractor cloud per the benchmark's protocol, seeded.
PointCloud simulate_attractor(const BenchmarkSpec& spec, unsigned seed);

}  // namespace invmeas
