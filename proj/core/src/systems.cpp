#include "invmeas/systems.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace invmeas {

ScalingMap ScalingMap::identity(int n) {
  return {Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n)};
}

ScalingMap ScalingMap::box_to_box(const Box& from, const Box& to) {
  const int n = from.dimension();
  ScalingMap s;
  s.scale.resize(n);
  s.offset.resize(n);
  for (int i = 0; i < n; ++i) {
    s.scale[i] = (to.hi[i] - to.lo[i]) / (from.hi[i] - from.lo[i]);
    s.offset[i] = to.lo[i] - s.scale[i] * from.lo[i];
  }
  return s;
}

Eigen::VectorXd ScalingMap::apply(const Eigen::VectorXd& x) const {
  return scale.cwiseProduct(x) + offset;
}

Eigen::VectorXd ScalingMap::invert(const Eigen::VectorXd& x) const {
  return (x - offset).cwiseQuotient(scale);
}

namespace {

Box make_box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  Box b;
  b.lo = Eigen::Map<const Eigen::VectorXd>(std::data(lo), std::ssize(lo));
  b.hi = Eigen::Map<const Eigen::VectorXd>(std::data(hi), std::ssize(hi));
  return b;
}

// Components of the scaled system s o f o s^-1 (discrete) or
// D f o s^-1 (continuous vector field).
PolynomialMap scale_map(const PolynomialMap& f, const ScalingMap& s, TimeKind kind) {
  const int n = f.dimension();
  const Eigen::MatrixXd Ainv = s.scale.cwiseInverse().asDiagonal();
  const Eigen::VectorXd binv = -s.offset.cwiseQuotient(s.scale);
  std::vector<Polynomial> comps;
  comps.reserve(n);
  for (int i = 0; i < n; ++i) {
    Polynomial fi = poly_affine_substitute(f.component(i), Ainv, binv) * s.scale[i];
    if (kind == TimeKind::Discrete) {
      fi = fi + Polynomial::constant(n, s.offset[i]);
    }
    comps.push_back(std::move(fi));
  }
  return PolynomialMap(std::move(comps));
}

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }
Polynomial cst(int n, double v) { return Polynomial::constant(n, v); }

}  // namespace

BenchmarkSpec make_circle_rotation(double w) {
  if (!(w > 0.0 && w < 1.0)) {
    throw std::invalid_argument("make_circle_rotation: w must lie in (0, 1)");
  }
  const int n = 3;  // (x, y, z), z lifts x^{3/4}, y lifts the image
  BenchmarkSpec spec;
  spec.name = "circle-rotation";
  spec.original_box = make_box({0.0}, {1.0});
  spec.scaling = ScalingMap::identity(n);

  auto lift_cell = [&](double z_lo, double z_hi, double shift) {
    const double x_lo = std::pow(z_lo, 4.0 / 3.0);
    const double x_hi = std::pow(z_hi, 4.0 / 3.0);
    const double y_lo = std::pow(z_lo + shift, 4.0 / 3.0);
    const double y_hi = std::pow(z_hi + shift, 4.0 / 3.0);
    Cell cell{SemialgebraicSet::from_box(make_box({x_lo, std::min(y_lo, y_hi), z_lo},
                                                  {x_hi, std::max(y_lo, y_hi), z_hi})),
              PolynomialMap({var(n, 1), var(n, 1), var(n, 2)})};
    // z^4 = x^3 and (z + shift)^4 = y^3.
    cell.set.equalities.push_back(poly_pow(var(n, 2), 4) - poly_pow(var(n, 0), 3));
    cell.set.equalities.push_back(poly_pow(var(n, 2) + cst(n, shift), 4) -
                                  poly_pow(var(n, 1), 3));
    return cell;
  };

  DynamicalSystem sys;
  sys.time_kind = TimeKind::Discrete;
  sys.global_box = make_box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  sys.observed_axes = {0};
  sys.cells.push_back(lift_cell(0.0, 1.0 - w, w));
  sys.cells.push_back(lift_cell(1.0 - w, 1.0, w - 1.0));
  spec.system = std::move(sys);

  spec.true_dynamics = [w](const Eigen::VectorXd& x) {
    double t = std::pow(x[0], 0.75) + w;
    if (t >= 1.0) t -= 1.0;
    Eigen::VectorXd out(1);
    out[0] = std::pow(t, 4.0 / 3.0);
    return out;
  };
  spec.exact_density = [](double t) { return 0.75 * std::pow(t, -0.25); };
  spec.exact_moment = [](int k) { return 3.0 / (4.0 * k + 3.0); };
  spec.sim = {Eigen::VectorXd::Constant(1, 0.5), 0.3, 50, 100, 200, 0.0, 1e-3, 1};
  return spec;
}

BenchmarkSpec make_koda(int which) {
  const int n = 2;  // (x, v) with v the lifting variable
  BenchmarkSpec spec;
  spec.original_box = make_box({0.0}, {1.0});
  spec.scaling = ScalingMap::identity(n);

  DynamicalSystem sys;
  sys.time_kind = TimeKind::Discrete;
  sys.global_box = make_box({0.0, -0.5}, {1.0, 1.0});
  sys.observed_axes = {0};

  const Polynomial x = var(n, 0);
  const Polynomial v = var(n, 1);

  switch (which) {
    case 3: {
      spec.name = "koda3";
      const double c = std::sqrt(2.0) - 1.0;
      Cell c1{SemialgebraicSet::from_box(make_box({0.0, 0.0}, {c, 1.0})),
              PolynomialMap({v, v})};
      c1.set.equalities.push_back(v * (cst(n, 1.0) - x * x) - x * 2.0);
      Cell c2{SemialgebraicSet::from_box(make_box({c, 0.0}, {1.0, 1.0})),
              PolynomialMap({v, v})};
      c2.set.equalities.push_back(x * v * 2.0 - cst(n, 1.0) + x * x);
      sys.cells = {std::move(c1), std::move(c2)};
      spec.true_dynamics = [c](const Eigen::VectorXd& p) {
        Eigen::VectorXd out(1);
        out[0] = (p[0] <= c) ? 2.0 * p[0] / (1.0 - p[0] * p[0])
                             : (1.0 - p[0] * p[0]) / (2.0 * p[0]);
        return out;
      };
      spec.exact_density = [](double t) {
        return 4.0 / std::numbers::pi / (1.0 + t * t);
      };
      spec.exact_moment = [](int k) {
        // I_k = int_0^1 x^k / (1 + x^2) dx, I_k = 1/(k-1) - I_{k-2}.
        double i0 = std::numbers::pi / 4.0;
        double i1 = 0.5 * std::numbers::ln2;
        for (int m = 2; m <= k; ++m) {
          const double im = 1.0 / (m - 1) - i0;
          i0 = i1;
          i1 = im;
        }
        const double ik = (k == 0) ? i0 : i1;
        return 4.0 / std::numbers::pi * ik;
      };
      break;
    }
    case 4: {
      spec.name = "koda4";
      const double c = 1.0 / 3.0;
      Cell c1{SemialgebraicSet::from_box(make_box({0.0, 0.0}, {c, 1.0})),
              PolynomialMap({v, v})};
      c1.set.equalities.push_back(v * (cst(n, 1.0) - x) - x * 2.0);
      Cell c2{SemialgebraicSet::from_box(make_box({c, 0.0}, {1.0, 1.0})),
              PolynomialMap({v, v})};
      c2.set.equalities.push_back(x * v * 2.0 - cst(n, 1.0) + x);
      sys.cells = {std::move(c1), std::move(c2)};
      spec.true_dynamics = [c](const Eigen::VectorXd& p) {
        Eigen::VectorXd out(1);
        out[0] = (p[0] <= c) ? 2.0 * p[0] / (1.0 - p[0])
                             : (1.0 - p[0]) / (2.0 * p[0]);
        return out;
      };
      spec.exact_density = [](double t) { return 2.0 / ((1.0 + t) * (1.0 + t)); };
      spec.exact_moment = [](int k) {
        // K_m = int_0^1 x^m / (1 + x) dx, K_m = 1/m - K_{m-1}.
        if (k == 0) return 1.0;
        double km = std::numbers::ln2;
        for (int m = 1; m < k; ++m) km = 1.0 / m - km;
        return 2.0 * (-0.5 + k * km);
      };
      break;
    }
    case 5: {
      spec.name = "koda5";
      Cell c1{SemialgebraicSet::from_box(make_box({0.0, -0.5}, {0.5, 0.5})),
              PolynomialMap({v + cst(n, 0.5), v})};
      c1.set.equalities.push_back(poly_pow(v, 3) - cst(n, 0.125) -
                                  poly_pow(x - cst(n, 0.5), 3) * 2.0);
      Cell c2{SemialgebraicSet::from_box(make_box({0.5, -0.5}, {1.0, 0.5})),
              PolynomialMap({v + cst(n, 0.5), v})};
      c2.set.equalities.push_back(poly_pow(v, 3) - cst(n, 0.125) +
                                  poly_pow(x - cst(n, 0.5), 3) * 2.0);
      sys.cells = {std::move(c1), std::move(c2)};
      spec.true_dynamics = [](const Eigen::VectorXd& p) {
        const double u = 2.0 * std::pow(p[0] - 0.5, 3.0);
        const double w = (p[0] <= 0.5) ? 0.125 + u : 0.125 - u;
        Eigen::VectorXd out(1);
        out[0] = std::cbrt(w) + 0.5;
        return out;
      };
      spec.exact_density = [](double t) { return 12.0 * (t - 0.5) * (t - 0.5); };
      spec.exact_moment = [](int k) {
        return 12.0 * (1.0 / (k + 3.0) - 1.0 / (k + 2.0) + 0.25 / (k + 1.0));
      };
      break;
    }
    default:
      throw std::invalid_argument("make_koda: selector must be 3, 4 or 5");
  }
  spec.system = std::move(sys);
  spec.sim = {Eigen::VectorXd::Constant(1, 0.3), 0.2, 50, 100, 200, 0.0, 1e-3, 1};
  return spec;
}

BenchmarkSpec make_rotational_flow() {
  const int n = 2;
  BenchmarkSpec spec;
  spec.name = "rotational-flow";
  spec.original_box = make_box({-1.0, -1.0}, {1.0, 1.0});
  spec.scaling = ScalingMap::identity(n);

  DynamicalSystem sys;
  sys.time_kind = TimeKind::Continuous;
  sys.global_box = spec.original_box;
  sys.cells.push_back(Cell{SemialgebraicSet::unit_ball(n),
                           PolynomialMap({var(n, 1), var(n, 0) * -1.0})});
  spec.system = std::move(sys);

  spec.true_dynamics = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(2);
    out[0] = x[1];
    out[1] = -x[0];
    return out;
  };
  spec.sim = {(Eigen::VectorXd(2) << 0.5, 0.0).finished(), 0.1, 10, 0, 0,
              2.0 * std::numbers::pi, 1e-3, 10};
  return spec;
}

BenchmarkSpec make_henon(double a, double b) {
  const int n = 2;
  BenchmarkSpec spec;
  spec.name = "henon";
  spec.original_box = make_box({-3.0, -0.6}, {1.5, 0.4});
  const Box unit = make_box({-1.0, -1.0}, {1.0, 1.0});
  spec.scaling = ScalingMap::box_to_box(spec.original_box, unit);

  PolynomialMap f({cst(n, 1.0) - var(n, 0) * var(n, 0) * a + var(n, 1),
                   var(n, 0) * b});
  DynamicalSystem sys;
  sys.time_kind = TimeKind::Discrete;
  sys.global_box = unit;
  sys.cells.push_back(
      Cell{SemialgebraicSet::from_box(unit), scale_map(f, spec.scaling, TimeKind::Discrete)});
  spec.system = std::move(sys);

  spec.true_dynamics = [a, b](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(2);
    out[0] = 1.0 - a * x[0] * x[0] + x[1];
    out[1] = b * x[0];
    return out;
  };
  spec.sim = {(Eigen::VectorXd(2) << -1.0, 0.4).finished(), 0.1, 200, 100, 50,
              0.0, 1e-3, 1};
  return spec;
}

BenchmarkSpec make_vanderpol(double a) {
  const int n = 2;
  BenchmarkSpec spec;
  spec.name = "vanderpol";
  spec.original_box = make_box({-3.0, -4.0}, {3.0, 4.0});
  const Box unit = make_box({-1.0, -1.0}, {1.0, 1.0});
  spec.scaling = ScalingMap::box_to_box(spec.original_box, unit);

  PolynomialMap f({var(n, 1),
                   (cst(n, 1.0) - var(n, 0) * var(n, 0)) * var(n, 1) * a - var(n, 0)});
  DynamicalSystem sys;
  sys.time_kind = TimeKind::Continuous;
  sys.global_box = unit;
  sys.cells.push_back(Cell{SemialgebraicSet::from_box(unit),
                           scale_map(f, spec.scaling, TimeKind::Continuous)});
  spec.system = std::move(sys);

  spec.true_dynamics = [a](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(2);
    out[0] = x[1];
    out[1] = a * (1.0 - x[0] * x[0]) * x[1] - x[0];
    return out;
  };
  spec.sim = {(Eigen::VectorXd(2) << 1.0, -1.0).finished(), 0.1, 20, 10000, 0,
              20.0, 1e-3, 20};
  return spec;
}

BenchmarkSpec make_arneodo(double a, double b, double c) {
  const int n = 3;
  BenchmarkSpec spec;
  spec.name = "arneodo";
  spec.original_box = make_box({-4.0, -8.0, -12.0}, {4.0, 8.0, 12.0});
  const Box unit = make_box({-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0});
  spec.scaling = ScalingMap::box_to_box(spec.original_box, unit);

  PolynomialMap f({var(n, 1), var(n, 2),
                   var(n, 0) * -a - var(n, 1) * b - var(n, 2) +
                       poly_pow(var(n, 0), 3) * c});
  DynamicalSystem sys;
  sys.time_kind = TimeKind::Continuous;
  sys.global_box = unit;
  sys.cells.push_back(Cell{SemialgebraicSet::from_box(unit),
                           scale_map(f, spec.scaling, TimeKind::Continuous)});
  spec.system = std::move(sys);

  spec.true_dynamics = [a, b, c](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(3);
    out[0] = x[1];
    out[1] = x[2];
    out[2] = -a * x[0] - b * x[1] - x[2] + c * x[0] * x[0] * x[0];
    return out;
  };
  spec.sim = {(Eigen::VectorXd(3) << 1.0, 1.0, 1.0).finished(), 0.1, 10, 100000, 0,
              1000.0, 1e-3, 900};
  return spec;
}

BenchmarkSpec make_benchmark(const std::string& name) {
  if (name == "circle-rotation") return make_circle_rotation(std::sqrt(99.0) / 10.0);
  if (name == "koda3") return make_koda(3);
  if (name == "koda4") return make_koda(4);
  if (name == "koda5") return make_koda(5);
  if (name == "rotational-flow") return make_rotational_flow();
  if (name == "henon") return make_henon();
  if (name == "vanderpol") return make_vanderpol();
  if (name == "arneodo") return make_arneodo();
  throw std::invalid_argument("unknown benchmark system: " + name);
}

std::vector<std::string> benchmark_names() {
  return {"circle-rotation", "koda3",     "koda4",    "koda5",
          "rotational-flow", "henon",     "vanderpol", "arneodo"};
}

PointCloud iterate_map(const BenchmarkSpec& spec, const Eigen::VectorXd& x0,
                       int n_steps, int burn_in) {
  PointCloud cloud;
  Eigen::VectorXd x = x0;
  for (int k = 0; k < burn_in + n_steps; ++k) {
    x = spec.true_dynamics(x);
    if (!x.allFinite() || !spec.original_box.contains(x, 1e-12)) {
      ++cloud.dropped;
      return cloud;
    }
    if (k >= burn_in) cloud.points.push_back(x);
  }
  return cloud;
}

PointCloud integrate_ode(const BenchmarkSpec& spec, const Eigen::VectorXd& x0,
                         double t_end, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("integrate_ode: dt must be positive");
  PointCloud cloud;
  Eigen::VectorXd x = x0;
  const auto steps = static_cast<long>(std::llround(t_end / dt));
  cloud.points.reserve(steps);
  for (long k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = spec.true_dynamics(x);
    const Eigen::VectorXd k2 = spec.true_dynamics(x + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = spec.true_dynamics(x + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = spec.true_dynamics(x + dt * k3);
    x = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite() || x.norm() > 1e9) {
      throw std::runtime_error("integrate_ode: trajectory diverged");
    }
    cloud.points.push_back(x);
  }
  return cloud;
}

PointCloud simulate_attractor(const BenchmarkSpec& spec, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const int n = static_cast<int>(spec.sim.center.size());

  auto sample_initial = [&]() {
    Eigen::VectorXd dir(n);
    for (int i = 0; i < n; ++i) dir[i] = normal(rng);
    const double nrm = dir.norm();
    if (nrm > 0.0) dir /= nrm;
    const double radius = spec.sim.radius * std::pow(uniform(rng), 1.0 / n);
    return (spec.sim.center + radius * dir).eval();
  };

  PointCloud cloud;
  const bool discrete = spec.system.time_kind == TimeKind::Discrete;
  for (int t = 0; t < spec.sim.num_trajectories; ++t) {
    Eigen::VectorXd x0 = sample_initial();
    if (discrete) {
      PointCloud traj = iterate_map(spec, x0, spec.sim.keep, spec.sim.burn_in);
      cloud.dropped += traj.dropped;
      cloud.points.insert(cloud.points.end(), traj.points.begin(), traj.points.end());
    } else {
      PointCloud traj = integrate_ode(spec, x0, spec.sim.t_end, spec.sim.dt);
      for (std::size_t k = spec.sim.burn_in; k < traj.points.size();
           k += spec.sim.keep_stride) {
        if (spec.original_box.contains(traj.points[k], 1e-12)) {
          cloud.points.push_back(traj.points[k]);
        } else {
          ++cloud.dropped;
        }
      }
    }
  }
  if (cloud.points.empty()) {
    throw std::runtime_error("simulate_attractor: every trajectory diverged");
  }
  return cloud;
}

}  // namespace invmeas
