#include "invmeas/christoffel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace invmeas {

double sphere_surface(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) /
         std::tgamma(0.5 * (n + 1));
}

double christoffel_width_bound(int n, int d, double delta, double diam) {
  return std::pow(2.0, 3.0 - delta * d / (delta + diam)) * std::pow(d, n) *
         std::pow(std::numbers::e / n, n) * std::exp(static_cast<double>(n) * n / d);
}

double christoffel_alpha(int n, int d, double delta, double vol) {
  const double ratio = static_cast<double>(d + 1) * (d + 2) * (d + 3) /
                       (static_cast<double>(d + n + 1) * (d + n + 2) * (2 * d + n + 6));
  return std::pow(delta, n) * sphere_surface(n) / vol * ratio;
}

ThresholdResult threshold_alpha(int n, int r, double diam_S, double vol_S) {
  if (diam_S <= 0.0 || diam_S > 1.0 || vol_S <= 0.0 || vol_S > 1.0) {
    throw std::invalid_argument("threshold_alpha: diam and vol must lie in (0, 1]");
  }
  const int d = r;
  double residual = std::numeric_limits<double>::infinity();
  double delta = 1.0;
  while (delta <= 1e6) {
    const double lhs = christoffel_width_bound(n, d, delta, diam_S);
    const double alpha = christoffel_alpha(n, d, delta, vol_S);
    if (lhs <= alpha) return {alpha, delta, d};
    residual = std::min(residual, lhs - alpha);
    delta = (delta < 100.0) ? delta + 1.0 : delta * 2.0;
  }
  std::ostringstream os;
  os << "threshold_alpha: width condition unreachable for n=" << n << ", d=" << d
     << " (best residual " << residual << ")";
  throw ThresholdUnreachable(residual, os.str());
}

ChristoffelModel build_christoffel(const MomentVector& u, int d,
                                   const ThresholdResult& thr) {
  ChristoffelModel model;
  model.d = d;
  model.n = u.dimension();
  model.alpha = thr.alpha;
  model.delta = thr.delta;
  model.basis = monomial_basis(model.n, d);
  model.threshold = static_cast<double>(basis_size(model.n, d)) * thr.alpha;

  const Eigen::MatrixXd M = moment_matrix(u, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("build_christoffel: eigendecomposition failed");
  }
  Eigen::VectorXd lam = es.eigenvalues();
  const double floor_value = 1e-10 * lam.maxCoeff();
  if (floor_value <= 0.0) {
    throw std::runtime_error("build_christoffel: moment matrix has no positive eigenvalue");
  }
  model.floored_eigenvalues = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < floor_value) {
      lam[i] = floor_value;
      ++model.floored_eigenvalues;
    }
  }
  // p(x) = |Lam^{-1/2} Q' v(x)|^2
  model.whitener =
      lam.array().rsqrt().matrix().asDiagonal() * es.eigenvectors().transpose();
  return model;
}

double christoffel_eval(const ChristoffelModel& model, const Eigen::VectorXd& x) {
  Eigen::VectorXd v(model.basis.size());
  for (std::size_t i = 0; i < model.basis.size(); ++i) {
    double m = 1.0;
    for (int j = 0; j < model.n; ++j) {
      for (int k = 0; k < model.basis[i][j]; ++k) m *= x[j];
    }
    v[static_cast<Eigen::Index>(i)] = m;
  }
  return (model.whitener * v).squaredNorm();
}

Eigen::VectorXd GridSet::point(std::size_t flat) const {
  const int n = static_cast<int>(axes.size());
  Eigen::VectorXd x(n);
  for (int i = n - 1; i >= 0; --i) {
    const std::size_t res = axes[i].size();
    x[i] = axes[i][flat % res];
    flat /= res;
  }
  return x;
}

std::size_t GridSet::flat_index(const Eigen::VectorXd& x) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto& ax = axes[i];
    const std::size_t res = ax.size();
    std::size_t idx = 0;
    if (res > 1) {
      const double step = (ax[res - 1] - ax[0]) / static_cast<double>(res - 1);
      const double t = (x[static_cast<Eigen::Index>(i)] - ax[0]) / step;
      const auto r = static_cast<std::int64_t>(std::llround(t));
      idx = static_cast<std::size_t>(std::clamp<std::int64_t>(r, 0, res - 1));
    }
    flat = flat * res + idx;
  }
  return flat;
}

GridSet sublevel_grid(const ChristoffelModel& model, const Box& box, int resolution,
                      const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (resolution < 2) throw std::invalid_argument("sublevel_grid: resolution < 2");
  const int n = box.dimension();
  GridSet grid;
  grid.axes.reserve(n);
  grid.cell_volume = 1.0;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    grid.axes.push_back(Eigen::VectorXd::LinSpaced(resolution, box.lo[i], box.hi[i]));
    grid.cell_volume *= (box.hi[i] - box.lo[i]) / (resolution - 1);
    total *= static_cast<std::size_t>(resolution);
  }
  grid.p_values.resize(total);
  grid.mask.resize(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    const Eigen::VectorXd x = grid.point(flat);
    const double p = christoffel_eval(model, A * x + b);
    grid.p_values[flat] = p;
    grid.mask[flat] = (p <= model.threshold);
  }
  return grid;
}

GridSet sublevel_grid(const ChristoffelModel& model, const Box& box, int resolution) {
  const int n = box.dimension();
  return sublevel_grid(model, box, resolution, Eigen::MatrixXd::Identity(n, n),
                       Eigen::VectorXd::Zero(n));
}

namespace {

// Uniform-bucket nearest-neighbor index over a point cloud.
class BucketIndex {
 public:
  explicit BucketIndex(const std::vector<Eigen::VectorXd>& pts) : pts_(pts) {
    const int n = static_cast<int>(pts[0].size());
    lo_ = pts[0];
    hi_ = pts[0];
    for (const auto& p : pts) {
      lo_ = lo_.cwiseMin(p);
      hi_ = hi_.cwiseMax(p);
    }
    const double target_buckets = std::pow(static_cast<double>(pts.size()), 1.0 / n);
    res_.resize(n);
    for (int i = 0; i < n; ++i) {
      res_[i] = std::max<int>(1, static_cast<int>(target_buckets));
    }
    buckets_.resize(total_buckets());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      buckets_[bucket_of(pts[k])].push_back(k);
    }
    min_width_ = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double w = (hi_[i] - lo_[i]) / res_[i];
      if (w > 0.0) min_width_ = std::min(min_width_, w);
    }
  }

  double nearest_distance(const Eigen::VectorXd& x) const {
    const int n = static_cast<int>(lo_.size());
    std::vector<int> center(n);
    for (int i = 0; i < n; ++i) center[i] = coord_bucket(x, i);
    double best = std::numeric_limits<double>::infinity();
    int max_ring = 0;
    for (int i = 0; i < n; ++i) max_ring = std::max(max_ring, res_[i]);
    for (int ring = 0; ring <= max_ring; ++ring) {
      // Any point in an unscanned bucket at this ring is at least
      // (ring - 1) * min bucket width away.
      if (best < std::numeric_limits<double>::infinity() &&
          static_cast<double>(ring - 1) * min_width_ > std::sqrt(best)) {
        break;
      }
      scan_ring(x, center, ring, best);
    }
    return std::sqrt(best);
  }

 private:
  std::size_t total_buckets() const {
    std::size_t t = 1;
    for (int r : res_) t *= static_cast<std::size_t>(r);
    return t;
  }

  int coord_bucket(const Eigen::VectorXd& x, int axis) const {
    const double w = hi_[axis] - lo_[axis];
    if (w <= 0.0) return 0;
    const int b = static_cast<int>((x[axis] - lo_[axis]) / w * res_[axis]);
    return std::clamp(b, 0, res_[axis] - 1);
  }

  std::size_t flat_bucket(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      flat = flat * static_cast<std::size_t>(res_[i]) + static_cast<std::size_t>(idx[i]);
    }
    return flat;
  }

  std::size_t bucket_of(const Eigen::VectorXd& x) const {
    std::vector<int> idx(lo_.size());
    for (int i = 0; i < static_cast<int>(lo_.size()); ++i) idx[i] = coord_bucket(x, i);
    return flat_bucket(idx);
  }

  void scan_ring(const Eigen::VectorXd& x, const std::vector<int>& center, int ring,
                 double& best) const {
    const int n = static_cast<int>(center.size());
    std::vector<int> idx(n);
    scan_axis(x, center, ring, 0, false, idx, best);
  }

  void scan_axis(const Eigen::VectorXd& x, const std::vector<int>& center, int ring,
                 int axis, bool on_shell, std::vector<int>& idx, double& best) const {
    const int n = static_cast<int>(center.size());
    if (axis == n) {
      if (!on_shell && ring > 0) return;
      for (std::size_t k : buckets_[flat_bucket(idx)]) {
        best = std::min(best, (pts_[k] - x).squaredNorm());
      }
      return;
    }
    for (int o = -ring; o <= ring; ++o) {
      const int v = center[axis] + o;
      if (v < 0 || v >= res_[axis]) continue;
      idx[axis] = v;
      scan_axis(x, center, ring, axis + 1, on_shell || std::abs(o) == ring, idx, best);
    }
  }

  const std::vector<Eigen::VectorXd>& pts_;
  Eigen::VectorXd lo_, hi_;
  std::vector<int> res_;
  std::vector<std::vector<std::size_t>> buckets_;
  double min_width_ = 0.0;
};

}  // namespace

double support_distance(const GridSet& grid, const std::vector<Eigen::VectorXd>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("support_distance: empty sample cloud");
  }
  BucketIndex index(samples);
  double worst = 0.0;
  for (std::size_t flat = 0; flat < grid.num_points(); ++flat) {
    if (!grid.mask[flat]) continue;
    worst = std::max(worst, index.nearest_distance(grid.point(flat)));
  }
  return worst;
}

double coverage_fraction(const GridSet& grid, const std::vector<Eigen::VectorXd>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("coverage_fraction: empty sample cloud");
  }
  std::size_t hit = 0;
  for (const auto& s : samples) {
    if (grid.mask[grid.flat_index(s)]) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(samples.size());
}

double affine_invariance_check(const MomentVector& u, int d, const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& b,
                               const std::vector<Eigen::VectorXd>& test_points) {
  const ThresholdResult dummy{1.0, 1.0, d};
  const ChristoffelModel base = build_christoffel(u, d, dummy);
  const MomentVector pushed = affine_pushforward_moments(u, A, b);
  const ChristoffelModel mapped = build_christoffel(pushed, d, dummy);
  double worst = 0.0;
  for (const auto& x : test_points) {
    const double p1 = christoffel_eval(base, x);
    const double p2 = christoffel_eval(mapped, A * x + b);
    worst = std::max(worst, std::abs(p1 - p2));
  }
  return worst;
}

}  // namespace invmeas
