#pragma once

#include <optional>
#include <vector>

#include "invmeas/moments.hpp"

namespace invmeas {

/// Threshold data produced by the degree/width iteration.
struct ThresholdResult {
  double alpha = 0.0;
  double delta = 0.0;
  int d = 0;
};

struct ThresholdUnreachable : std::runtime_error {
  double residual;
  ThresholdUnreachable(double res, const std::string& what)
      : std::runtime_error(what), residual(res) {}
};

/// Needle-polynomial width condition evaluated at (delta, d):
/// 2^{3 - delta d / (delta + diam)} d^n (e/n)^n exp(n^2/d).
double christoffel_width_bound(int n, int d, double delta, double diam);

/// Candidate threshold scale alpha(delta, d) =
/// delta^n omega_n / vol * (d+1)(d+2)(d+3) / ((d+n+1)(d+n+2)(2d+n+6)).
double christoffel_alpha(int n, int d, double delta, double vol);

/// Surface of the n-dimensional unit sphere in R^{n+1}.
double sphere_surface(int n);

/// With d fixed to r, walks delta through 1,2,...,100 then doubling up to
/// 1e6 and returns the first (alpha, delta) with width bound <= alpha.
/// Throws ThresholdUnreachable (carrying the final residual) otherwise.
ThresholdResult threshold_alpha(int n, int r, double diam_S, double vol_S);

/// Christoffel polynomial p(x) = v_d(x)' M_d(u)^{-1} v_d(x) of a moment
/// vector u, with eigenvalues of M_d(u) below 1e-10 * lambda_max floored
/// before inversion.
struct ChristoffelModel {
  int d = 0;
  int n = 0;
  Eigen::MatrixXd whitener;  // p(x) = |whitener * v_d(x)|^2
  double threshold = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
  int floored_eigenvalues = 0;
  std::vector<MultiIndex> basis;
};

ChristoffelModel build_christoffel(const MomentVector& u, int d,
                                   const ThresholdResult& thr);

double christoffel_eval(const ChristoffelModel& model, const Eigen::VectorXd& x);

/// Rectangular evaluation grid with a sublevel membership mask. Points are
/// ordered with the last axis fastest.
struct GridSet {
  std::vector<Eigen::VectorXd> axes;
  std::vector<double> p_values;
  std::vector<bool> mask;
  double cell_volume = 0.0;

  std::size_t num_points() const { return p_values.size(); }
  Eigen::VectorXd point(std::size_t flat) const;
  std::size_t flat_index(const Eigen::VectorXd& x) const;  // nearest grid node
};

/// Evaluates the model over a grid on `box` with `resolution` nodes per
/// axis; mask is p <= model.threshold. `to_model_coords` maps a grid point
/// into the model's coordinate frame before evaluation (affine invariance
/// makes the values frame-independent); pass A = I, b = 0 for none.
GridSet sublevel_grid(const ChristoffelModel& model, const Box& box, int resolution,
                      const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
GridSet sublevel_grid(const ChristoffelModel& model, const Box& box, int resolution);

/// One-sided Hausdorff proxy: max over masked grid points of the distance
/// to the nearest sample. Empty mask gives 0 (degenerate, flag upstream).
double support_distance(const GridSet& grid, const std::vector<Eigen::VectorXd>& samples);

/// Share of samples whose nearest grid node is inside the mask.
double coverage_fraction(const GridSet& grid, const std::vector<Eigen::VectorXd>& samples);

/// Max over test points of |p_u(x) - p_{u~}(A x + b)| with u~ the
/// pushforward moments of u under x -> A x + b.
double affine_invariance_check(const MomentVector& u, int d, const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& b,
                               const std::vector<Eigen::VectorXd>& test_points);

}  // namespace invmeas
