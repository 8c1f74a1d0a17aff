#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "invmeas/polynomial.hpp"

namespace invmeas {

/// Truncated moment sequence y = (y_beta), |beta| <= max_degree,
/// stored densely in mono_rank order.
class MomentVector {
 public:
  MomentVector(int n, int max_degree);
  MomentVector(int n, int max_degree, Eigen::VectorXd values);

  int dimension() const { return n_; }
  int max_degree() const { return max_degree_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  double operator[](const MultiIndex& beta) const;
  double& at(const MultiIndex& beta);
  double mass() const { return values_[0]; }

  /// Truncation to a lower max degree (prefix in rank order).
  MomentVector truncated(int new_max_degree) const;

  /// Moments of the marginal onto the given axes: entries of y whose
  /// multi-index is supported on `axes`, re-indexed in the lower dimension.
  MomentVector marginal(const std::vector<int>& axes) const;

 private:
  int n_;
  int max_degree_;
  Eigen::VectorXd values_;
};

struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  bool nondegenerate() const;
  double volume() const;
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
};

/// Reference Lebesgue measure carried by a semialgebraic set; analytic
/// moments are available for boxes and for the unit ball.
enum class LebesgueRef { Box, UnitBall };

/// Compact basic semialgebraic set {g_j >= 0, h_k = 0} with bounding box.
struct SemialgebraicSet {
  std::vector<Polynomial> inequalities;  // g_j >= 0
  std::vector<Polynomial> equalities;    // h_k = 0
  Box box;
  std::optional<double> ball_radius_sq;  // N with N - |x|^2 among the g_j
  LebesgueRef lebesgue_ref = LebesgueRef::Box;

  int dimension() const { return box.dimension(); }

  /// ceil(deg g / 2) for each inequality, in order.
  std::vector<int> half_degrees() const;

  /// Inequalities plus the ball constraint N - |x|^2 if a radius is set
  /// and no inequality already equals it.
  std::vector<Polynomial> putinar_inequalities() const;

  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;

  /// Box set: per-axis quadratics (x_i - a_i)(b_i - x_i) >= 0 plus the
  /// ball constraint N - |x|^2 with N = sum_i max(a_i^2, b_i^2).
  static SemialgebraicSet from_box(const Box& box);
  /// Unit ball centered at the origin: 1 - |x|^2 >= 0.
  static SemialgebraicSet unit_ball(int n);
};

/// Lebesgue moments on an axis-aligned box, z_beta = prod_i
/// (b_i^{beta_i+1} - a_i^{beta_i+1}) / (beta_i + 1).
MomentVector box_lebesgue_moments(const Box& box, int order);

/// Lebesgue moments of the unit ball in R^n; odd moments vanish and the
/// even ones follow the gamma-function closed form.
MomentVector ball_lebesgue_moments(int n, int order);

/// Moments of the set's reference Lebesgue measure.
MomentVector reference_moments(const SemialgebraicSet& set, int order);

/// Riesz functional ell_y(p) = sum_beta p_beta y_beta.
double riesz(const MomentVector& y, const Polynomial& p);

/// Moment matrix M_r(y): entry (beta, gamma) = y_{beta+gamma} with rows
/// and columns over N^n_r in mono_rank order.
Eigen::MatrixXd moment_matrix(const MomentVector& y, int r);

/// Localizing matrix M_r(g y): entry (beta, gamma) = ell_y(g x^{beta+gamma})
/// over N^n_{r - ceil(deg g / 2)}.
Eigen::MatrixXd localizing_matrix(const Polynomial& g, const MomentVector& y, int r);

/// Moments of the pushforward of y under x -> A x + b (A invertible).
MomentVector affine_pushforward_moments(const MomentVector& y,
                                        const Eigen::MatrixXd& A,
                                        const Eigen::VectorXd& b);

}  // namespace invmeas
