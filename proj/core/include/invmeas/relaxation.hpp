#pragma once

#include <functional>
#include <vector>

#include "invmeas/invariance.hpp"
#include "invmeas/sdp.hpp"

namespace invmeas {

enum class PNorm { Two, Infinity };

const char* to_string(PNorm p);

/// Moment relaxation of the mass-maximization program for absolutely
/// continuous invariant measures, one truncated moment vector per cell.
/// Variable layout: cell i occupies ranks [i*cell_stride, (i+1)*cell_stride).
struct AcRelaxation {
  int r = 0;
  PNorm p_norm = PNorm::Infinity;
  SdpProblem problem;
  int n = 0;
  int num_cells = 0;
  std::int64_t cell_stride = 0;
  /// Reference Lebesgue moments per cell at order 2r, jointly normalized
  /// to unit total mass.
  std::vector<MomentVector> cell_reference;

  MomentVector cell_moments(const Eigen::VectorXd& x, int cell) const;
  /// Sum of the per-cell moment vectors (moments of the union measure).
  MomentVector total_moments(const Eigen::VectorXd& x) const;
};

/// Relaxation of the singular-decomposition program over the four stacked
/// sequences u, v, vhat, y (in that variable order).
struct SingularRelaxation {
  int r = 0;
  SdpProblem problem;
  int n = 0;
  std::int64_t stride = 0;        // basis_size(n, 2r)
  MomentVector reference{1, 0};   // normalized Lebesgue moments of X at order 2r

  MomentVector sequence(const Eigen::VectorXd& x, int which) const;  // 0..3
  MomentVector u(const Eigen::VectorXd& x) const { return sequence(x, 0); }
  MomentVector v(const Eigen::VectorXd& x) const { return sequence(x, 1); }
  MomentVector vhat(const Eigen::VectorXd& x) const { return sequence(x, 2); }
  MomentVector y(const Eigen::VectorXd& x) const { return sequence(x, 3); }
};

AcRelaxation build_ac(const DynamicalSystem& sys, int r, PNorm p_norm);

SingularRelaxation build_singular(const DynamicalSystem& sys, int r);

/// Polynomial density extracted from a relaxation solution.
struct DensityApproximation {
  Polynomial h{1};
  int r = 0;
  PNorm p_norm = PNorm::Infinity;
};

/// Solves M_r(z) c = y^r (moments truncated to degree r) by Cholesky and
/// assembles the polynomial with coefficient vector c in rank order.
/// Throws if M_r(z) is not positive definite.
DensityApproximation extract_density(const MomentVector& y_opt, const MomentVector& z,
                                     int r);

struct DensityError {
  double sup_error = 0.0;
  double l2_error = 0.0;  // root mean square over the grid
};

DensityError density_l2_compare(const DensityApproximation& h,
                                const std::function<double(const Eigen::VectorXd&)>& h_exact,
                                const std::vector<Eigen::VectorXd>& grid);

}  // namespace invmeas
