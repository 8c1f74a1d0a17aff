#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invmeas/moments.hpp"

namespace invmeas {

/// One coefficient of an affine symmetric-matrix map.
struct BlockEntry {
  int row;
  int col;
  double value;  // applied symmetrically when row != col
};

/// Affine PSD constraint F0 + sum_j x_j F_j >= 0. Basis matrices are
/// stored sparsely per touching variable, upper triangle only.
struct SdpBlock {
  int size = 0;
  Eigen::MatrixXd constant;  // F0, dense symmetric
  std::vector<std::pair<int, std::vector<BlockEntry>>> var_entries;

  explicit SdpBlock(int size_)
      : size(size_), constant(Eigen::MatrixXd::Zero(size_, size_)) {}
  void add_entry(int var, int row, int col, double value);
  /// F0 + sum_j x_j F_j at the given point.
  Eigen::MatrixXd assemble(const Eigen::VectorXd& x) const;
};

struct SdpEquality {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;
};

/// max c'x  s.t.  E x = d,  F0_k + sum_j x_j F_jk >= 0 for all blocks k.
struct SdpProblem {
  int num_vars = 0;
  std::vector<SdpBlock> psd_blocks;
  std::vector<SdpEquality> eq_constraints;
  Eigen::VectorXd objective;  // maximized

  /// Plain-text dump of the conic data for cross-checking against
  /// external solvers.
  std::string dump() const;
};

enum class SdpStatus { Optimal, Infeasible, NumericalFailure, MaxIter };

const char* to_string(SdpStatus s);

struct SdpSolution {
  Eigen::VectorXd x;
  double objective_value = 0.0;
  double dual_objective = 0.0;
  SdpStatus status = SdpStatus::NumericalFailure;
  double duality_gap = 0.0;        // |primal - dual|
  double max_eq_residual = 0.0;    // on the original equalities
  double min_block_eigenvalue = 0.0;
  int iterations = 0;
  std::string message;
};

struct SdpOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-7;
  int max_iter = 200;
};

/// Primal-dual interior-point method with Nesterov-Todd scaling and a
/// Mehrotra predictor-corrector. Equalities are eliminated up front by a
/// rank-revealing QR so the path-following runs on a pure matrix
/// inequality; the reported residuals are recomputed on the original
/// problem. Deterministic for fixed inputs.
SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts = {});

/// Smallest eigenvalue of a symmetric matrix; throws on non-finite input.
double psd_project_check(const Eigen::MatrixXd& M);

}  // namespace invmeas
