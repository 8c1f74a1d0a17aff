#pragma once

#include <vector>

#include "invmeas/moments.hpp"
#include "invmeas/polynomial.hpp"

namespace invmeas {

enum class TimeKind { Discrete, Continuous };

struct Cell {
  SemialgebraicSet set;
  PolynomialMap map;
};

/// Piecewise polynomial system on a union of semialgebraic cells.
/// Single-cell systems are the plain discrete/continuous case.
///
/// `observed_axes` lists the state coordinates the invariance functional
/// is tested on. For lifted systems (division or root operators replaced
/// by a lifting variable plus an algebraic equality) only the original
/// state coordinate carries dynamics, so only monomials in that
/// coordinate produce invariance rows.
struct DynamicalSystem {
  TimeKind time_kind = TimeKind::Discrete;
  std::vector<Cell> cells;
  Box global_box;
  std::vector<int> observed_axes;  // defaults to all axes when empty

  int dimension() const { return global_box.dimension(); }
  std::vector<int> observed() const;
  /// max over cells and observed axes of deg f_i.
  int map_degree() const;
  /// max over cells of r_min = max(1, ceil(deg g_j / 2)).
  int r_min() const;
};

/// One linear equality over stacked per-cell moment vectors:
/// sum_i <coeffs[i], y_i> = rhs. Each coefficient vector is indexed by
/// mono_rank over N^n_{2r}.
struct LinearConstraint {
  std::vector<Eigen::VectorXd> cell_coeffs;
  double rhs = 0.0;
};

/// Rows ell_y(f(x)^alpha) - ell_y(x^alpha) = 0 for all alpha != 0 with
/// deg(f^alpha) <= 2r, in alpha rank order.
std::vector<LinearConstraint> disc_invariance_rows(const PolynomialMap& f, int r);

/// Rows sum_i ell_y(d(x^alpha)/dx_i f_i) = 0 for all alpha != 0 with
/// |alpha| - 1 + deg f <= 2r.
std::vector<LinearConstraint> cont_invariance_rows(const PolynomialMap& f, int r);

/// Piecewise rows sum_{cells} I_{y_i}(x^alpha) = 0, with alpha restricted
/// to the observed axes; reduces to the single-cell constructions when
/// there is one cell.
std::vector<LinearConstraint> piecewise_invariance_rows(const DynamicalSystem& sys,
                                                        int r);

/// Per-cell moment equalities ell_{y_i}(h x^delta) = 0 for every cell
/// equality polynomial h and every delta with deg(h x^delta) <= 2r.
std::vector<LinearConstraint> cell_equality_rows(const DynamicalSystem& sys, int r);

}  // namespace invmeas
