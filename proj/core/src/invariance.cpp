#include "invmeas/invariance.hpp"

#include <stdexcept>

namespace invmeas {

std::vector<int> DynamicalSystem::observed() const {
  if (!observed_axes.empty()) return observed_axes;
  std::vector<int> all(dimension());
  for (int i = 0; i < dimension(); ++i) all[i] = i;
  return all;
}

int DynamicalSystem::map_degree() const {
  int d = 0;
  for (const auto& cell : cells) {
    for (int axis : observed()) d = std::max(d, cell.map.component(axis).degree());
  }
  return d;
}

int DynamicalSystem::r_min() const {
  int r = 1;
  for (const auto& cell : cells) {
    for (const auto& g : cell.set.putinar_inequalities()) {
      r = std::max(r, (g.degree() + 1) / 2);
    }
  }
  return r;
}

namespace {

// Test monomials x^alpha, alpha != 0, supported on the observed axes and
// of degree <= deg_cap, emitted in rank order over the full space.
std::vector<MultiIndex> test_exponents(int n, const std::vector<int>& axes,
                                       int deg_cap) {
  const auto reduced = monomial_basis(static_cast<int>(axes.size()), deg_cap);
  std::vector<MultiIndex> out;
  out.reserve(reduced.size());
  for (std::size_t i = 1; i < reduced.size(); ++i) {  // skip alpha = 0
    MultiIndex alpha(n, 0);
    for (std::size_t j = 0; j < axes.size(); ++j) alpha[axes[j]] = reduced[i][j];
    out.push_back(std::move(alpha));
  }
  return out;
}

Eigen::VectorXd disc_row(const PolynomialMap& f, const MultiIndex& alpha, int r) {
  const int n = f.dimension();
  Polynomial row = poly_compose_map(alpha, f) - Polynomial::monomial(n, alpha);
  return row.coeff_vector(2 * r);
}

Eigen::VectorXd cont_row(const PolynomialMap& f, const MultiIndex& alpha, int r) {
  const int n = f.dimension();
  Polynomial mono = Polynomial::monomial(n, alpha);
  Polynomial row(n);
  for (int i = 0; i < n; ++i) {
    row = row + poly_partial(mono, i) * f.component(i);
  }
  return row.coeff_vector(2 * r);
}

}  // namespace

std::vector<LinearConstraint> disc_invariance_rows(const PolynomialMap& f, int r) {
  if (r < 1) throw std::invalid_argument("disc_invariance_rows: r < 1");
  const int n = f.dimension();
  const int df = std::max(1, f.degree());
  std::vector<int> axes(n);
  for (int i = 0; i < n; ++i) axes[i] = i;
  std::vector<LinearConstraint> rows;
  for (const auto& alpha : test_exponents(n, axes, 2 * r / df)) {
    LinearConstraint c;
    c.cell_coeffs.push_back(disc_row(f, alpha, r));
    rows.push_back(std::move(c));
  }
  return rows;
}

std::vector<LinearConstraint> cont_invariance_rows(const PolynomialMap& f, int r) {
  if (r < 1) throw std::invalid_argument("cont_invariance_rows: r < 1");
  const int n = f.dimension();
  const int df = std::max(1, f.degree());
  std::vector<int> axes(n);
  for (int i = 0; i < n; ++i) axes[i] = i;
  std::vector<LinearConstraint> rows;
  for (const auto& alpha : test_exponents(n, axes, 2 * r + 1 - df)) {
    LinearConstraint c;
    c.cell_coeffs.push_back(cont_row(f, alpha, r));
    rows.push_back(std::move(c));
  }
  return rows;
}

std::vector<LinearConstraint> piecewise_invariance_rows(const DynamicalSystem& sys,
                                                        int r) {
  if (r < 1) throw std::invalid_argument("piecewise_invariance_rows: r < 1");
  if (sys.cells.empty()) {
    throw std::invalid_argument("piecewise_invariance_rows: no cells");
  }
  const int n = sys.dimension();
  const int df = std::max(1, sys.map_degree());
  const int deg_cap =
      (sys.time_kind == TimeKind::Discrete) ? 2 * r / df : 2 * r + 1 - df;
  std::vector<LinearConstraint> rows;
  for (const auto& alpha : test_exponents(n, sys.observed(), deg_cap)) {
    LinearConstraint c;
    c.cell_coeffs.reserve(sys.cells.size());
    for (const auto& cell : sys.cells) {
      c.cell_coeffs.push_back(sys.time_kind == TimeKind::Discrete
                                  ? disc_row(cell.map, alpha, r)
                                  : cont_row(cell.map, alpha, r));
    }
    rows.push_back(std::move(c));
  }
  return rows;
}

std::vector<LinearConstraint> cell_equality_rows(const DynamicalSystem& sys, int r) {
  const int n = sys.dimension();
  const auto basis = monomial_basis(n, 2 * r);
  std::vector<LinearConstraint> rows;
  for (std::size_t ci = 0; ci < sys.cells.size(); ++ci) {
    for (const auto& h : sys.cells[ci].set.equalities) {
      const int dh = h.degree();
      for (const auto& delta : basis) {
        if (degree(delta) + dh > 2 * r) continue;
        Polynomial shifted = h * Polynomial::monomial(n, delta);
        LinearConstraint c;
        c.cell_coeffs.assign(sys.cells.size(),
                             Eigen::VectorXd::Zero(basis_size(n, 2 * r)));
        c.cell_coeffs[ci] = shifted.coeff_vector(2 * r);
        rows.push_back(std::move(c));
      }
    }
  }
  return rows;
}

}  // namespace invmeas
