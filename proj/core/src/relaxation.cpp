#include "invmeas/relaxation.hpp"

#include <stdexcept>

namespace invmeas {

const char* to_string(PNorm p) { return p == PNorm::Two ? "2" : "inf"; }

namespace {

// Localizing block M_{r-rj}(g w) >= 0 as an affine map of the moment
// variables of one sequence starting at var_offset.
SdpBlock localizing_block(const Polynomial& g, int n, int r, std::int64_t var_offset) {
  const int rj = (g.degree() + 1) / 2;
  const auto basis = monomial_basis(n, r - rj);
  const int m = static_cast<int>(basis.size());
  SdpBlock blk(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const MultiIndex bg = add_indices(basis[i], basis[j]);
      for (const auto& [delta, c] : g.terms()) {
        const std::int64_t var = var_offset + mono_rank(add_indices(bg, delta), n, 2 * r);
        blk.add_entry(static_cast<int>(var), i, j, c);
      }
    }
  }
  return blk;
}

void append_equalities(SdpProblem& problem, const std::vector<LinearConstraint>& rows,
                       std::int64_t cell_stride) {
  for (const auto& row : rows) {
    SdpEquality eq;
    eq.rhs = row.rhs;
    for (std::size_t cell = 0; cell < row.cell_coeffs.size(); ++cell) {
      const auto& coeffs = row.cell_coeffs[cell];
      for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] != 0.0) {
          eq.coeffs.emplace_back(static_cast<int>(cell * cell_stride + k), coeffs[k]);
        }
      }
    }
    if (!eq.coeffs.empty() || eq.rhs != 0.0) {
      problem.eq_constraints.push_back(std::move(eq));
    }
  }
}

}  // namespace

MomentVector AcRelaxation::cell_moments(const Eigen::VectorXd& x, int cell) const {
  return MomentVector(n, 2 * r, x.segment(cell * cell_stride, cell_stride));
}

MomentVector AcRelaxation::total_moments(const Eigen::VectorXd& x) const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(cell_stride);
  for (int i = 0; i < num_cells; ++i) sum += x.segment(i * cell_stride, cell_stride);
  return MomentVector(n, 2 * r, std::move(sum));
}

MomentVector SingularRelaxation::sequence(const Eigen::VectorXd& x, int which) const {
  return MomentVector(n, 2 * r, x.segment(which * stride, stride));
}

AcRelaxation build_ac(const DynamicalSystem& sys, int r, PNorm p_norm) {
  if (sys.cells.empty()) throw std::invalid_argument("build_ac: no cells");
  if (r < sys.r_min()) throw std::invalid_argument("build_ac: r below r_min");

  AcRelaxation rel;
  rel.r = r;
  rel.p_norm = p_norm;
  rel.n = sys.dimension();
  rel.num_cells = static_cast<int>(sys.cells.size());
  rel.cell_stride = basis_size(rel.n, 2 * r);

  const int n = rel.n;
  const std::int64_t L = rel.cell_stride;
  SdpProblem& p = rel.problem;
  p.num_vars = static_cast<int>(rel.num_cells * L);

  // Objective: total mass sum_i y_{i,0}.
  p.objective = Eigen::VectorXd::Zero(p.num_vars);
  for (int i = 0; i < rel.num_cells; ++i) p.objective[i * L] = 1.0;

  // Reference Lebesgue moments, normalized so the union has unit mass.
  double total_mass = 0.0;
  for (const auto& cell : sys.cells) {
    rel.cell_reference.push_back(reference_moments(cell.set, 2 * r));
    total_mass += rel.cell_reference.back().mass();
  }
  for (auto& z : rel.cell_reference) z.values() /= total_mass;

  append_equalities(p, piecewise_invariance_rows(sys, r), L);
  append_equalities(p, cell_equality_rows(sys, r), L);

  // Per-cell moment matrix and localizing blocks.
  for (int i = 0; i < rel.num_cells; ++i) {
    p.psd_blocks.push_back(localizing_block(Polynomial::constant(n, 1.0), n, r, i * L));
    for (const auto& g : sys.cells[i].set.putinar_inequalities()) {
      p.psd_blocks.push_back(localizing_block(g, n, r, i * L));
    }
  }

  // Shared norm-domination block sum_i C^p_r(y_i) >= 0.
  const auto basis_r = monomial_basis(n, r);
  const int m = static_cast<int>(basis_r.size());
  if (p_norm == PNorm::Infinity) {
    SdpBlock cblk(m);
    for (const auto& z : rel.cell_reference) cblk.constant += moment_matrix(z, r);
    for (int cell = 0; cell < rel.num_cells; ++cell) {
      for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
          const std::int64_t var =
              cell * L + mono_rank(add_indices(basis_r[i], basis_r[j]), n, 2 * r);
          cblk.add_entry(static_cast<int>(var), i, j, -1.0);
        }
      }
    }
    p.psd_blocks.push_back(std::move(cblk));
  } else {
    SdpBlock cblk(m + 1);
    for (const auto& z : rel.cell_reference) {
      cblk.constant.topLeftCorner(m, m) += moment_matrix(z, r);
    }
    cblk.constant(m, m) = static_cast<double>(rel.num_cells);
    for (int cell = 0; cell < rel.num_cells; ++cell) {
      for (int i = 0; i < m; ++i) {
        const std::int64_t var = cell * L + mono_rank(basis_r[i], n, 2 * r);
        cblk.add_entry(static_cast<int>(var), i, m, 1.0);
      }
    }
    p.psd_blocks.push_back(std::move(cblk));
  }
  return rel;
}

SingularRelaxation build_singular(const DynamicalSystem& sys, int r) {
  if (sys.cells.size() != 1) {
    throw std::invalid_argument("build_singular: single-cell systems only");
  }
  if (r < sys.r_min()) throw std::invalid_argument("build_singular: r below r_min");

  SingularRelaxation rel;
  rel.r = r;
  rel.n = sys.dimension();
  rel.stride = basis_size(rel.n, 2 * r);

  const int n = rel.n;
  const std::int64_t L = rel.stride;
  const auto& cell = sys.cells[0];

  rel.reference = reference_moments(cell.set, 2 * r);
  rel.reference.values() /= rel.reference.mass();

  SdpProblem& p = rel.problem;
  p.num_vars = static_cast<int>(4 * L);
  p.objective = Eigen::VectorXd::Zero(p.num_vars);
  p.objective[L] = 1.0;  // v_0

  // u_0 = 1.
  {
    SdpEquality eq;
    eq.coeffs.emplace_back(0, 1.0);
    eq.rhs = 1.0;
    p.eq_constraints.push_back(std::move(eq));
  }
  // Invariance of u.
  append_equalities(p, piecewise_invariance_rows(sys, r), L);
  append_equalities(p, cell_equality_rows(sys, r), L);
  // v + y = u and v + vhat = z, entrywise over N^n_{2r}.
  for (std::int64_t k = 0; k < L; ++k) {
    SdpEquality sum_u;
    sum_u.coeffs.emplace_back(static_cast<int>(L + k), 1.0);
    sum_u.coeffs.emplace_back(static_cast<int>(3 * L + k), 1.0);
    sum_u.coeffs.emplace_back(static_cast<int>(k), -1.0);
    sum_u.rhs = 0.0;
    p.eq_constraints.push_back(std::move(sum_u));
    SdpEquality sum_z;
    sum_z.coeffs.emplace_back(static_cast<int>(L + k), 1.0);
    sum_z.coeffs.emplace_back(static_cast<int>(2 * L + k), 1.0);
    sum_z.rhs = rel.reference.values()[k];
    p.eq_constraints.push_back(std::move(sum_z));
  }

  for (int seq = 0; seq < 4; ++seq) {
    const std::int64_t off = seq * L;
    p.psd_blocks.push_back(localizing_block(Polynomial::constant(n, 1.0), n, r, off));
    for (const auto& g : cell.set.putinar_inequalities()) {
      p.psd_blocks.push_back(localizing_block(g, n, r, off));
    }
  }
  return rel;
}

DensityApproximation extract_density(const MomentVector& y_opt, const MomentVector& z,
                                     int r) {
  const int n = z.dimension();
  if (y_opt.dimension() != n) {
    throw std::invalid_argument("extract_density: dimension mismatch");
  }
  const Eigen::MatrixXd Mz = moment_matrix(z, r);
  Eigen::LLT<Eigen::MatrixXd> llt(Mz);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("extract_density: reference moment matrix not positive definite");
  }
  const auto basis = monomial_basis(n, r);
  Eigen::VectorXd yr(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) yr[i] = y_opt[basis[i]];
  const Eigen::VectorXd c = llt.solve(yr);

  DensityApproximation out;
  out.r = r;
  Polynomial h(n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (c[i] != 0.0) h.set_coeff(basis[i], c[i]);
  }
  out.h = std::move(h);
  return out;
}

DensityError density_l2_compare(
    const DensityApproximation& h,
    const std::function<double(const Eigen::VectorXd&)>& h_exact,
    const std::vector<Eigen::VectorXd>& grid) {
  DensityError err;
  if (grid.empty()) return err;
  double sq_sum = 0.0;
  for (const auto& x : grid) {
    const double e = std::abs(h.h.eval(x) - h_exact(x));
    err.sup_error = std::max(err.sup_error, e);
    sq_sum += e * e;
  }
  err.l2_error = std::sqrt(sq_sum / static_cast<double>(grid.size()));
  return err;
}

}  // namespace invmeas
