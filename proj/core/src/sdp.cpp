#include "invmeas/sdp.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace invmeas {

void SdpBlock::add_entry(int var, int row, int col, double value) {
  if (value == 0.0) return;
  if (row > col) std::swap(row, col);
  for (auto& [v, entries] : var_entries) {
    if (v == var) {
      entries.push_back({row, col, value});
      return;
    }
  }
  var_entries.push_back({var, {{row, col, value}}});
}

Eigen::MatrixXd SdpBlock::assemble(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd M = constant;
  for (const auto& [var, entries] : var_entries) {
    const double xv = x[var];
    for (const auto& e : entries) {
      M(e.row, e.col) += xv * e.value;
      if (e.row != e.col) M(e.col, e.row) += xv * e.value;
    }
  }
  return M;
}

std::string SdpProblem::dump() const {
  std::ostringstream os;
  os.precision(17);
  os << "conic-lmi 1\n";
  os << "nvars " << num_vars << "\n";
  os << "objective maximize";
  for (int j = 0; j < objective.size(); ++j) os << " " << objective[j];
  os << "\n";
  os << "nequalities " << eq_constraints.size() << "\n";
  for (const auto& eq : eq_constraints) {
    os << "eq";
    for (const auto& [idx, v] : eq.coeffs) os << " " << idx << ":" << v;
    os << " rhs " << eq.rhs << "\n";
  }
  os << "nblocks " << psd_blocks.size() << "\n";
  for (std::size_t k = 0; k < psd_blocks.size(); ++k) {
    const auto& blk = psd_blocks[k];
    os << "block " << k << " size " << blk.size << "\n";
    for (int i = 0; i < blk.size; ++i) {
      for (int j = i; j < blk.size; ++j) {
        if (blk.constant(i, j) != 0.0) {
          os << "F -1 " << i << " " << j << " " << blk.constant(i, j) << "\n";
        }
      }
    }
    for (const auto& [var, entries] : blk.var_entries) {
      for (const auto& e : entries) {
        os << "F " << var << " " << e.row << " " << e.col << " " << e.value << "\n";
      }
    }
  }
  return os.str();
}

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::NumericalFailure: return "numerical_failure";
    case SdpStatus::MaxIter: return "max_iter";
  }
  return "unknown";
}

double psd_project_check(const Eigen::MatrixXd& M) {
  if (!M.allFinite()) {
    throw std::invalid_argument("psd_project_check: non-finite entries");
  }
  if (M.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

constexpr double kStaticReg = 1e-12;

struct ReducedBlock {
  int s = 0;
  Eigen::MatrixXd F0;
  // Reduced basis matrices, block l at columns [l*s, (l+1)*s).
  Eigen::MatrixXd basis;

  Eigen::Map<const Eigen::MatrixXd> vec_view(int n_red) const {
    return {basis.data(), static_cast<Eigen::Index>(s) * s, n_red};
  }
};

struct BlockState {
  Eigen::MatrixXd S, Z;
  Eigen::MatrixXd R, Rt;       // W = R R', W^{-1} = Rt Rt', Rt' = R^{-1}
  Eigen::VectorXd lambda;      // shared spectrum of the scaled point
  Eigen::MatrixXd H;           // scaled basis Rt' F_l Rt, stacked like basis
  Eigen::MatrixXd Rs;          // F0 + A(xi) - S
  Eigen::MatrixXd dS_aff, dZ_aff, dS, dZ;
  Eigen::LLT<Eigen::MatrixXd> lltS;
};

// Largest step alpha with S + alpha * dS staying positive definite,
// computed from the spectrum of L^{-1} dS L^{-T}.
double max_step(const Eigen::LLT<Eigen::MatrixXd>& lltS, const Eigen::MatrixXd& dS) {
  const auto& L = lltS.matrixL();
  Eigen::MatrixXd T = L.solve(dS);
  T = L.solve(T.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (T + T.transpose()), Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues().minCoeff();
  if (lam_min >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lam_min;
}

struct Reduction {
  Eigen::VectorXd x0;      // particular solution of E x = d
  Eigen::MatrixXd B;       // orthonormal null-space basis of E
  bool consistent = true;
  double residual = 0.0;
};

Reduction eliminate_equalities(const SdpProblem& p) {
  const int n = p.num_vars;
  const int m = static_cast<int>(p.eq_constraints.size());
  Reduction red;
  if (m == 0) {
    red.x0 = Eigen::VectorXd::Zero(n);
    red.B = Eigen::MatrixXd::Identity(n, n);
    return red;
  }
  Eigen::MatrixXd Et = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd d(m);
  for (int i = 0; i < m; ++i) {
    for (const auto& [idx, v] : p.eq_constraints[i].coeffs) Et(idx, i) += v;
    d[i] = p.eq_constraints[i].rhs;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Et);
  qr.setThreshold(1e-11);
  const int rank = static_cast<int>(qr.rank());
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  // E' P = Q R, hence E x = d becomes R' (Q' x) = P' d.
  Eigen::MatrixXd R1 = qr.matrixR().topRows(rank).template triangularView<Eigen::Upper>();
  Eigen::VectorXd dp = qr.colsPermutation().transpose() * d;
  Eigen::VectorXd w1 = R1.leftCols(rank)
                           .transpose()
                           .triangularView<Eigen::Lower>()
                           .solve(dp.head(rank));
  red.residual = (R1.transpose() * w1 - dp).norm();
  red.consistent = red.residual <= 1e-8 * (1.0 + d.norm());
  red.x0 = Q.leftCols(rank) * w1;
  red.B = Q.rightCols(n - rank);
  return red;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts) {
  SdpSolution sol;
  const int n = problem.num_vars;
  if (problem.objective.size() != n) {
    throw std::invalid_argument("solve: objective size mismatch");
  }

  auto finalize = [&](const Eigen::VectorXd& x) {
    sol.x = x;
    sol.objective_value = problem.objective.dot(x);
    double eq_res = 0.0;
    for (const auto& eq : problem.eq_constraints) {
      double v = -eq.rhs;
      for (const auto& [idx, c] : eq.coeffs) v += c * x[idx];
      eq_res = std::max(eq_res, std::abs(v));
    }
    sol.max_eq_residual = eq_res;
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto& blk : problem.psd_blocks) {
      min_eig = std::min(min_eig, psd_project_check(blk.assemble(x)));
    }
    sol.min_block_eigenvalue =
        problem.psd_blocks.empty() ? 0.0 : min_eig;
  };

  Reduction red = eliminate_equalities(problem);
  if (!red.consistent) {
    sol.status = SdpStatus::Infeasible;
    sol.message = "equality constraints are inconsistent";
    finalize(red.x0);
    return sol;
  }

  const int nr = static_cast<int>(red.B.cols());
  const double c0 = problem.objective.dot(red.x0);
  Eigen::VectorXd c_red = red.B.transpose() * problem.objective;

  // Reduced constant and basis per block.
  std::vector<ReducedBlock> blocks;
  blocks.reserve(problem.psd_blocks.size());
  for (const auto& blk : problem.psd_blocks) {
    ReducedBlock rb;
    rb.s = blk.size;
    rb.F0 = blk.assemble(red.x0);
    rb.basis = Eigen::MatrixXd::Zero(rb.s, static_cast<Eigen::Index>(rb.s) * nr);
    for (const auto& [var, entries] : blk.var_entries) {
      for (int l = 0; l < nr; ++l) {
        const double w = red.B(var, l);
        if (w == 0.0) continue;
        auto piece = rb.basis.middleCols(static_cast<Eigen::Index>(l) * rb.s, rb.s);
        for (const auto& e : entries) {
          piece(e.row, e.col) += w * e.value;
          if (e.row != e.col) piece(e.col, e.row) += w * e.value;
        }
      }
    }
    blocks.push_back(std::move(rb));
  }

  if (nr == 0) {
    // Fully determined by the equalities.
    finalize(red.x0);
    const bool feasible = sol.min_block_eigenvalue >= -opts.feas_tol;
    sol.status = feasible ? SdpStatus::Optimal : SdpStatus::Infeasible;
    sol.dual_objective = sol.objective_value;
    if (!feasible) sol.message = "pinned point violates a PSD block";
    return sol;
  }

  const int K = static_cast<int>(blocks.size());
  double total_dim = 0.0;
  for (const auto& b : blocks) total_dim += b.s;

  // Infeasible start.
  std::vector<BlockState> st(K);
  double zeta = 10.0;
  for (const auto& b : blocks) zeta = std::max(zeta, 2.0 * b.F0.norm());
  zeta = std::max(zeta, c_red.norm());
  for (int k = 0; k < K; ++k) {
    st[k].S = zeta * Eigen::MatrixXd::Identity(blocks[k].s, blocks[k].s);
    st[k].Z = zeta * Eigen::MatrixXd::Identity(blocks[k].s, blocks[k].s);
  }
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(nr);

  const double obj_scale = 1.0 + c_red.norm();
  double reg = kStaticReg;
  sol.status = SdpStatus::MaxIter;
  sol.message = "iteration limit reached";

  // Keep the best iterate seen; late iterations can lose dual accuracy to
  // roundoff once mu is far below the target gap.
  Eigen::VectorXd xi_best = xi;
  double merit_best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  // Centering floor: never aim mu below a fraction of the gap target,
  // where the scaled reconstructions drown in roundoff.
  const double mu_floor = 0.25 * opts.gap_tol / total_dim;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    // Residuals.
    double primal_res = 0.0;
    Eigen::VectorXd g = c_red;
    double dual_val = c0;
    double gap_SZ = 0.0;
    for (int k = 0; k < K; ++k) {
      const auto& rb = blocks[k];
      Eigen::MatrixXd assembled = rb.F0;
      assembled.reshaped() += rb.vec_view(nr) * xi;
      st[k].Rs = assembled - st[k].S;
      primal_res = std::max(primal_res, st[k].Rs.norm() / (1.0 + rb.F0.norm()));
      g.noalias() += rb.vec_view(nr).transpose() * st[k].Z.reshaped();
      dual_val += (st[k].Z.array() * rb.F0.array()).sum();
      gap_SZ += (st[k].S.array() * st[k].Z.array()).sum();
    }
    const double dual_res = g.norm() / obj_scale;
    const double primal_val = c_red.dot(xi) + c0;
    const double mu = gap_SZ / total_dim;
    sol.iterations = iter;
    sol.objective_value = primal_val;
    sol.dual_objective = dual_val;
    sol.duality_gap = std::abs(primal_val - dual_val);

    if (std::getenv("INVMEAS_SDP_TRACE")) {
      std::cerr << "iter " << iter << " mu=" << mu << " gap=" << sol.duality_gap
                << " pres=" << primal_res << " dres=" << dual_res
                << " P=" << primal_val << " D=" << dual_val << "\n";
    }
    if (!std::isfinite(primal_val) || !std::isfinite(dual_val) || !std::isfinite(mu)) {
      sol.status = SdpStatus::NumericalFailure;
      sol.message = "non-finite iterate";
      break;
    }
    const double merit =
        std::max({sol.duality_gap, primal_res, dual_res});
    if (merit < merit_best) {
      merit_best = merit;
      xi_best = xi;
      stalled = 0;
    } else {
      ++stalled;
    }
    if (sol.duality_gap <= opts.gap_tol && primal_res <= opts.feas_tol &&
        dual_res <= opts.feas_tol) {
      sol.status = SdpStatus::Optimal;
      sol.message = "converged";
      break;
    }
    if (stalled >= 10) {
      sol.status = SdpStatus::NumericalFailure;
      sol.message = "progress stalled";
      break;
    }
    if (xi.norm() > 1e12) {
      sol.status = primal_res > 1e-6 ? SdpStatus::Infeasible
                                     : SdpStatus::NumericalFailure;
      sol.message = "iterates diverged";
      break;
    }

    // Nesterov-Todd scaling point per block and scaled basis.
    bool chol_ok = true;
    for (int k = 0; k < K; ++k) {
      auto& bs = st[k];
      bs.lltS.compute(bs.S);
      Eigen::LLT<Eigen::MatrixXd> lltZ(bs.Z);
      if (bs.lltS.info() != Eigen::Success || lltZ.info() != Eigen::Success) {
        chol_ok = false;
        break;
      }
      Eigen::MatrixXd Ls = bs.lltS.matrixL();
      Eigen::MatrixXd Lz = lltZ.matrixL();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Lz.transpose() * Ls,
                                            Eigen::ComputeFullU | Eigen::ComputeFullV);
      Eigen::VectorXd lam = svd.singularValues();
      Eigen::VectorXd inv_sqrt = lam.array().sqrt().inverse();
      bs.R = Ls * svd.matrixV() * inv_sqrt.asDiagonal();
      bs.Rt = Lz * svd.matrixU() * inv_sqrt.asDiagonal();
      bs.lambda = lam;
      const int s = blocks[k].s;
      bs.H.resize(s, static_cast<Eigen::Index>(s) * nr);
      Eigen::MatrixXd tmp = bs.Rt.transpose() * blocks[k].basis;
      for (int l = 0; l < nr; ++l) {
        bs.H.middleCols(static_cast<Eigen::Index>(l) * s, s).noalias() =
            tmp.middleCols(static_cast<Eigen::Index>(l) * s, s) * bs.Rt;
      }
    }
    if (!chol_ok) {
      sol.status = SdpStatus::NumericalFailure;
      sol.message = "Cholesky breakdown of an iterate";
      break;
    }

    // Schur complement M = sum_k <W^-1 F_l W^-1, F_m> = sum_k H' H.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nr, nr);
    for (int k = 0; k < K; ++k) {
      const int s = blocks[k].s;
      Eigen::Map<const Eigen::MatrixXd> Hv(st[k].H.data(),
                                           static_cast<Eigen::Index>(s) * s, nr);
      M.noalias() += Hv.transpose() * Hv;
    }

    Eigen::LLT<Eigen::MatrixXd> lltM;
    double local_reg = reg;
    for (;;) {
      Eigen::MatrixXd Mreg = M;
      Mreg.diagonal().array() += local_reg;
      lltM.compute(Mreg);
      if (lltM.info() == Eigen::Success) break;
      local_reg *= 100.0;
      if (local_reg > 1e-4) break;
    }
    if (lltM.info() != Eigen::Success) {
      sol.status = SdpStatus::NumericalFailure;
      sol.message = "Cholesky breakdown of the Schur complement";
      break;
    }

    auto rebuild_directions = [&](const std::vector<Eigen::MatrixXd>& Rc,
                                  const Eigen::VectorXd& dxi,
                                  std::vector<Eigen::MatrixXd>& dS_out,
                                  std::vector<Eigen::MatrixXd>& dZ_out) {
      for (int k = 0; k < K; ++k) {
        Eigen::MatrixXd dS = st[k].Rs;
        dS.reshaped() += blocks[k].vec_view(nr) * dxi;
        Eigen::MatrixXd t = st[k].Rt.transpose() * (Rc[k] - dS) * st[k].Rt;
        Eigen::MatrixXd dZ = st[k].Rt * t * st[k].Rt.transpose();
        dS_out[k] = 0.5 * (dS + dS.transpose());
        dZ_out[k] = 0.5 * (dZ + dZ.transpose());
      }
    };

    auto solve_newton = [&](const std::vector<Eigen::MatrixXd>& Rc,
                            std::vector<Eigen::MatrixXd>& dS_out,
                            std::vector<Eigen::MatrixXd>& dZ_out)
        -> Eigen::VectorXd {
      Eigen::VectorXd rhs = g;
      for (int k = 0; k < K; ++k) {
        const int s = blocks[k].s;
        Eigen::MatrixXd t =
            st[k].Rt.transpose() * (Rc[k] - st[k].Rs) * st[k].Rt;
        Eigen::Map<const Eigen::MatrixXd> Hv(st[k].H.data(),
                                             static_cast<Eigen::Index>(s) * s, nr);
        rhs.noalias() += Hv.transpose() * t.reshaped();
      }
      Eigen::VectorXd dxi = lltM.solve(rhs);
      dxi += lltM.solve(rhs - M * dxi - local_reg * dxi);
      rebuild_directions(Rc, dxi, dS_out, dZ_out);
      // Refine against the dual equation sum_k <dZ, F_l> = -g_l measured on
      // the reconstructed dZ; the W^-1 products lose digits once mu is small.
      for (int pass = 0; pass < 4; ++pass) {
        // Violation of sum_k <dZ, F_l> + g_l = 0; a positive violation is
        // cancelled by increasing dxi since dZ carries -W^-1 A(dxi) W^-1.
        Eigen::VectorXd violation = g;
        for (int k = 0; k < K; ++k) {
          violation.noalias() +=
              blocks[k].vec_view(nr).transpose() * dZ_out[k].reshaped();
        }
        if (violation.norm() <= 1e-13 * obj_scale) break;
        Eigen::VectorXd delta = lltM.solve(violation);
        delta += lltM.solve(violation - M * delta - local_reg * delta);
        dxi += delta;
        rebuild_directions(Rc, dxi, dS_out, dZ_out);
      }
      return dxi;
    };

    // Predictor.
    std::vector<Eigen::MatrixXd> Rc(K);
    std::vector<Eigen::MatrixXd> dS(K), dZ(K);
    for (int k = 0; k < K; ++k) Rc[k] = -st[k].S;
    solve_newton(Rc, dS, dZ);

    double ap = 1.0, ad = 1.0;
    for (int k = 0; k < K; ++k) {
      ap = std::min(ap, max_step(st[k].lltS, dS[k]));
      Eigen::LLT<Eigen::MatrixXd> lltZ(st[k].Z);
      ad = std::min(ad, max_step(lltZ, dZ[k]));
    }
    const double tau = iter < 2 ? 0.9 : 0.98;
    double gap_aff = 0.0;
    for (int k = 0; k < K; ++k) {
      gap_aff += ((st[k].S + std::min(1.0, tau * ap) * dS[k]).array() *
                  (st[k].Z + std::min(1.0, tau * ad) * dZ[k]).array())
                     .sum();
    }
    const double mu_aff = std::max(gap_aff / total_dim, 0.0);
    double sigma = std::pow(std::min(1.0, mu_aff / mu), 3);
    sigma = std::min(std::max({sigma, 1e-8, mu_floor / mu}), 1.0);

    // Corrector with the exact scaled second-order term.
    for (int k = 0; k < K; ++k) {
      const auto& lam = st[k].lambda;
      const int s = blocks[k].s;
      Eigen::MatrixXd A_h = st[k].Rt.transpose() * dS[k] * st[k].Rt;
      Eigen::MatrixXd B_h = st[k].R.transpose() * dZ[k] * st[k].R;
      Eigen::MatrixXd C = 0.5 * (A_h * B_h + B_h * A_h);
      Eigen::MatrixXd Ghat(s, s);
      for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
          const double denom = lam[i] + lam[j];
          Ghat(i, j) = -2.0 * C(i, j) / denom;
          if (i == j) Ghat(i, j) += sigma * mu / lam[i] - lam[i];
        }
      }
      Rc[k] = st[k].R * Ghat * st[k].R.transpose();
      Rc[k] = 0.5 * (Rc[k] + Rc[k].transpose()).eval();
    }
    Eigen::VectorXd dxi = solve_newton(Rc, dS, dZ);

    ap = std::numeric_limits<double>::infinity();
    ad = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      ap = std::min(ap, max_step(st[k].lltS, dS[k]));
      Eigen::LLT<Eigen::MatrixXd> lltZ(st[k].Z);
      ad = std::min(ad, max_step(lltZ, dZ[k]));
    }
    ap = std::min(1.0, tau * ap);
    ad = std::min(1.0, tau * ad);
    if (std::getenv("INVMEAS_SDP_TRACE")) {
      std::cerr << "      sigma=" << sigma << " ap=" << ap << " ad=" << ad << "\n";
    }

    xi += ap * dxi;
    for (int k = 0; k < K; ++k) {
      st[k].S += ap * dS[k];
      st[k].Z += ad * dZ[k];
      st[k].S = 0.5 * (st[k].S + st[k].S.transpose()).eval();
      st[k].Z = 0.5 * (st[k].Z + st[k].Z.transpose()).eval();
    }
  }

  finalize(red.x0 +
           red.B * (sol.status == SdpStatus::Optimal ? xi : xi_best));
  return sol;
}

}  // namespace invmeas
