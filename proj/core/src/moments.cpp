#include "invmeas/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace invmeas {

MomentVector::MomentVector(int n, int max_degree)
    : n_(n),
      max_degree_(max_degree),
      values_(Eigen::VectorXd::Zero(basis_size(n, max_degree))) {}

MomentVector::MomentVector(int n, int max_degree, Eigen::VectorXd values)
    : n_(n), max_degree_(max_degree), values_(std::move(values)) {
  if (values_.size() != basis_size(n, max_degree)) {
    throw std::invalid_argument("MomentVector: wrong value count");
  }
}

double MomentVector::operator[](const MultiIndex& beta) const {
  return values_[mono_rank(beta, n_, max_degree_)];
}

double& MomentVector::at(const MultiIndex& beta) {
  return values_[mono_rank(beta, n_, max_degree_)];
}

MomentVector MomentVector::truncated(int new_max_degree) const {
  if (new_max_degree > max_degree_) {
    throw std::out_of_range("MomentVector::truncated: order overflow");
  }
  return MomentVector(n_, new_max_degree,
                      values_.head(basis_size(n_, new_max_degree)));
}

MomentVector MomentVector::marginal(const std::vector<int>& axes) const {
  const int m = static_cast<int>(axes.size());
  MomentVector out(m, max_degree_);
  const auto basis = monomial_basis(m, max_degree_);
  for (const auto& beta : basis) {
    MultiIndex full(n_, 0);
    for (int i = 0; i < m; ++i) full[axes[i]] = beta[i];
    out.at(beta) = (*this)[full];
  }
  return out;
}

bool Box::nondegenerate() const {
  return lo.size() > 0 && ((hi - lo).array() > 0.0).all();
}

double Box::volume() const { return (hi - lo).prod(); }

bool Box::contains(const Eigen::VectorXd& x, double tol) const {
  return ((x - lo).array() >= -tol).all() && ((hi - x).array() >= -tol).all();
}

std::vector<int> SemialgebraicSet::half_degrees() const {
  std::vector<int> out;
  out.reserve(inequalities.size());
  for (const auto& g : inequalities) out.push_back((g.degree() + 1) / 2);
  return out;
}

std::vector<Polynomial> SemialgebraicSet::putinar_inequalities() const {
  std::vector<Polynomial> gs = inequalities;
  if (ball_radius_sq) {
    Polynomial ball = Polynomial::constant(dimension(), *ball_radius_sq);
    for (int i = 0; i < dimension(); ++i) {
      MultiIndex sq(dimension(), 0);
      sq[i] = 2;
      ball.set_coeff(sq, -1.0);
    }
    bool present = false;
    for (const auto& g : gs) {
      if (g.terms() == ball.terms()) {
        present = true;
        break;
      }
    }
    if (!present) gs.push_back(std::move(ball));
  }
  return gs;
}

bool SemialgebraicSet::contains(const Eigen::VectorXd& x, double tol) const {
  for (const auto& g : inequalities) {
    if (g.eval(x) < -tol) return false;
  }
  for (const auto& h : equalities) {
    if (std::abs(h.eval(x)) > tol) return false;
  }
  return true;
}

SemialgebraicSet SemialgebraicSet::from_box(const Box& box) {
  if (!box.nondegenerate()) {
    throw std::invalid_argument("SemialgebraicSet::from_box: degenerate box");
  }
  const int n = box.dimension();
  SemialgebraicSet set;
  set.box = box;
  double radius_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    // (x_i - a_i)(b_i - x_i) >= 0
    Polynomial xi = Polynomial::variable(n, i);
    Polynomial g = (xi - Polynomial::constant(n, box.lo[i])) *
                   (Polynomial::constant(n, box.hi[i]) - xi);
    set.inequalities.push_back(std::move(g));
    radius_sq += std::max(box.lo[i] * box.lo[i], box.hi[i] * box.hi[i]);
  }
  set.ball_radius_sq = radius_sq;
  return set;
}

SemialgebraicSet SemialgebraicSet::unit_ball(int n) {
  SemialgebraicSet set;
  set.box.lo = Eigen::VectorXd::Constant(n, -1.0);
  set.box.hi = Eigen::VectorXd::Constant(n, 1.0);
  Polynomial ball = Polynomial::constant(n, 1.0);
  for (int i = 0; i < n; ++i) {
    MultiIndex sq(n, 0);
    sq[i] = 2;
    ball.set_coeff(sq, -1.0);
  }
  set.inequalities.push_back(std::move(ball));
  set.ball_radius_sq = 1.0;
  set.lebesgue_ref = LebesgueRef::UnitBall;
  return set;
}

MomentVector box_lebesgue_moments(const Box& box, int order) {
  if (!box.nondegenerate()) {
    throw std::invalid_argument("box_lebesgue_moments: degenerate box");
  }
  const int n = box.dimension();
  MomentVector z(n, order);
  const auto basis = monomial_basis(n, order);
  Eigen::VectorXd& vals = z.values();
  for (std::size_t r = 0; r < basis.size(); ++r) {
    double m = 1.0;
    for (int i = 0; i < n; ++i) {
      const int k = basis[r][i];
      m *= (std::pow(box.hi[i], k + 1) - std::pow(box.lo[i], k + 1)) / (k + 1);
    }
    vals[static_cast<Eigen::Index>(r)] = m;
  }
  return z;
}

MomentVector ball_lebesgue_moments(int n, int order) {
  MomentVector z(n, order);
  const auto basis = monomial_basis(n, order);
  Eigen::VectorXd& vals = z.values();
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const MultiIndex& beta = basis[r];
    bool odd = false;
    for (int i = 0; i < n; ++i) {
      if (beta[i] % 2 != 0) {
        odd = true;
        break;
      }
    }
    if (odd) {
      vals[static_cast<Eigen::Index>(r)] = 0.0;
      continue;
    }
    // int_{B_n} x^beta dx = 2 / (|beta| + n) * prod Gamma(b_i) / Gamma(sum b_i)
    // with b_i = (beta_i + 1) / 2.
    double log_num = 0.0;
    double bsum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double bi = 0.5 * (beta[i] + 1);
      log_num += std::lgamma(bi);
      bsum += bi;
    }
    const double d = degree(beta);
    vals[static_cast<Eigen::Index>(r)] =
        2.0 / (d + n) * std::exp(log_num - std::lgamma(bsum));
  }
  return z;
}

MomentVector reference_moments(const SemialgebraicSet& set, int order) {
  if (set.lebesgue_ref == LebesgueRef::UnitBall) {
    return ball_lebesgue_moments(set.dimension(), order);
  }
  return box_lebesgue_moments(set.box, order);
}

double riesz(const MomentVector& y, const Polynomial& p) {
  if (p.dimension() != y.dimension()) {
    throw std::invalid_argument("riesz: dimension mismatch");
  }
  if (p.degree() > y.max_degree()) {
    throw std::out_of_range("riesz: polynomial degree exceeds moment order");
  }
  double sum = 0.0;
  for (const auto& [beta, c] : p.terms()) sum += c * y[beta];
  return sum;
}

Eigen::MatrixXd moment_matrix(const MomentVector& y, int r) {
  return localizing_matrix(Polynomial::constant(y.dimension(), 1.0), y, r);
}

Eigen::MatrixXd localizing_matrix(const Polynomial& g, const MomentVector& y, int r) {
  const int n = y.dimension();
  if (g.dimension() != n) {
    throw std::invalid_argument("localizing_matrix: dimension mismatch");
  }
  const int rj = (g.degree() + 1) / 2;
  const int size_deg = r - rj;
  if (size_deg < 0) {
    throw std::out_of_range("localizing_matrix: r below ceil(deg g / 2)");
  }
  if (2 * size_deg + g.degree() > y.max_degree()) {
    throw std::out_of_range("localizing_matrix: moment order overflow");
  }
  const auto basis = monomial_basis(n, size_deg);
  const auto m = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd M(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const MultiIndex bg = add_indices(basis[i], basis[j]);
      double v = 0.0;
      for (const auto& [delta, c] : g.terms()) v += c * y[add_indices(bg, delta)];
      M(i, j) = v;
      M(j, i) = v;
    }
  }
  return M;
}

MomentVector affine_pushforward_moments(const MomentVector& y,
                                        const Eigen::MatrixXd& A,
                                        const Eigen::VectorXd& b) {
  const int n = y.dimension();
  if (A.rows() != n || A.cols() != n || b.size() != n) {
    throw std::invalid_argument("affine_pushforward_moments: shape mismatch");
  }
  // (A x + b)^beta expanded through the rows A_i x + b_i.
  std::vector<Polynomial> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    Polynomial li = Polynomial::constant(n, b[i]);
    for (int j = 0; j < n; ++j) {
      if (A(i, j) != 0.0) li = li + Polynomial::variable(n, j) * A(i, j);
    }
    rows.push_back(std::move(li));
  }
  MomentVector out(n, y.max_degree());
  const auto basis = monomial_basis(n, y.max_degree());
  for (const auto& beta : basis) {
    Polynomial img = Polynomial::constant(n, 1.0);
    for (int i = 0; i < n; ++i) {
      if (beta[i] > 0) img = img * poly_pow(rows[i], beta[i]);
    }
    out.at(beta) = riesz(y, img);
  }
  return out;
}

}  // namespace invmeas
