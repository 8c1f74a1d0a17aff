#include "invmeas/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace invmeas {

Polynomial::Polynomial(int n, TermMap terms) : n_(n), terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (static_cast<int>(it->first.size()) != n_) {
      throw std::invalid_argument("Polynomial: term dimension mismatch");
    }
    it = (it->second == 0.0) ? terms_.erase(it) : std::next(it);
  }
}

Polynomial Polynomial::constant(int n, double value) {
  Polynomial p(n);
  if (value != 0.0) p.terms_[MultiIndex(n, 0)] = value;
  return p;
}

Polynomial Polynomial::monomial(int n, const MultiIndex& beta, double coeff) {
  if (static_cast<int>(beta.size()) != n) {
    throw std::invalid_argument("Polynomial::monomial: dimension mismatch");
  }
  Polynomial p(n);
  if (coeff != 0.0) p.terms_[beta] = coeff;
  return p;
}

Polynomial Polynomial::variable(int n, int axis) {
  if (axis < 0 || axis >= n) {
    throw std::invalid_argument("Polynomial::variable: axis out of range");
  }
  MultiIndex beta(n, 0);
  beta[axis] = 1;
  return monomial(n, beta);
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [beta, c] : terms_) d = std::max(d, invmeas::degree(beta));
  return d;
}

double Polynomial::coeff(const MultiIndex& beta) const {
  auto it = terms_.find(beta);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::set_coeff(const MultiIndex& beta, double value) {
  if (static_cast<int>(beta.size()) != n_) {
    throw std::invalid_argument("set_coeff: dimension mismatch");
  }
  if (value == 0.0) {
    terms_.erase(beta);
  } else {
    terms_[beta] = value;
  }
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (n_ != other.n_) throw std::invalid_argument("poly add: dimension mismatch");
  TermMap out = terms_;
  for (const auto& [beta, c] : other.terms_) {
    const double v = (out[beta] += c);
    if (v == 0.0) out.erase(beta);
  }
  return Polynomial(n_, std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  return *this + (other * -1.0);
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (n_ != other.n_) throw std::invalid_argument("poly mul: dimension mismatch");
  TermMap out;
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : other.terms_) {
      MultiIndex sum = add_indices(a, b);
      const double v = (out[sum] += ca * cb);
      if (v == 0.0) out.erase(sum);
    }
  }
  return Polynomial(n_, std::move(out));
}

Polynomial Polynomial::operator*(double scalar) const {
  TermMap out;
  if (scalar != 0.0) {
    for (const auto& [beta, c] : terms_) out[beta] = c * scalar;
  }
  return Polynomial(n_, std::move(out));
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw std::invalid_argument("poly eval: dimension mismatch");
  // Terms are iterated in rank order so the summation order is fixed.
  double sum = 0.0;
  for (const auto& [beta, c] : terms_) {
    double m = c;
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < beta[i]; ++k) m *= x[i];
    }
    sum += m;
  }
  return sum;
}

Eigen::VectorXd Polynomial::coeff_vector(int max_deg) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(basis_size(n_, max_deg));
  for (const auto& [beta, c] : terms_) {
    v[mono_rank(beta, n_, max_deg)] = c;
  }
  return v;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [beta, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const double a = std::abs(c);
    bool printed = false;
    if (a != 1.0 || invmeas::degree(beta) == 0) {
      os << a;
      printed = true;
    }
    for (int i = 0; i < n_; ++i) {
      if (beta[i] == 0) continue;
      if (printed) os << "*";
      os << "x" << (i + 1);
      if (beta[i] > 1) os << "^" << beta[i];
      printed = true;
    }
  }
  return os.str();
}

Polynomial poly_pow(const Polynomial& p, int k) {
  if (k < 0) throw std::invalid_argument("poly_pow: negative exponent");
  Polynomial result = Polynomial::constant(p.dimension(), 1.0);
  Polynomial base = p;
  int e = k;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial poly_partial(const Polynomial& p, int axis) {
  if (axis < 0 || axis >= p.dimension()) {
    throw std::invalid_argument("poly_partial: axis out of range");
  }
  Polynomial::TermMap out;
  for (const auto& [beta, c] : p.terms()) {
    if (beta[axis] == 0) continue;
    MultiIndex db = beta;
    db[axis] -= 1;
    out[db] = c * beta[axis];
  }
  return Polynomial(p.dimension(), std::move(out));
}

PolynomialMap::PolynomialMap(std::vector<Polynomial> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("PolynomialMap: no components");
  }
  n_ = components_[0].dimension();
  for (const auto& f : components_) {
    if (f.dimension() != n_) {
      throw std::invalid_argument("PolynomialMap: mixed dimensions");
    }
  }
}

PolynomialMap PolynomialMap::identity(int n) {
  std::vector<Polynomial> comps;
  comps.reserve(n);
  for (int i = 0; i < n; ++i) comps.push_back(Polynomial::variable(n, i));
  return PolynomialMap(std::move(comps));
}

int PolynomialMap::degree() const {
  int d = 0;
  for (const auto& f : components_) d = std::max(d, f.degree());
  return d;
}

Eigen::VectorXd PolynomialMap::eval(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) y[i] = components_[i].eval(x);
  return y;
}

Polynomial poly_compose_map(const MultiIndex& alpha, const PolynomialMap& f) {
  if (static_cast<int>(alpha.size()) > f.num_components()) {
    throw std::invalid_argument("poly_compose_map: dimension mismatch");
  }
  Polynomial result = Polynomial::constant(f.dimension(), 1.0);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > 0) result = result * poly_pow(f.component(i), alpha[i]);
  }
  return result;
}

Polynomial poly_affine_substitute(const Polynomial& p, const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b) {
  const int n = p.dimension();
  if (A.rows() != n || A.cols() != n || b.size() != n) {
    throw std::invalid_argument("poly_affine_substitute: shape mismatch");
  }
  std::vector<Polynomial> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    Polynomial li = Polynomial::constant(n, b[i]);
    for (int j = 0; j < n; ++j) {
      if (A(i, j) != 0.0) li = li + Polynomial::variable(n, j) * A(i, j);
    }
    rows.push_back(std::move(li));
  }
  Polynomial out(n);
  for (const auto& [beta, c] : p.terms()) {
    Polynomial term = Polynomial::constant(n, c);
    for (int i = 0; i < n; ++i) {
      if (beta[i] > 0) term = term * poly_pow(rows[i], beta[i]);
    }
    out = out + term;
  }
  return out;
}

}  // namespace invmeas
