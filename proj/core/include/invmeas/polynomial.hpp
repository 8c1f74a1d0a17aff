#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invmeas/multi_index.hpp"

namespace invmeas {

/// Sparse multivariate polynomial with double coefficients.
/// Terms are kept in graded-lex order and zero coefficients are pruned
/// exactly (no epsilon), so every traversal is deterministic.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double, GradedLexLess>;

  explicit Polynomial(int n) : n_(n) {}
  Polynomial(int n, TermMap terms);

  static Polynomial constant(int n, double value);
  /// The monomial c * x^beta.
  static Polynomial monomial(int n, const MultiIndex& beta, double coeff = 1.0);
  /// The variable x_i (0-based axis).
  static Polynomial variable(int n, int axis);

  int dimension() const { return n_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  double coeff(const MultiIndex& beta) const;
  void set_coeff(const MultiIndex& beta, double value);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double scalar) const;
  Polynomial operator-() const { return *this * -1.0; }

  double eval(const Eigen::VectorXd& x) const;

  /// Dense coefficient vector indexed by mono_rank over N^n_{max_deg}.
  Eigen::VectorXd coeff_vector(int max_deg) const;

  std::string to_string() const;

 private:
  int n_;
  TermMap terms_;
};

Polynomial poly_pow(const Polynomial& p, int k);

/// Formal partial derivative with respect to axis (0-based).
Polynomial poly_partial(const Polynomial& p, int axis);

/// Vector field / transition map f = (f_1, ..., f_n).
class PolynomialMap {
 public:
  explicit PolynomialMap(std::vector<Polynomial> components);

  static PolynomialMap identity(int n);

  int dimension() const { return n_; }
  int num_components() const { return static_cast<int>(components_.size()); }
  const Polynomial& component(int i) const { return components_[i]; }
  const std::vector<Polynomial>& components() const { return components_; }
  /// max over components of deg f_i.
  int degree() const;

  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;

 private:
  int n_;
  std::vector<Polynomial> components_;
};

/// The monomial x^alpha composed with f, i.e. prod_i f_i(x)^{alpha_i}.
Polynomial poly_compose_map(const MultiIndex& alpha, const PolynomialMap& f);

/// p(A x + b) expanded back into the monomial basis.
Polynomial poly_affine_substitute(const Polynomial& p, const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b);

}  // namespace invmeas
