#include <doctest.h>

#include <map>
#include <random>

#include "invmeas/polynomial.hpp"

using namespace invmeas;

namespace {

Polynomial x(int n, int i) { return Polynomial::variable(n, i); }

// Independent expansion oracle: multiplies term lists with plain maps,
// no pruning or ordering tricks.
std::map<std::vector<int>, double> naive_mul(const std::map<std::vector<int>, double>& a,
                                             const std::map<std::vector<int>, double>& b) {
  std::map<std::vector<int>, double> out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("(x+1)(x-1) = x^2 - 1") {
  const Polynomial p = (x(1, 0) + Polynomial::constant(1, 1.0)) *
                       (x(1, 0) - Polynomial::constant(1, 1.0));
  CHECK(p.coeff({2}) == 1.0);
  CHECK(p.coeff({0}) == -1.0);
  CHECK(p.coeff({1}) == 0.0);
  CHECK(p.terms().size() == 2);
}

TEST_CASE("multiplication by zero prunes to the zero polynomial") {
  const Polynomial p = (x(2, 0) + x(2, 1)) * Polynomial(2);
  CHECK(p.is_zero());
}

TEST_CASE("(x1+x2)^2 expands to x1^2 + 2 x1 x2 + x2^2") {
  const Polynomial p = poly_pow(x(2, 0) + x(2, 1), 2);
  CHECK(p.coeff({2, 0}) == 1.0);
  CHECK(p.coeff({1, 1}) == 2.0);
  CHECK(p.coeff({0, 2}) == 1.0);
  CHECK(p.terms().size() == 3);
}

TEST_CASE("poly_pow basics") {
  CHECK(poly_pow(x(1, 0) * 3.0, 0).coeff({0}) == 1.0);
  CHECK(poly_pow(x(1, 0), 3).coeff({3}) == 1.0);
  CHECK_THROWS_AS(poly_pow(x(1, 0), -1), std::invalid_argument);
}

TEST_CASE("Henon-style square against a naive expansion oracle") {
  // (1 - a x1^2 + x2)^2 with a = 1.4
  const double a = 1.4;
  const Polynomial p =
      Polynomial::constant(2, 1.0) - x(2, 0) * x(2, 0) * a + x(2, 1);
  const Polynomial sq = p * p;

  const std::map<std::vector<int>, double> terms = {
      {{0, 0}, 1.0}, {{2, 0}, -a}, {{0, 1}, 1.0}};
  const auto expected = naive_mul(terms, terms);
  std::size_t nonzero = 0;
  for (const auto& [e, c] : expected) {
    if (c == 0.0) continue;
    ++nonzero;
    CHECK(sq.coeff(e) == doctest::Approx(c).epsilon(1e-15));
  }
  CHECK(nonzero == 6);
  CHECK(sq.terms().size() == 6);
}

TEST_CASE("compose with the identity map is the monomial itself") {
  const auto id = PolynomialMap::identity(3);
  for (const MultiIndex alpha : {MultiIndex{0, 0, 0}, {1, 2, 0}, {3, 1, 2}}) {
    const Polynomial c = poly_compose_map(alpha, id);
    CHECK(c.terms().size() == (degree(alpha) == 0 ? 1 : 1));
    CHECK(c.coeff(alpha) == 1.0);
  }
}

TEST_CASE("compose with alpha = 0 gives the constant one") {
  const PolynomialMap f({x(2, 1), x(2, 0) * -1.0});
  const Polynomial c = poly_compose_map({0, 0}, f);
  CHECK(c.coeff({0, 0}) == 1.0);
  CHECK(c.terms().size() == 1);
}

TEST_CASE("Henon second component composed with alpha=(0,1)") {
  // x2+ = b x1 with b = 0.3
  const PolynomialMap henon(
      {Polynomial::constant(2, 1.0) - x(2, 0) * x(2, 0) * 1.4 + x(2, 1),
       x(2, 0) * 0.3});
  const Polynomial c = poly_compose_map({0, 1}, henon);
  CHECK(c.coeff({1, 0}) == doctest::Approx(0.3));
  CHECK(c.terms().size() == 1);
}

TEST_CASE("partial derivatives") {
  CHECK(poly_partial(x(1, 0) * x(1, 0), 0).coeff({1}) == 2.0);
  CHECK(poly_partial(Polynomial::constant(2, 5.0), 1).is_zero());

  // grad(x^alpha) . f for f = (x2, -x1), alpha = (1,0) gives x2.
  const PolynomialMap f({x(2, 1), x(2, 0) * -1.0});
  const Polynomial mono = Polynomial::monomial(2, {1, 0});
  Polynomial dot(2);
  for (int i = 0; i < 2; ++i) dot = dot + poly_partial(mono, i) * f.component(i);
  CHECK(dot.coeff({0, 1}) == 1.0);
  CHECK(dot.terms().size() == 1);
}

TEST_CASE("evaluation") {
  CHECK(Polynomial::constant(2, 1.0).eval(Eigen::Vector2d(3.0, -2.0)) == 1.0);
  CHECK((x(1, 0) * x(1, 0)).eval(Eigen::VectorXd::Constant(1, 3.0)) == 9.0);
  const Polynomial henon1 =
      Polynomial::constant(2, 1.0) - x(2, 0) * x(2, 0) * 1.4 + x(2, 1);
  CHECK(henon1.eval(Eigen::Vector2d(0.0, 0.0)) == 1.0);
}

TEST_CASE("eval distributes over products on random inputs") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int n = 3;
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial a(n), b(n);
    const auto basis = monomial_basis(n, 3);
    for (const auto& beta : basis) {
      if (unif(rng) > 0.2) a.set_coeff(beta, unif(rng));
      if (unif(rng) > 0.2) b.set_coeff(beta, unif(rng));
    }
    Eigen::VectorXd pt(n);
    for (int i = 0; i < n; ++i) pt[i] = unif(rng);
    const double lhs = (a * b).eval(pt);
    const double rhs = a.eval(pt) * b.eval(pt);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("degree of a composed monomial is bounded by d_f |alpha|") {
  const PolynomialMap f({poly_pow(x(2, 0), 2) + x(2, 1), x(2, 0) * x(2, 1)});
  const int df = f.degree();
  for (const MultiIndex alpha : {MultiIndex{2, 1}, {0, 3}, {1, 1}}) {
    CHECK(poly_compose_map(alpha, f).degree() <= df * degree(alpha));
  }
}

TEST_CASE("dimension mismatches are rejected") {
  CHECK_THROWS_AS(x(1, 0) + x(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(x(1, 0) * x(2, 0), std::invalid_argument);
}

TEST_CASE("affine substitution matches pointwise evaluation") {
  const Polynomial p = poly_pow(x(2, 0) + x(2, 1) * 2.0, 3) - x(2, 1);
  Eigen::MatrixXd A(2, 2);
  A << 2.0, 1.0, 0.0, -1.0;
  const Eigen::Vector2d b(0.5, -0.25);
  const Polynomial q = poly_affine_substitute(p, A, b);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Vector2d pt(unif(rng), unif(rng));
    CHECK(q.eval(pt) == doctest::Approx(p.eval(A * pt + b)).epsilon(1e-12));
  }
}
