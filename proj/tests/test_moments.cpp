#include <doctest.h>

#include <cmath>
#include <numbers>

#include "invmeas/moments.hpp"

using namespace invmeas;

namespace {

Box interval(double lo, double hi) {
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, lo);
  b.hi = Eigen::VectorXd::Constant(1, hi);
  return b;
}

Box box2(double ax, double bx, double ay, double by) {
  Box b;
  b.lo = Eigen::Vector2d(ax, ay);
  b.hi = Eigen::Vector2d(bx, by);
  return b;
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_m.
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < m; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      const double dp = m * (t * p0 - p1) / (t * t - 1.0);
      const double t_old = t;
      t = t_old - p0 / dp;
      if (std::abs(t - t_old) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int k = 0; k < m; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
    }
    const double dp = m * (t * p0 - p1) / (t * t - 1.0);
    nodes[i] = t;
    weights[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

// Tensor Gauss-Legendre integral of x^beta over a box.
double quad_box_moment(const Box& box, const MultiIndex& beta) {
  std::vector<double> nodes, weights;
  gauss_legendre(24, nodes, weights);
  const int n = box.dimension();
  double result = 1.0;
  for (int i = 0; i < n; ++i) {
    const double mid = 0.5 * (box.hi[i] + box.lo[i]);
    const double half = 0.5 * (box.hi[i] - box.lo[i]);
    double axis = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      axis += weights[q] * std::pow(mid + half * nodes[q], beta[i]);
    }
    result *= axis * half;
  }
  return result;
}

// Polar tensor quadrature of x^beta over the unit disk.
double quad_disk_moment(const MultiIndex& beta) {
  std::vector<double> nodes, weights;
  gauss_legendre(48, nodes, weights);
  // radial factor is exact: int_0^1 r^{|beta|+1} dr
  const double radial = 1.0 / (degree(beta) + 2.0);
  double angular = 0.0;
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const double theta = std::numbers::pi * (nodes[q] + 1.0);  // [0, 2pi]
    angular += weights[q] * std::numbers::pi *
               std::pow(std::cos(theta), beta[0]) * std::pow(std::sin(theta), beta[1]);
  }
  return radial * angular;
}

}  // namespace

TEST_CASE("unit interval moments are 1/(k+1)") {
  const MomentVector z = box_lebesgue_moments(interval(0.0, 1.0), 6);
  for (int k = 0; k <= 6; ++k) {
    CHECK(z[MultiIndex{k}] == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
  }
  CHECK(z[MultiIndex{2}] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("symmetric box kills odd moments") {
  const MomentVector z = box_lebesgue_moments(box2(-1, 1, -1, 1), 5);
  for (const auto& beta : monomial_basis(2, 5)) {
    if (beta[0] % 2 == 1 || beta[1] % 2 == 1) CHECK(z[beta] == 0.0);
  }
  CHECK(z[MultiIndex{2, 0}] == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("box moments match tensor Gauss-Legendre to 1e-10 up to order 16") {
  const Box box = box2(-0.5, 1.25, 0.0, 2.0);
  const MomentVector z = box_lebesgue_moments(box, 16);
  for (const auto& beta : monomial_basis(2, 16)) {
    const double expected = quad_box_moment(box, beta);
    CHECK(z[beta] == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("disk moments: mass, symmetry, x^2") {
  const MomentVector z = ball_lebesgue_moments(2, 6);
  CHECK(z[MultiIndex{0, 0}] == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(z[MultiIndex{1, 0}] == 0.0);
  CHECK(z[MultiIndex{1, 2}] == 0.0);
  CHECK(z[MultiIndex{2, 0}] == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-14));
}

TEST_CASE("disk moments agree with polar quadrature to 1e-10 up to order 16") {
  const MomentVector z = ball_lebesgue_moments(2, 16);
  for (const auto& beta : monomial_basis(2, 16)) {
    const double expected = quad_disk_moment(beta);
    if (std::abs(expected) < 1e-12) {
      CHECK(std::abs(z[beta]) < 1e-12);
    } else {
      CHECK(z[beta] == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("3-d ball mass is 4 pi / 3") {
  const MomentVector z = ball_lebesgue_moments(3, 4);
  CHECK(z[MultiIndex{0, 0, 0}] ==
        doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-14));
}

TEST_CASE("riesz functional basics") {
  const MomentVector z = box_lebesgue_moments(interval(0.0, 1.0), 4);
  CHECK(riesz(z, Polynomial::constant(1, 1.0)) == doctest::Approx(1.0));
  CHECK(riesz(z, Polynomial(1)) == 0.0);
  CHECK(riesz(z, Polynomial::monomial(1, {2})) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(riesz(z, Polynomial::monomial(1, {5})), std::out_of_range);
}

TEST_CASE("moment matrix r=0 and the Hilbert matrix") {
  const MomentVector z = box_lebesgue_moments(interval(0.0, 1.0), 2);
  const Eigen::MatrixXd m0 = moment_matrix(z, 0);
  REQUIRE(m0.rows() == 1);
  CHECK(m0(0, 0) == doctest::Approx(1.0));

  const Eigen::MatrixXd m1 = moment_matrix(z, 1);
  REQUIRE(m1.rows() == 2);
  CHECK(m1(0, 0) == doctest::Approx(1.0));
  CHECK(m1(0, 1) == doctest::Approx(0.5));
  CHECK(m1(1, 0) == doctest::Approx(0.5));
  CHECK(m1(1, 1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("moment matrix of a dirac at the origin") {
  MomentVector y(2, 4);
  y.at({0, 0}) = 1.0;
  const Eigen::MatrixXd m = moment_matrix(y, 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m.norm() == doctest::Approx(1.0));
}

TEST_CASE("localizing with g = 1 equals the moment matrix") {
  const MomentVector z = box_lebesgue_moments(box2(0, 1, 0, 1), 6);
  const Eigen::MatrixXd lhs = localizing_matrix(Polynomial::constant(2, 1.0), z, 3);
  const Eigen::MatrixXd rhs = moment_matrix(z, 3);
  CHECK((lhs - rhs).norm() == 0.0);
}

TEST_CASE("localizing matrix of 1 - x^2 on [-1,1] at r=1 is the scalar 4/3") {
  const MomentVector z = box_lebesgue_moments(interval(-1.0, 1.0), 2);
  Polynomial g = Polynomial::constant(1, 1.0) - Polynomial::monomial(1, {2});
  const Eigen::MatrixXd loc = localizing_matrix(g, z, 1);
  REQUIRE(loc.rows() == 1);
  CHECK(loc(0, 0) == doctest::Approx(2.0 - 2.0 / 3.0));
}

TEST_CASE("localizing matrix is linear in the constraint polynomial") {
  const MomentVector z = box_lebesgue_moments(box2(-1, 1, -1, 1), 6);
  Polynomial g = Polynomial::constant(2, 1.0) - Polynomial::monomial(2, {2, 0});
  const Eigen::MatrixXd a = localizing_matrix(g, z, 3);
  const Eigen::MatrixXd b = localizing_matrix(g * 2.5, z, 3);
  CHECK((b - 2.5 * a).norm() < 1e-12);
}

TEST_CASE("box moment matrices are positive definite") {
  const MomentVector z = box_lebesgue_moments(box2(-1, 1, -0.5, 0.75), 8);
  for (int r = 0; r <= 4; ++r) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(moment_matrix(z, r));
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("riesz of p*q equals the moment-matrix bilinear form") {
  const MomentVector z = box_lebesgue_moments(box2(0, 1, -1, 1), 8);
  const int r = 2;
  const Polynomial p =
      Polynomial::monomial(2, {1, 1}) + Polynomial::constant(2, 0.5);
  const Polynomial q =
      Polynomial::monomial(2, {2, 0}) - Polynomial::monomial(2, {0, 1}) * 2.0;
  const Eigen::VectorXd pc = p.coeff_vector(r);
  const Eigen::VectorXd qc = q.coeff_vector(r);
  const double bilinear = pc.transpose() * moment_matrix(z, r) * qc;
  CHECK(riesz(z, p * q) == doctest::Approx(bilinear).epsilon(1e-13));
}

TEST_CASE("affine pushforward: identity, dilation, mass") {
  const MomentVector y = box_lebesgue_moments(interval(0.0, 1.0), 6);

  const MomentVector same = affine_pushforward_moments(
      y, Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1));
  CHECK((same.values() - y.values()).norm() < 1e-14);

  const MomentVector dilated = affine_pushforward_moments(
      y, 2.0 * Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1));
  for (int k = 0; k <= 6; ++k) {
    CHECK(dilated[MultiIndex{k}] ==
          doctest::Approx(std::pow(2.0, k) / (k + 1)).epsilon(1e-13));
  }
  CHECK(dilated.mass() == doctest::Approx(y.mass()));
}

TEST_CASE("marginal re-indexes onto the selected axes") {
  const MomentVector z = box_lebesgue_moments(box2(0, 1, -1, 1), 4);
  const MomentVector mx = z.marginal({0});
  for (int k = 0; k <= 4; ++k) {
    CHECK(mx[MultiIndex{k}] == doctest::Approx(z[MultiIndex{k, 0}]));
  }
}

TEST_CASE("reference moments dispatch on the set kind") {
  const SemialgebraicSet ball = SemialgebraicSet::unit_ball(2);
  CHECK(reference_moments(ball, 2).mass() == doctest::Approx(std::numbers::pi));
  const SemialgebraicSet box = SemialgebraicSet::from_box(box2(0, 2, 0, 1));
  CHECK(reference_moments(box, 2).mass() == doctest::Approx(2.0));
}
