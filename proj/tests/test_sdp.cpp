#include <doctest.h>

#include <random>

#include "invmeas/sdp.hpp"

using namespace invmeas;

namespace {

Eigen::MatrixXd random_symmetric(int s, std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd A(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j <= i; ++j) {
      A(i, j) = unif(rng);
      A(j, i) = A(i, j);
    }
  }
  return A;
}

void set_block_from_dense(SdpBlock& blk, int var, const Eigen::MatrixXd& F) {
  for (int i = 0; i < F.rows(); ++i) {
    for (int j = i; j < F.cols(); ++j) {
      if (F(i, j) != 0.0) blk.add_entry(var, i, j, F(i, j));
    }
  }
}

// Builds a problem with a known primal-dual optimal pair: pick x*, a
// rank-deficient S* >= 0 and a complementary Z* >= 0 (S* Z* = 0), random
// basis matrices F_j and equality rows; then F0 := S* - sum x*_j F_j,
// c_j := (E' lambda*)_j - <Z*, F_j> makes (x*, S*, Z*, lambda*) optimal:
// c'x <= c'x + <Z, S(x)> = <Z, F0> + lambda'd for any feasible x.
struct Planted {
  SdpProblem problem;
  Eigen::VectorXd x_star;
  double value = 0.0;
};

Planted make_planted(unsigned seed, int num_vars, int block_size, int num_eq) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  Planted planted;
  planted.x_star = Eigen::VectorXd::NullaryExpr(num_vars, [&](Eigen::Index) {
    return unif(rng);
  });

  // Complementary optimal pair via an orthogonal eigenbasis.
  Eigen::MatrixXd Q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(random_symmetric(block_size, rng))
          .householderQ();
  Eigen::VectorXd s_eigs = Eigen::VectorXd::Zero(block_size);
  Eigen::VectorXd z_eigs = Eigen::VectorXd::Zero(block_size);
  for (int i = 0; i < block_size; ++i) {
    if (i < block_size / 2) {
      s_eigs[i] = 0.5 + std::abs(unif(rng));
    } else {
      z_eigs[i] = 0.5 + std::abs(unif(rng));
    }
  }
  const Eigen::MatrixXd S_star = Q * s_eigs.asDiagonal() * Q.transpose();
  const Eigen::MatrixXd Z_star = Q * z_eigs.asDiagonal() * Q.transpose();

  std::vector<Eigen::MatrixXd> basis;
  basis.reserve(num_vars);
  for (int j = 0; j < num_vars; ++j) basis.push_back(random_symmetric(block_size, rng));

  SdpBlock blk(block_size);
  blk.constant = S_star;
  for (int j = 0; j < num_vars; ++j) {
    blk.constant -= planted.x_star[j] * basis[j];
    set_block_from_dense(blk, j, basis[j]);
  }

  Eigen::MatrixXd E(num_eq, num_vars);
  Eigen::VectorXd lambda(num_eq);
  for (int i = 0; i < num_eq; ++i) {
    lambda[i] = unif(rng);
    for (int j = 0; j < num_vars; ++j) E(i, j) = unif(rng);
  }

  SdpProblem& p = planted.problem;
  p.num_vars = num_vars;
  p.psd_blocks.push_back(std::move(blk));
  p.objective.resize(num_vars);
  for (int j = 0; j < num_vars; ++j) {
    double c = -(Z_star.array() * basis[j].array()).sum();
    if (num_eq > 0) c += E.col(j).dot(lambda);
    p.objective[j] = c;
  }
  for (int i = 0; i < num_eq; ++i) {
    SdpEquality eq;
    for (int j = 0; j < num_vars; ++j) eq.coeffs.emplace_back(j, E(i, j));
    eq.rhs = E.row(i).dot(planted.x_star);
    p.eq_constraints.push_back(std::move(eq));
  }
  planted.value = p.objective.dot(planted.x_star);
  return planted;
}

}  // namespace

TEST_CASE("psd_project_check hand examples") {
  CHECK(psd_project_check(Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(psd_project_check(Eigen::MatrixXd::Zero(2, 2)) == doctest::Approx(0.0));
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;
  CHECK(psd_project_check(m) == doctest::Approx(-1.0));
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(psd_project_check(m), std::invalid_argument);
}

TEST_CASE("max y0 with [[1, y0],[y0, 1]] >= 0 gives 1") {
  SdpProblem p;
  p.num_vars = 1;
  p.objective = Eigen::VectorXd::Ones(1);
  SdpBlock blk(2);
  blk.constant << 1.0, 0.0, 0.0, 1.0;
  blk.add_entry(0, 0, 1, 1.0);
  p.psd_blocks.push_back(std::move(blk));

  const SdpSolution sol = solve(p);
  CHECK(sol.status == SdpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.duality_gap <= 1e-7);
  CHECK(sol.min_block_eigenvalue >= -1e-7);
}

TEST_CASE("equality-encoded slack: max y0 with y0 + s = c, s >= 0") {
  const double c = 0.75;
  SdpProblem p;
  p.num_vars = 2;
  p.objective = Eigen::VectorXd::Zero(2);
  p.objective[0] = 1.0;
  SdpBlock slack(1);
  slack.add_entry(1, 0, 0, 1.0);
  p.psd_blocks.push_back(std::move(slack));
  SdpEquality eq;
  eq.coeffs = {{0, 1.0}, {1, 1.0}};
  eq.rhs = c;
  p.eq_constraints.push_back(eq);

  const SdpSolution sol = solve(p);
  CHECK(sol.status == SdpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(c).epsilon(1e-6));
  CHECK(sol.max_eq_residual <= 1e-9);
}

TEST_CASE("planted optima are recovered to 1e-6 over 20 random problems") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const int num_vars = 5;
    const Planted planted = make_planted(seed, num_vars, 6, seed % 3);
    const SdpSolution sol = solve(planted.problem);
    INFO("seed ", seed);
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(sol.objective_value ==
          doctest::Approx(planted.value).epsilon(1e-6));
    CHECK(sol.duality_gap <= 1e-7);
    // Weak duality as reported.
    CHECK(sol.objective_value <= sol.dual_objective + sol.duality_gap + 1e-12);
    // Re-assembled blocks agree with the reported minimum eigenvalue.
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto& blk : planted.problem.psd_blocks) {
      min_eig = std::min(min_eig, psd_project_check(blk.assemble(sol.x)));
    }
    CHECK(min_eig == doctest::Approx(sol.min_block_eigenvalue).epsilon(1e-9));
    CHECK(min_eig >= -1e-7);
  }
}

TEST_CASE("solver is deterministic") {
  const Planted planted = make_planted(42, 6, 5, 2);
  const SdpSolution a = solve(planted.problem);
  const SdpSolution b = solve(planted.problem);
  CHECK(a.iterations == b.iterations);
  CHECK(a.objective_value == b.objective_value);
  CHECK((a.x - b.x).norm() == 0.0);
}

TEST_CASE("inconsistent equalities report infeasible") {
  SdpProblem p;
  p.num_vars = 1;
  p.objective = Eigen::VectorXd::Ones(1);
  SdpBlock blk(1);
  blk.constant(0, 0) = 1.0;
  blk.add_entry(0, 0, 0, 0.0);
  p.psd_blocks.push_back(std::move(blk));
  SdpEquality e1, e2;
  e1.coeffs = {{0, 1.0}};
  e1.rhs = 0.0;
  e2.coeffs = {{0, 1.0}};
  e2.rhs = 1.0;
  p.eq_constraints = {e1, e2};
  const SdpSolution sol = solve(p);
  CHECK(sol.status == SdpStatus::Infeasible);
}

TEST_CASE("fully pinned problems bypass the interior point loop") {
  SdpProblem p;
  p.num_vars = 1;
  p.objective = Eigen::VectorXd::Ones(1);
  SdpBlock blk(1);
  blk.add_entry(0, 0, 0, 1.0);
  p.psd_blocks.push_back(std::move(blk));
  SdpEquality eq;
  eq.coeffs = {{0, 1.0}};
  eq.rhs = 2.0;
  p.eq_constraints.push_back(eq);
  const SdpSolution sol = solve(p);
  CHECK(sol.status == SdpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(2.0));

  // Pinned to an infeasible point.
  eq.rhs = -2.0;
  p.eq_constraints[0] = eq;
  const SdpSolution bad = solve(p);
  CHECK(bad.status == SdpStatus::Infeasible);
}

TEST_CASE("debug dump carries the full conic data") {
  const Planted planted = make_planted(3, 3, 3, 1);
  const std::string text = planted.problem.dump();
  CHECK(text.find("conic-lmi 1") == 0);
  CHECK(text.find("nvars 3") != std::string::npos);
  CHECK(text.find("nblocks 1") != std::string::npos);
  CHECK(text.find("rhs") != std::string::npos);
  // Deterministic: two dumps are identical.
  CHECK(text == planted.problem.dump());
}
