#include <doctest.h>

#include <cmath>
#include <numbers>

#include "invmeas/relaxation.hpp"
#include "invmeas/systems.hpp"

using namespace invmeas;

TEST_CASE("rotational flow at r=2, p=inf recovers the normalized Lebesgue measure") {
  const BenchmarkSpec spec = make_rotational_flow();
  const AcRelaxation rel = build_ac(spec.system, 2, PNorm::Infinity);
  const SdpSolution sol = solve(rel.problem);
  REQUIRE(sol.status == SdpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-6));

  const MomentVector y = rel.total_moments(sol.x);
  CHECK(y[MultiIndex{1, 0}] == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  CHECK(y[MultiIndex{0, 1}] == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));

  // Extracted density is identically one on the disk.
  const DensityApproximation h = extract_density(y, rel.cell_reference[0], 2);
  for (double x1 = -0.9; x1 <= 0.9; x1 += 0.3) {
    for (double x2 = -0.9; x2 <= 0.9; x2 += 0.3) {
      if (x1 * x1 + x2 * x2 > 1.0) continue;
      CHECK(h.h.eval(Eigen::Vector2d(x1, x2)) == doctest::Approx(1.0).epsilon(1e-5));
    }
  }
}

TEST_CASE("the zero moment vector is feasible for the AC relaxation") {
  const BenchmarkSpec spec = make_rotational_flow();
  for (const PNorm p : {PNorm::Infinity, PNorm::Two}) {
    const AcRelaxation rel = build_ac(spec.system, 2, p);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(rel.problem.num_vars);
    for (const auto& eq : rel.problem.eq_constraints) {
      CHECK(eq.rhs == 0.0);
    }
    for (const auto& blk : rel.problem.psd_blocks) {
      CHECK(psd_project_check(blk.assemble(zero)) >= -1e-12);
    }
  }
}

TEST_CASE("build_ac rejects r below r_min") {
  const BenchmarkSpec spec = make_rotational_flow();
  CHECK_THROWS_AS(build_ac(spec.system, 0, PNorm::Infinity), std::invalid_argument);
}

TEST_CASE("extract_density identities") {
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, 0.0);
  b.hi = Eigen::VectorXd::Constant(1, 1.0);
  const MomentVector z = box_lebesgue_moments(b, 8);

  // y = z gives h = 1.
  const DensityApproximation one = extract_density(z, z, 4);
  CHECK(one.h.coeff(MultiIndex{0}) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(one.h.degree() == 0);

  // y = 0 gives h = 0.
  const DensityApproximation zero = extract_density(MomentVector(1, 8), z, 4);
  CHECK(zero.h.is_zero());

  // Degenerate reference is rejected.
  MomentVector dirac(1, 8);
  dirac.at({0}) = 1.0;
  CHECK_THROWS(extract_density(z, dirac, 4));
}

TEST_CASE("extracted density reproduces the defining moments") {
  // Moment consistency: int h x^a dz = y_a for |a| <= r.
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, 0.0);
  b.hi = Eigen::VectorXd::Constant(1, 1.0);
  const int r = 3;
  const MomentVector z = box_lebesgue_moments(b, 2 * r);
  // Moments of the density 12 (x - 1/2)^2.
  MomentVector y(1, 2 * r);
  for (int k = 0; k <= 2 * r; ++k) {
    y.at({k}) = 12.0 * (1.0 / (k + 3.0) - 1.0 / (k + 2.0) + 0.25 / (k + 1.0));
  }
  const DensityApproximation h = extract_density(y, z, r);
  for (int a = 0; a <= r; ++a) {
    const Polynomial integrand = h.h * Polynomial::monomial(1, {a});
    CHECK(riesz(z, integrand) == doctest::Approx(y[MultiIndex{a}]).epsilon(1e-8));
  }
}

TEST_CASE("density_l2_compare trivial cases") {
  DensityApproximation h;
  h.h = Polynomial::constant(1, 2.0);
  std::vector<Eigen::VectorXd> grid;
  for (int i = 0; i <= 10; ++i) {
    grid.push_back(Eigen::VectorXd::Constant(1, i / 10.0));
  }
  const auto same = density_l2_compare(
      h, [](const Eigen::VectorXd&) { return 2.0; }, grid);
  CHECK(same.sup_error == 0.0);
  CHECK(same.l2_error == 0.0);

  const auto off = density_l2_compare(
      h, [](const Eigen::VectorXd&) { return 2.5; }, grid);
  CHECK(off.sup_error == doctest::Approx(0.5));
  CHECK(off.l2_error == doctest::Approx(0.5));
}

TEST_CASE("singular relaxation on the identity map over [-1,1]") {
  // Every probability measure is invariant; the normalized Lebesgue
  // measure itself is feasible with v = z, so the optimum is v0 = 1.
  const int n = 1;
  DynamicalSystem sys;
  sys.time_kind = TimeKind::Discrete;
  sys.global_box.lo = Eigen::VectorXd::Constant(n, -1.0);
  sys.global_box.hi = Eigen::VectorXd::Constant(n, 1.0);
  sys.cells.push_back(
      Cell{SemialgebraicSet::from_box(sys.global_box), PolynomialMap::identity(n)});

  const SingularRelaxation rel = build_singular(sys, 2);
  const SdpSolution sol = solve(rel.problem);
  REQUIRE(sol.status == SdpStatus::Optimal);
  CHECK(rel.u(sol.x).mass() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-5));

  // Decomposition identities at the optimum.
  const MomentVector u = rel.u(sol.x), v = rel.v(sol.x), vh = rel.vhat(sol.x),
                     y = rel.y(sol.x);
  CHECK((v.values() + y.values() - u.values()).lpNorm<Eigen::Infinity>() < 1e-7);
  CHECK((v.values() + vh.values() - rel.reference.values()).lpNorm<Eigen::Infinity>() <
        1e-7);
}

TEST_CASE("the trivial point (u, 0, z, u) is feasible for the singular relaxation") {
  // With u the normalized disk Lebesgue moments (invariant for the
  // rotational flow), v = 0, vhat = z, y = u satisfies every constraint.
  const BenchmarkSpec spec = make_rotational_flow();
  const int r = 2;
  const SingularRelaxation rel = build_singular(spec.system, r);
  MomentVector u = ball_lebesgue_moments(2, 2 * r);
  u.values() /= u.mass();
  Eigen::VectorXd x(rel.problem.num_vars);
  x.segment(0, rel.stride) = u.values();
  x.segment(rel.stride, rel.stride).setZero();
  x.segment(2 * rel.stride, rel.stride) = rel.reference.values();
  x.segment(3 * rel.stride, rel.stride) = u.values();
  for (const auto& eq : rel.problem.eq_constraints) {
    double v = -eq.rhs;
    for (const auto& [idx, c] : eq.coeffs) v += c * x[idx];
    CHECK(std::abs(v) < 1e-12);
  }
  for (const auto& blk : rel.problem.psd_blocks) {
    CHECK(psd_project_check(blk.assemble(x)) >= -1e-12);
  }
}

TEST_CASE("Henon singular run: mass one, value in [0,1], non-increasing in r") {
  const BenchmarkSpec spec = make_henon();
  double prev = std::numeric_limits<double>::infinity();
  for (int r : {2, 3}) {
    const SingularRelaxation rel = build_singular(spec.system, r);
    const SdpSolution sol = solve(rel.problem);
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(rel.u(sol.x).mass() == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(sol.objective_value >= -1e-9);
    CHECK(sol.objective_value <= 1.0 + 1e-7);
    CHECK(sol.objective_value <= prev + 2e-7);
    prev = sol.objective_value;

    // Localizing blocks of the solution re-checked independently.
    for (const auto& blk : rel.problem.psd_blocks) {
      CHECK(psd_project_check(blk.assemble(sol.x)) >= -1e-6);
    }
  }
}

TEST_CASE("AC mass is non-increasing in the relaxation order") {
  const BenchmarkSpec spec = make_koda(5);
  double prev = std::numeric_limits<double>::infinity();
  for (int r : {2, 3}) {
    const AcRelaxation rel = build_ac(spec.system, r, PNorm::Infinity);
    const SdpSolution sol = solve(rel.problem);
    REQUIRE(sol.status == SdpStatus::Optimal);
    CHECK(sol.objective_value <= prev + 2e-7);
    prev = sol.objective_value;
  }
}
