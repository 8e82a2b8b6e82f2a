#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracstab/fracsolver.hpp"
#include "oracles.hpp"

using namespace fracstab;
using oracles::kPi;

TEST_CASE("grid construction") {
  const Grid g1 = build_grid(Domain::interval(-1, 1), 0.25);
  CHECK(g1.node_count() == 7);
  const Grid g2 = build_grid(Domain::disk({0, 0}, 1.0), 0.25);
  for (const Vec2& x : g2.nodes) CHECK(x.norm() < 1.0);
  CHECK_THROWS_AS(build_grid(Domain::disk({0, 0}, 1.0), 0.3), std::invalid_argument);
}

TEST_CASE("assembled operator is a symmetric M-matrix") {
  const Domain d = Domain::disk({0, 0}, 1.0);
  const Grid g = build_grid(d, 0.2);
  const OperatorMatrix op = assemble_operator(d, g, {2, 0.5});
  const int N = g.node_count();
  CHECK((op.A - op.A.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * op.A.cwiseAbs().maxCoeff());
  for (int i = 0; i < N; ++i) {
    CHECK(op.A(i, i) > 0.0);
    for (int j = 0; j < N; ++j)
      if (i != j) CHECK(op.A(i, j) <= 0.0);
  }
  // row sums positive: the exterior tail acts on constants extended by zero
  const Eigen::VectorXd rs = op.A * Eigen::VectorXd::Ones(N);
  CHECK(rs.minCoeff() > 0.0);
  // zero in, zero out
  CHECK((op.A * Eigen::VectorXd::Zero(N)).norm() == 0.0);
}

TEST_CASE("discrete maximum principle: explicit inverse is nonnegative") {
  const Domain d = Domain::disk({0, 0}, 1.0);
  const Grid g = build_grid(d, 0.25);  // coarse: N <= 200
  REQUIRE(g.node_count() <= 200);
  const OperatorMatrix op = assemble_operator(d, g, {2, 0.5});
  const Eigen::MatrixXd inv = op.A.inverse();
  CHECK(inv.minCoeff() >= -1e-12);
}

TEST_CASE("operator applied to the exact ball solution returns 1 in the interior") {
  const FracParams p{2, 0.5};
  const Domain d = Domain::disk({0, 0}, 1.0);
  double prev_dev = 1e300;
  for (double h : {1.0 / 16, 1.0 / 32}) {
    const Grid g = build_grid(d, h);
    const OperatorMatrix op = assemble_operator(d, g, p);
    Eigen::VectorXd psi(g.node_count());
    for (int i = 0; i < g.node_count(); ++i)
      psi(i) = exact_ball_solution({0, 0}, 1.0, p, g.nodes[i]);
    const Eigen::VectorXd r = op.A * psi;
    double dev = 0.0;
    for (int i = 0; i < g.node_count(); ++i)
      if (g.nodes[i].norm() < 0.75) dev = std::max(dev, std::abs(r(i) - 1.0));
    CHECK(dev <= 0.10);
    CHECK(dev < prev_dev);
    prev_dev = dev;
  }
}

TEST_CASE("torsion solve 1D: ball oracle at the center") {
  const FracParams p{1, 0.5};
  const Domain d = Domain::interval(-1, 1);
  const Grid g = build_grid(d, 1.0 / 256);
  const Field u = solve_torsion(d, g, p);
  CHECK(u.value_at({0, 0}) == doctest::Approx(1.0).epsilon(0.05));
  // strict positivity at every node
  CHECK(u.values.minCoeff() > 0.0);
}

TEST_CASE("torsion solve 2D: disk center value") {
  const FracParams p{2, 0.5};
  const Domain d = Domain::disk({0, 0}, 1.0);
  const Field u = solve_torsion(d, build_grid(d, 1.0 / 16), p);
  CHECK(u.value_at({0, 0}) == doctest::Approx(2.0 / kPi).epsilon(0.10));
  CHECK(u.values.minCoeff() > 0.0);
}

TEST_CASE("convergence order against the exact ball solution") {
  const FracParams p{1, 0.5};
  const Domain d = Domain::interval(-1, 1);
  std::vector<double> lh, le;
  for (int k = 5; k <= 8; ++k) {
    const double h = std::pow(2.0, -k);
    const Field u = solve_torsion(d, build_grid(d, h), p);
    lh.push_back(std::log(h));
    le.push_back(std::log(std::abs(u.value_at({0, 0}) - 1.0)));
  }
  CHECK(oracles::fit_slope(lh, le) >= 0.5);
}

TEST_CASE("scaling law: r^{2s} u(x/r) solves on the scaled domain") {
  const FracParams p{1, 0.5};
  const double r = 2.0;
  const Field u1 = solve_torsion(Domain::interval(-1, 1), build_grid(Domain::interval(-1, 1), 1.0 / 64), p);
  const Field u2 = solve_torsion(Domain::interval(-2, 2), build_grid(Domain::interval(-2, 2), 2.0 / 64), p);
  // compare at matching points: u2(r x) ~ r^{2s} u1(x)
  double dev = 0.0;
  for (double x : {0.0, 0.25, 0.5, -0.375}) {
    const double lhs = u2.value_at({r * x, 0});
    const double rhs = std::pow(r, 2.0 * p.s) * u1.value_at({x, 0});
    dev = std::max(dev, std::abs(lhs - rhs) / std::abs(rhs));
  }
  CHECK(dev <= 2.0 * solver_error_band(1.0 / 64, p));
}

TEST_CASE("symmetry equivariance on a reflection-symmetric domain") {
  const FracParams p{2, 0.5};
  const Domain d = Domain::ellipse({0, 0}, 1.2, 1.0);
  const Grid g = build_grid(d, 1.0 / 12);
  const Field u = solve_torsion(d, g, p);
  // the lattice is symmetric under x -> -x, so the solution must be too
  double dev = 0.0;
  for (int i = 0; i < g.node_count(); ++i) {
    const int j = g.find(-g.index[i].x(), g.index[i].y());
    REQUIRE(j >= 0);
    dev = std::max(dev, std::abs(u.values(i) - u.values(j)));
  }
  CHECK(dev <= 1e-10);
}

TEST_CASE("exact ball solution") {
  const FracParams p1{1, 0.5};
  CHECK(exact_ball_solution({0, 0}, 1.0, p1, {0, 0}) == doctest::Approx(1.0));
  CHECK(exact_ball_solution({0, 0}, 1.0, p1, {1, 0}) == 0.0);
  CHECK(exact_ball_solution({0, 0}, 1.0, p1, {1.5, 0}) == 0.0);
  // psi itself decays like dist^s at the boundary, so the weak bound
  // gamma dist^{2s} holds with diverging ratio; the fitted exponent is s
  const FracParams p2{2, 0.5};
  std::vector<double> ld, lv;
  for (double dist : {1e-2, 1e-3, 1e-4}) {
    ld.push_back(std::log(dist));
    lv.push_back(std::log(exact_ball_solution({0, 0}, 1.0, p2, {1.0 - dist, 0})));
  }
  CHECK(oracles::fit_slope(ld, lv) == doctest::Approx(p2.s).epsilon(0.1));
  for (double dist : {1e-2, 1e-3, 1e-4})
    CHECK(exact_ball_solution({0, 0}, 1.0, p2, {1.0 - dist, 0}) >=
          ball_constant(p2) * std::pow(dist, 2.0 * p2.s));
}

TEST_CASE("energy: minimality and first-order identity") {
  const FracParams p{2, 0.5};
  const Domain d = Domain::disk({0, 0}, 1.0);
  const Grid g = build_grid(d, 1.0 / 10);
  const OperatorMatrix op = assemble_operator(d, g, p);
  const Field u = solve_torsion(g, op);
  const double hn = std::pow(g.h, g.dim);
  const double ju = energy(u, op);
  // J(u*) = -(1/2) h^n sum(u*)
  CHECK(ju == doctest::Approx(-0.5 * hn * u.values.sum()).epsilon(1e-10));
  Field zero{g, Eigen::VectorXd::Zero(g.node_count())};
  CHECK(energy(zero, op) == 0.0);
  for (int k = 0; k < 20; ++k) {
    Field v = u;
    for (int i = 0; i < g.node_count(); ++i) v.values(i) += 1e-3 * oracles::uniform(-1, 1);
    CHECK(energy(v, op) >= ju - 1e-14);
  }
}

TEST_CASE("semilinear solve") {
  const FracParams p{2, 0.5};
  const Domain d = Domain::disk({0, 0}, 1.0);
  const Grid g = build_grid(d, 1.0 / 10);
  const OperatorMatrix op = assemble_operator(d, g, p);
  const Field torsion = solve_torsion(g, op);

  SUBCASE("f == 1 reproduces the torsion solution") {
    const SemilinearResult r = solve_semilinear(g, op, {[](double) { return 1.0; }, 0.0, 1.0});
    CHECK((r.field.values - torsion.values).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK(r.positive);
  }
  SUBCASE("f(u) = 1 + 0.1 u dominates torsion nodewise") {
    const SemilinearResult r =
        solve_semilinear(g, op, {[](double u) { return 1.0 + 0.1 * u; }, 0.1, 1.0});
    CHECK(r.positive);
    CHECK(((r.field.values - torsion.values).array() >= -1e-9).all());
  }
  SUBCASE("supercritical linear growth diverges with residual history") {
    const double lam1 = 1.0 / inverse_power_estimate(op);  // principal eigenvalue estimate
    const double above = 1.3 * lam1;
    CHECK_THROWS_AS(
        solve_semilinear(g, op, {[above](double u) { return above * u + 0.1; }, above, 0.1}),
        std::runtime_error);
  }
}

TEST_CASE("energy decreases along the f == 1 Picard iterates") {
  const FracParams p{1, 0.5};
  const Domain d = Domain::interval(-1, 1);
  const Grid g = build_grid(d, 1.0 / 32);
  const OperatorMatrix op = assemble_operator(d, g, p);
  // hand-rolled undamped Picard from zero: u1 = A^{-1} 1 is already the
  // minimizer, so energies must be nonincreasing from the start
  Eigen::MatrixXd M = op.A;
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(M);
  Field u{g, Eigen::VectorXd::Zero(g.node_count())};
  double prev = energy(u, op);
  for (int k = 0; k < 3; ++k) {
    u.values = llt.solve(Eigen::VectorXd::Ones(g.node_count()));
    const double e = energy(u, op);
    CHECK(e <= prev + 1e-14);
    prev = e;
  }
}

TEST_CASE("lower bounds on the solved torsion field") {
  const FracParams p{2, 0.5};
  const Domain disk = Domain::disk({0, 0}, 1.0);
  const Field u = solve_torsion(disk, build_grid(disk, 1.0 / 16), p);

  const LowerBoundReport weak = verify_lower_bound(u, disk, p, LowerBoundMode::Weak);
  CHECK(weak.min_slack >= -weak.eps_band);
  const LowerBoundReport sph = verify_lower_bound(u, disk, p, LowerBoundMode::Sphere);
  CHECK(sph.min_slack >= -sph.eps_band);
  const LowerBoundReport cpr = verify_lower_bound(u, disk, p, LowerBoundMode::CPrime, 0.2);
  CHECK(cpr.min_slack >= -cpr.eps_band);

  // interval: the exact solution saturates the weak bound only at the center
  const FracParams p1{1, 0.5};
  const Domain iv = Domain::interval(-1, 1);
  Grid g1 = build_grid(iv, 1.0 / 128);
  Field psi{g1, Eigen::VectorXd(g1.node_count())};
  for (int i = 0; i < g1.node_count(); ++i)
    psi.values(i) = exact_ball_solution({0, 0}, 1.0, p1, g1.nodes[i]);
  const LowerBoundReport exact_rep = verify_lower_bound(psi, iv, p1, LowerBoundMode::Weak);
  CHECK(exact_rep.min_slack >= 0.0);
  CHECK(exact_rep.violating_fraction == 0.0);
}
