#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracstab/movingplane.hpp"
#include "fracstab/neumann.hpp"
#include "oracles.hpp"

using namespace fracstab;
using oracles::kPi;

namespace {
const double kT = 0.3;
}

TEST_CASE("critical values on disks") {
  const Domain disk = Domain::disk({0, 0}, 1.0);
  const double tol = default_tol_mp(disk);
  CHECK(std::abs(critical_value(disk, kT, Direction(Vec2(1, 0)), tol)) <= tol);
  // translation equivariance
  const Domain moved = Domain::disk({0.3, 0.0}, 1.0);
  CHECK(critical_value(moved, kT, Direction(Vec2(1, 0)), tol) == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(classical_critical_value(moved, kT, Direction(Vec2(1, 0)), tol) ==
        doctest::Approx(0.3).epsilon(1e-3));
}

TEST_CASE("critical value guard: t at or above the certified reach is refused") {
  const Domain bump = Domain::perturbed_disk({0, 0}, 1.0, 0.3, 2);
  const double r = certified_reach(bump).value;
  CHECK_THROWS_AS(critical_value(bump, 1.5 * r, Direction(Vec2(1, 0)), 1e-4),
                  std::invalid_argument);
  CHECK_NOTHROW(critical_value(bump, 0.5 * r, Direction(Vec2(1, 0)), 1e-4));
}

TEST_CASE("ellipse critical values: axis symmetry and central symmetry") {
  const Domain el = Domain::ellipse({0, 0}, 1.2, 1.0);
  const double tol = default_tol_mp(el);
  CHECK(std::abs(critical_value(el, kT, Direction(Vec2(1, 0)), tol)) <= tol);
  CHECK(std::abs(critical_value(el, kT, Direction(Vec2(0, 1)), tol)) <= tol);
  // central symmetry pairs lambda*(w) with lambda*(-w)
  const Direction w = Direction::angle(kPi / 4.0);
  const Direction wm = Direction::angle(kPi + kPi / 4.0);
  const double lp = critical_value(el, kT, w, tol);
  const double lm = critical_value(el, kT, wm, tol);
  CHECK(lp == doctest::Approx(lm).epsilon(2e-3));
  CHECK(lp > 0.1);  // a non-axis direction genuinely stops early
}

TEST_CASE("classical value never exceeds the closure-based value") {
  const std::vector<Domain> domains = {
      Domain::disk({0.2, -0.1}, 1.0), Domain::ellipse({0, 0}, 1.2, 1.0),
      Domain::rectangle({0, 0}, 2, 2),
      Domain::convex_polygon({{1.2, -0.2}, {0.9, 0.8}, {-0.3, 1.0}, {-1.1, 0.4}, {-1.0, -0.6},
                              {-0.4, -1.0}, {0.8, -1.0}})};
  for (const Domain& d : domains) {
    const double tol = default_tol_mp(d);
    for (int k = 0; k < 8; ++k) {
      const Direction w = Direction::angle(2.0 * kPi * k / 8);
      const double ls = critical_value(d, kT, w, tol);
      const double lh = classical_critical_value(d, kT, w, tol);
      CHECK(lh <= ls + tol);
    }
  }
}

TEST_CASE("flat edges stop the closure-based plane early (Figure-1a mechanism)") {
  const Domain sq = Domain::rectangle({0, 0}, 2, 2);
  const double tol = default_tol_mp(sq);
  const Direction e1(Vec2(1, 0));
  const double ls = critical_value(sq, kT, e1, tol);
  const double lh = classical_critical_value(sq, kT, e1, tol);
  // top/bottom edges are parallel to e1: the reflected closure grazes the
  // boundary until the half-width, while the open cap slides to the center
  CHECK(ls == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(std::abs(lh) <= 2.0 * tol);
  // the asymmetric corpus polygon with a horizontal bottom edge shows the
  // same strict gap
  const Domain poly = Domain::convex_polygon(
      {{1.2, -0.2}, {0.9, 0.8}, {-0.3, 1.0}, {-1.1, 0.4}, {-1.0, -0.6}, {-0.4, -1.0}, {0.8, -1.0}});
  const double tolp = default_tol_mp(poly);
  const double lsp = critical_value(poly, kT, e1, tolp);
  const double lhp = classical_critical_value(poly, kT, e1, tolp);
  CHECK(lsp > lhp + 10.0 * tolp);
  CHECK(lsp == doctest::Approx(0.8).epsilon(2e-3));  // right end of the bottom edge
}

TEST_CASE("rotation equivariance") {
  const Domain poly = Domain::convex_polygon(
      {{1.2, -0.2}, {0.9, 0.8}, {-0.3, 1.0}, {-1.1, 0.4}, {-1.0, -0.6}, {-0.4, -1.0}, {0.8, -1.0}});
  const double ang = 0.53;
  const Domain rot = poly.rotated(ang);
  const double tol = default_tol_mp(poly);
  for (double base : {0.0, 1.1, 2.3}) {
    const double a = critical_value(poly, kT, Direction::angle(base), tol);
    const double b = critical_value(rot, kT, Direction::angle(base + ang), tol);
    CHECK(a == doctest::Approx(b).epsilon(2e-3));
  }
}

TEST_CASE("translation equivariance along the direction") {
  const Domain el = Domain::ellipse({0, 0}, 1.2, 1.0);
  const Direction w = Direction::angle(0.7);
  const double tol = default_tol_mp(el);
  const double base = critical_value(el, kT, w, tol);
  const double a = 0.42;
  const Domain shifted = el.translated(a * w.omega);
  CHECK(critical_value(shifted, kT, w, tol) == doctest::Approx(base + a).epsilon(2e-3));
}

TEST_CASE("classification: symmetric coincidence reports Both") {
  const Domain el = Domain::ellipse({0, 0}, 1.2, 1.0);
  const double tol = default_tol_mp(el);
  const TouchReport r = classify_touching(el, kT, Direction(Vec2(1, 0)), 0.0, tol);
  CHECK(r.kind == TouchingCase::Both);
  CHECK(r.coincidence_fraction > 0.9);
  const Domain moved = Domain::disk({0.3, 0}, 1.0);
  const TouchReport r2 = classify_touching(moved, kT, Direction(Vec2(1, 0)), 0.3, tol);
  CHECK(r2.kind == TouchingCase::Both);
}

TEST_CASE("Figure-1b right triangle: both cases occur at the critical position") {
  const Domain tri = Domain::convex_polygon({{-1, -1}, {1, 1}, {1, -1}});
  const double tol = default_tol_mp(tri);
  const Direction e1(Vec2(1, 0));
  const double ls = critical_value(tri, kT, e1, tol);
  CHECK(ls == doctest::Approx(1.0).epsilon(2e-3));
  const TouchReport r = classify_touching(tri, kT, e1, ls, tol);
  CHECK(r.kind == TouchingCase::Both);
  REQUIRE(r.interior_point.has_value());
  REQUIRE(r.nontransversal_point.has_value());
  // non-transversal point sits at the bottom of the corner arc on T_star
  CHECK(r.nontransversal_point->x() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.nontransversal_point->y() == doctest::Approx(-1.0 - kT).epsilon(0.02));
}

TEST_CASE("inclusion lemma holds on the corpus below the reach") {
  const std::vector<Domain> domains = {
      Domain::disk({0, 0}, 1.0), Domain::ellipse({0, 0}, 1.4, 1.0),
      Domain::rectangle({0, 0}, 2, 2).rotated(0.0),
      Domain::convex_polygon({{1.2, -0.2}, {0.9, 0.8}, {-0.3, 1.0}, {-1.1, 0.4}, {-1.0, -0.6},
                              {-0.4, -1.0}, {0.8, -1.0}}),
      Domain::perturbed_disk({0, 0}, 1.0, 0.08, 3)};
  for (const Domain& d : domains) {
    const double tol = default_tol_mp(d);
    for (int k = 0; k < 8; ++k) {
      const Direction w = Direction::angle(2.0 * kPi * k / 8 + 0.13);
      const double ls = critical_value(d, kT, w, tol);
      const InclusionReport rep = check_inclusion(d, kT, w, ls);
      CHECK(rep.violating_fraction == 0.0);
      CHECK(rep.max_penetration <= rep.tolerance);
    }
  }
}

TEST_CASE("symmetric difference at the critical value vanishes for symmetric domains") {
  const Domain el = Domain::ellipse({0, 0}, 1.2, 1.0);
  const double tol = default_tol_mp(el);
  const double ls = critical_value(el, kT, Direction(Vec2(1, 0)), tol);
  CHECK(symmetric_difference_measure(el, Direction(Vec2(1, 0)), ls) <= 2e-3 * el.area());
}

TEST_CASE("quantitative one-direction estimate") {
  const FracParams p{2, 0.5};
  const Domain el = Domain::ellipse({0, 0}, 1.2, 1.0);
  const double tol = default_tol_mp(el);
  const Grid g = build_grid(el, 1.0 / 16);
  const Field u = solve_torsion(el, g, p);
  const double sem = neumann_trace(u, el, p, kT, 64).seminorm;
  const double reach = certified_reach(el).value;

  SUBCASE("symmetric direction: lhs at grid tolerance") {
    const double ls = critical_value(el, kT, Direction(Vec2(1, 0)), tol);
    auto [lhs, rhs] = quantitative_onedir(u, el, p, Direction(Vec2(1, 0)), ls, kT, sem, reach);
    CHECK(lhs <= 5.0 * g.h * el.diameter());  // one cell layer at most
    CHECK(rhs >= 0.0);
  }
  SUBCASE("30-degree direction: inequality with positive margin") {
    const Direction w = Direction::angle(kPi / 6.0);
    const double ls = critical_value(el, kT, w, tol);
    auto [lhs, rhs] = quantitative_onedir(u, el, p, w, ls, kT, sem, reach);
    CHECK(lhs >= 0.0);
    CHECK(lhs <= rhs);
  }
  SUBCASE("disk: empty difference set") {
    const Domain disk = Domain::disk({0, 0}, 1.0);
    const Field ud = solve_torsion(disk, build_grid(disk, 1.0 / 16), p);
    const double ls = critical_value(disk, kT, Direction(Vec2(1, 0)), default_tol_mp(disk));
    const double semd = neumann_trace(ud, disk, p, kT, 64).seminorm;
    auto [lhs, rhs] =
        quantitative_onedir(ud, disk, p, Direction(Vec2(1, 0)), ls, kT, semd, 20.0);
    CHECK(lhs <= 5.0 * (1.0 / 16) * 2.0);
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("moving plane analyze bundles a consistent result") {
  const Domain el = Domain::ellipse({0, 0}, 1.2, 1.0);
  const MovingPlaneResult r = moving_plane_analyze(el, kT, Direction(Vec2(0, 1)), default_tol_mp(el));
  CHECK(std::abs(r.lambda_star) <= 1e-3);
  CHECK(r.lambda_hat <= r.lambda_star + default_tol_mp(el));
  CHECK(r.inclusion.ok());
  CHECK(r.sym_diff <= 2e-3 * el.area());
  CHECK(r.touching.kind == TouchingCase::Both);
}
