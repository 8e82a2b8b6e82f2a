#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracstab/geometry.hpp"
#include "oracles.hpp"

using namespace fracstab;
using oracles::kPi;

TEST_CASE("distance to set: closed forms") {
  const Domain disk = Domain::disk({0, 0}, 1.0);
  CHECK(distance_to_set(disk, {2, 0}) == doctest::Approx(1.0));
  CHECK(distance_to_set(disk, {0.3, 0.1}) == 0.0);

  const Domain sq = Domain::rectangle({0, 0}, 2.0, 2.0);
  CHECK(distance_to_set(sq, {2, 2}) == doctest::Approx(std::sqrt(2.0)));

  const Domain el = Domain::ellipse({0, 0}, 2.0, 1.0);
  CHECK(distance_to_set(el, {3, 0}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(distance_to_set(el, {0, -2}) == doctest::Approx(1.0).epsilon(1e-9));

  const Domain iv = Domain::interval(-1, 1);
  CHECK(distance_to_set(iv, {1.5, 0}) == doctest::Approx(0.5));
  CHECK(distance_to_set(iv, {0.2, 0}) == 0.0);
}

TEST_CASE("distance to boundary: closed forms") {
  CHECK(distance_to_boundary(Domain::disk({0, 0}, 1.0), {0, 0}) == doctest::Approx(1.0));
  CHECK(distance_to_boundary(Domain::interval(-1, 1), {0.25, 0}) == doctest::Approx(0.75));
  CHECK(distance_to_boundary(Domain::rectangle({0, 0}, 2, 2), {0.5, 0}) == doctest::Approx(0.5));
}

TEST_CASE("distance is 1-Lipschitz and vanishes exactly on the closure") {
  const Domain dom = Domain::perturbed_disk({0.2, -0.1}, 1.0, 0.08, 3);
  for (int i = 0; i < 200; ++i) {
    const Vec2 x(oracles::uniform(-2, 2), oracles::uniform(-2, 2));
    const Vec2 y(oracles::uniform(-2, 2), oracles::uniform(-2, 2));
    CHECK(std::abs(dom.distance(x) - dom.distance(y)) <= (x - y).norm() + 1e-12);
    if (dom.contains(x)) CHECK(dom.distance(x) == 0.0);
    if (dom.distance(x) > 1e-9) CHECK_FALSE(dom.contains(x));
  }
  // straddle the boundary
  for (int i = 0; i < 64; ++i) {
    const double th = 2.0 * kPi * i / 64;
    const Vec2 b = dom.boundary_point(th), nu = dom.outward_normal(th);
    CHECK(dom.distance(b + 1e-3 * nu) == doctest::Approx(1e-3).epsilon(1e-3));
    CHECK(dom.distance(b - 1e-3 * nu) == 0.0);
  }
}

TEST_CASE("parallel surface of the disk is a concentric circle") {
  const Domain disk = Domain::disk({0, 0}, 1.0);
  const ParallelSurface ps = parallel_surface(disk, 0.5, 64);
  CHECK(ps.points.size() == 64);
  for (const Vec2& p : ps.points) CHECK(p.norm() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_AS(parallel_surface(disk, 0.5, 8), std::invalid_argument);
}

TEST_CASE("parallel surface of a square is the offset stadium curve") {
  const Domain sq = Domain::rectangle({0, 0}, 2.0, 2.0);
  const ParallelSurface ps = parallel_surface(sq, 0.5, 256);
  for (const Vec2& p : ps.points)
    CHECK(std::abs(sq.distance(p) - 0.5) <= 1e-9 * sq.diameter());
  // ordered traversal: consecutive gaps comparable to perimeter/m
  const double per_offset = sq.perimeter() + 2.0 * kPi * 0.5;
  CHECK(ps.spacing < 2.5 * per_offset / 256);
}

TEST_CASE("parallel surface of an interval") {
  const ParallelSurface ps = parallel_surface(Domain::interval(-1, 1), 0.25, 16);
  REQUIRE(ps.points.size() == 2);
  CHECK(ps.points[0].x() == doctest::Approx(-1.25));
  CHECK(ps.points[1].x() == doctest::Approx(1.25));
}

TEST_CASE("parallel surface points have unique projections below the reach") {
  const Domain el = Domain::ellipse({0, 0}, 1.2, 1.0);
  const ParallelSurface ps = parallel_surface(el, 0.3, 64);
  for (const Vec2& p : ps.points) {
    const Vec2 q = el.closest_boundary_point(p);
    CHECK((p - q).norm() == doctest::Approx(0.3).epsilon(1e-8));
  }
}

TEST_CASE("reach estimation: convex domains certify any radius") {
  CHECK(estimate_reach(Domain::disk({0, 0}, 1.0), 5.0, 128));
  CHECK(estimate_reach(Domain::rectangle({0, 0}, 2, 1), 8.0, 128));
  CHECK(certified_reach(Domain::disk({0, 0}, 1.0)).capped);
  CHECK(certified_reach(Domain::disk({0, 0}, 1.0)).value == doctest::Approx(20.0));
}

TEST_CASE("reach estimation: two-bump perturbed disk against the medial-axis oracle") {
  // eps (k^2+1) = 1.5 > 1: deliberately outside the convex/admissible class
  const Domain bump = Domain::perturbed_disk({0, 0}, 1.0, 0.3, 2);
  CHECK_FALSE(bump.is_admissible());
  CHECK_FALSE(bump.is_convex());
  // oracle: the exterior medial-axis distance near the concave notch is the
  // curvature radius bound min over concave theta of 1/|kappa|
  double r_oracle = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4096; ++i) {
    const double kappa = bump.boundary_curvature(2.0 * kPi * i / 4096);
    if (kappa < 0.0) r_oracle = std::min(r_oracle, 1.0 / std::abs(kappa));
  }
  REQUIRE(std::isfinite(r_oracle));
  CHECK(estimate_reach(bump, 0.5 * r_oracle, 256));
  CHECK_FALSE(estimate_reach(bump, 2.0 * r_oracle, 256));
  const ReachCertificate rc = certified_reach(bump);
  CHECK_FALSE(rc.capped);
  CHECK(rc.value > 0.25 * r_oracle);
  CHECK(rc.value < 2.0 * r_oracle);
}

TEST_CASE("Federer inequality on the corpus primitives") {
  // unit circle: v.(y-x) = -|y-x|^2/2 exactly for boundary pairs
  const FedererReport disk_rep = federer_check(Domain::disk({0, 0}, 1.0), 1.0, 64);
  CHECK(disk_rep.max_violation <= 1e-12);
  const FedererReport sq_rep = federer_check(Domain::rectangle({0, 0}, 2, 2), 3.0, 64);
  CHECK(sq_rep.max_violation <= 1e-12);
  const Domain bump = Domain::perturbed_disk({0, 0}, 1.0, 0.3, 2);
  const double r_cert = certified_reach(bump).value;
  CHECK(federer_check(bump, r_cert, 64).max_violation <= 1e-9);
}

TEST_CASE("interior sphere radius") {
  CHECK(interior_sphere_radius(Domain::disk({0, 0}, 1.0)) == doctest::Approx(1.0));
  CHECK(interior_sphere_radius(Domain::ellipse({0, 0}, 2.0, 1.0)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(interior_sphere_radius(Domain::rectangle({0, 0}, 2, 2)), std::invalid_argument);
  // sampled curvature agrees with the closed form for the ellipse
  const Domain el = Domain::ellipse({0, 0}, 2.0, 1.0);
  double min_rad = 1e300;
  for (int i = 0; i < 4096; ++i)
    min_rad = std::min(min_rad, 1.0 / el.boundary_curvature(2.0 * kPi * i / 4096));
  CHECK(min_rad == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("half-tube measures against closed forms") {
  const Domain sq1 = Domain::rectangle({0, 0}, 1.0, 1.0);
  CHECK(half_tube_measure(sq1, 0.1) == doctest::Approx(0.36).epsilon(0.005));
  const Domain disk = Domain::disk({0, 0}, 1.0);
  CHECK(half_tube_measure(disk, 0.2) == doctest::Approx(0.36 * kPi).epsilon(0.005));
  // gamma at least the inradius swallows the whole domain
  CHECK(half_tube_measure(disk, 1.5) == doctest::Approx(kPi));
  CHECK(half_tube_measure(Domain::interval(-1, 1), 0.25) == doctest::Approx(0.5));
}

TEST_CASE("half-tube bounds from the perimeter and the curvature measure") {
  for (const Domain& d : {Domain::disk({0, 0}, 1.0), Domain::rectangle({0, 0}, 2, 1),
                          Domain::ellipse({0, 0}, 1.2, 1.0)}) {
    const double phi1 = curvature_measure(d);
    const double r = certified_reach(d).value;
    for (double g = 0.02; g < d.inradius(); g *= 2.3) {
      const double tube = half_tube_measure(d, g);
      CHECK(tube <= g * d.perimeter() * 1.01 + 1e-9);
      CHECK(tube <= g * (1.0 + 2.0 * g / r) * 2.0 * phi1 * 1.01 + 1e-9);
    }
  }
}

TEST_CASE("curvature measure via Steiner fit") {
  CHECK(curvature_measure(Domain::disk({0, 0}, 1.0)) == doctest::Approx(kPi).epsilon(0.01));
  CHECK(curvature_measure(Domain::rectangle({0, 0}, 1.0, 1.0)) == doctest::Approx(2.0).epsilon(0.01));
  // homogeneity of degree n-1 = 1
  const double phi_a = curvature_measure(Domain::disk({0, 0}, 1.0));
  const double phi_b = curvature_measure(Domain::disk({0, 0}, 1.7));
  CHECK(phi_b / phi_a == doctest::Approx(1.7).epsilon(0.02));
}

TEST_CASE("reflection is an involutive isometry") {
  const Direction e1(Vec2(1, 0));
  CHECK((reflect({1, 0}, e1, 0.0) - Vec2(-1, 0)).norm() == doctest::Approx(0.0));
  CHECK((reflect({3, 2}, e1, 1.0) - Vec2(-1, 2)).norm() == doctest::Approx(0.0));
  for (int i = 0; i < 100; ++i) {
    const Vec2 x(oracles::uniform(-3, 3), oracles::uniform(-3, 3));
    const Vec2 y(oracles::uniform(-3, 3), oracles::uniform(-3, 3));
    const Direction w = Direction::angle(oracles::uniform(0, 2 * kPi));
    const double lam = oracles::uniform(-1, 1);
    CHECK((reflect(reflect(x, w, lam), w, lam) - x).norm() <= 1e-12);
    CHECK((reflect(x, w, lam) - reflect(y, w, lam)).norm() == doctest::Approx((x - y).norm()));
  }
}

TEST_CASE("symmetric difference measure") {
  const Direction e1(Vec2(1, 0));
  CHECK(symmetric_difference_measure(Domain::disk({0, 0}, 1.0), e1, 0.0) <=
        1e-4 * kPi + 1e-9);
  // two unit disks, centers 0.2 apart: closed-form lens complement
  const double a = 0.1;
  const double expected = 2.0 * (kPi - oracles::disk_lens_area(1.0, 2.0 * a));
  CHECK(symmetric_difference_measure(Domain::disk({a, 0}, 1.0), e1, 0.0) ==
        doctest::Approx(expected).epsilon(0.02));
  // |A xor A^l| = 2 |A \ A^l|: brute-force counting oracle on a random lambda
  const Domain el = Domain::ellipse({0, 0}, 1.2, 1.0);
  const double lam = 0.37;
  const double xor_measured = symmetric_difference_measure(el, e1, lam);
  const double setminus = oracles::brute_area(
      [&](const Vec2& x) { return el.contains(x) && !el.contains(reflect(x, e1, lam)); }, -2.6, 2.6,
      -2.6, 2.6, 1400);
  CHECK(xor_measured == doctest::Approx(2.0 * setminus).epsilon(0.02));
}

TEST_CASE("deficit closed forms and rigid-motion invariance") {
  CHECK(deficit(Domain::disk({0.4, -0.3}, 1.0)) <= 1e-6);
  CHECK(deficit(Domain::ellipse({0, 0}, 1.2, 1.0)) == doctest::Approx(0.2).epsilon(1e-3));
  CHECK(deficit(Domain::rectangle({0, 0}, 1.0, 1.0)) ==
        doctest::Approx(std::sqrt(2.0) / 2.0 - 0.5).epsilon(1e-3));
  // brute-force center-grid oracle for the ellipse: optimum sits at the center
  const Domain el = Domain::ellipse({0, 0}, 1.2, 1.0);
  double best = 1e300;
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) {
      const Vec2 x(0.05 * i, 0.045 * j);
      if (!el.contains(x)) continue;
      double far = 0.0;
      for (int k = 0; k < 2048; ++k)
        far = std::max(far, (el.boundary_point(2.0 * kPi * k / 2048) - x).norm());
      best = std::min(best, far - el.boundary_distance(x));
    }
  CHECK(best == doctest::Approx(0.2).epsilon(1e-3));
  // rigid motions
  const double rho0 = deficit(el);
  CHECK(deficit(el.translated({0.7, -1.1})) == doctest::Approx(rho0).epsilon(1e-3));
  const Domain rot_sq = Domain::convex_polygon(
      {{0.5, 0.5}, {-0.5, 0.5}, {-0.5, -0.5}, {0.5, -0.5}});
  const double rho_sq = deficit(Domain::rectangle({0, 0}, 1, 1));
  CHECK(deficit(rot_sq.rotated(0.5)) == doctest::Approx(rho_sq).epsilon(1e-3));
}

TEST_CASE("domain invariants and constructor guards") {
  CHECK_THROWS_AS(Domain::interval(1, -1), std::invalid_argument);
  CHECK_THROWS_AS(Domain::disk({0, 0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Domain::perturbed_disk({0, 0}, 1.0, 1.2, 2), std::invalid_argument);
  CHECK_THROWS_AS(Domain::convex_polygon({{0, 0}, {1, 0}, {2, 0}}), std::invalid_argument);
  // admissible perturbed disks are convex: positive curvature everywhere
  const Domain pd = Domain::perturbed_disk({0, 0}, 1.0, 0.08, 3);
  CHECK(pd.is_admissible());
  for (int i = 0; i < 512; ++i) CHECK(pd.boundary_curvature(2.0 * kPi * i / 512) > 0.0);
  // pdisk area closed form pi R^2 (1 + eps^2/2) against brute-force counting
  const double brute = oracles::brute_area([&](const Vec2& x) { return pd.contains(x); }, -1.2, 1.2,
                                           -1.2, 1.2, 1200);
  CHECK(pd.area() == doctest::Approx(brute).epsilon(0.01));
}

TEST_CASE("support function matches dense boundary maxima") {
  const Domain el = Domain::ellipse({0.3, -0.2}, 1.4, 0.9);
  for (int k = 0; k < 12; ++k) {
    const Vec2 w(std::cos(0.5 + k), std::sin(0.5 + k));
    double brute = -1e300;
    for (int i = 0; i < 8192; ++i)
      brute = std::max(brute, el.boundary_point(2.0 * kPi * i / 8192).dot(w));
    CHECK(el.support(w) == doctest::Approx(brute).epsilon(1e-6));
  }
}
