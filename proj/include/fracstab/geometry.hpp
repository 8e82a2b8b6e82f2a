#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracstab {

using Vec2 = Eigen::Vector2d;

enum class DomainKind { Interval, Disk, Ellipse, Rectangle, ConvexPolygon, PerturbedDisk };

// Analytic planar/interval region with exact (closed-form or Newton-refined)
// distance queries. All primitives are regular open sets; 1D points live on
// the x-axis with y = 0.
class Domain {
 public:
  static Domain interval(double a, double b);
  static Domain disk(const Vec2& center, double radius);
  static Domain ellipse(const Vec2& center, double a, double b);
  static Domain rectangle(const Vec2& center, double w, double h);
  static Domain convex_polygon(std::vector<Vec2> vertices);
  // Radial profile r(theta) = R (1 + eps cos(k theta)). eps < 1 keeps the
  // profile positive; eps (k^2+1) < 1 additionally makes the body convex and
  // is required by the domain-spec parser (see `is_admissible`).
  static Domain perturbed_disk(const Vec2& center, double radius, double eps, int k);

  DomainKind kind() const { return kind_; }
  int dim() const { return kind_ == DomainKind::Interval ? 1 : 2; }
  std::string spec_string() const;

  bool contains(const Vec2& x) const;           // open membership
  double distance(const Vec2& x) const;         // dist(x, Omega), 0 inside
  double boundary_distance(const Vec2& x) const;  // dist(x, d Omega)
  Vec2 closest_boundary_point(const Vec2& x) const;
  double signed_distance(const Vec2& x) const;  // negative inside

  // Boundary parameterization by angle-like parameter in [0, 2pi)
  // (endpoints for intervals: theta<pi -> b, else a).
  Vec2 boundary_point(double theta) const;
  Vec2 outward_normal(double theta) const;
  double boundary_curvature(double theta) const;  // n=2, signed (>0 convex)

  double support(const Vec2& dir) const;  // sup over Omega of x . dir
  double diameter() const;
  double area() const;       // length for n=1
  double perimeter() const;  // boundary point count (=2) for n=1
  double inradius() const;
  Vec2 inradius_center() const;
  bool is_convex() const;
  bool is_admissible() const;  // perturbed disk: eps (k^2+1) < 1; others: true
  Vec2 centroid_hint() const;

  Domain translated(const Vec2& shift) const;
  Domain rotated(double angle) const;  // about the origin, n=2 only

  // parameters (valid fields depend on kind)
  double p_a = 0.0, p_b = 0.0;  // interval ends; ellipse/pdisk semi-axes/eps
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  double width = 0.0, height = 0.0;
  int freq = 0;  // perturbed-disk angular frequency k
  std::vector<Vec2> vertices;

 private:
  explicit Domain(DomainKind k) : kind_(k) {}
  DomainKind kind_;
};

// Ordered sample of the outer parallel surface Gamma_t.
struct ParallelSurface {
  double t = 0.0;
  std::vector<Vec2> points;
  double spacing = 0.0;  // max gap between consecutive samples
};

struct Direction {
  Vec2 omega;
  explicit Direction(const Vec2& w) : omega(w) {
    const double n = omega.norm();
    if (!(std::abs(n - 1.0) <= 1e-12)) {
      if (!(n > 0.0)) throw std::invalid_argument("Direction: zero vector");
      omega /= n;
    }
  }
  static Direction angle(double a) { return Direction(Vec2(std::cos(a), std::sin(a))); }
};

struct FedererReport {
  double max_violation = 0.0;  // max over pairs of v.(y-x) - |y-x|^2/(2r)
  int pair_count = 0;
};

struct ReachCertificate {
  double value = 0.0;  // certified lower bound (capped for convex domains)
  bool capped = false;
};

double distance_to_set(const Domain& d, const Vec2& x);
double distance_to_boundary(const Domain& d, const Vec2& x);

ParallelSurface parallel_surface(const Domain& d, double t, int m);

// True iff m sampled exterior points within distance r_test of the closure
// all have a numerically unique nearest-point projection.
bool estimate_reach(const Domain& d, double r_test, int m);

// Largest numerically certified reach lower bound; convex domains get the
// conventional cap 10*diam.
ReachCertificate certified_reach(const Domain& d);

FedererReport federer_check(const Domain& d, double r, int m);

double interior_sphere_radius(const Domain& d);  // throws for polygons

double half_tube_measure(const Domain& d, double gamma);

double curvature_measure(const Domain& d);  // Phi_1 via Steiner fit, n=2

Vec2 reflect(const Vec2& x, const Direction& w, double lambda);

double symmetric_difference_measure(const Domain& d, const Direction& w, double lambda);

double deficit(const Domain& d);

// Grid measure of {x : predicate-signed-distance sd(x) <= 0} refined until the
// (h, h/2) difference meets abs_tol; sd must be 1-Lipschitz near its zero set.
double grid_measure(const Domain& bbox_of, const std::function<double(const Vec2&)>& sd,
                    double rel_tol, double abs_floor, double extra_margin = 0.0);

}  // namespace fracstab
