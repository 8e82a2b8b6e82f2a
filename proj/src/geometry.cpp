#include "fracstab/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace fracstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double seg_distance(const Vec2& p, const Vec2& a, const Vec2& b, Vec2* closest = nullptr) {
  const Vec2 ab = b - a;
  const double t = clamp(ab.squaredNorm() > 0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0, 0.0, 1.0);
  const Vec2 q = a + t * ab;
  if (closest) *closest = q;
  return (p - q).norm();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// constructors

Domain Domain::interval(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("interval: need a < b");
  Domain d(DomainKind::Interval);
  d.p_a = a;
  d.p_b = b;
  return d;
}

Domain Domain::disk(const Vec2& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk: radius must be positive");
  Domain d(DomainKind::Disk);
  d.center = center;
  d.radius = radius;
  return d;
}

Domain Domain::ellipse(const Vec2& center, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipse: semi-axes must be positive");
  Domain d(DomainKind::Ellipse);
  d.center = center;
  d.p_a = a;
  d.p_b = b;
  return d;
}

Domain Domain::rectangle(const Vec2& center, double w, double h) {
  if (!(w > 0.0) || !(h > 0.0)) throw std::invalid_argument("rectangle: sides must be positive");
  Domain d(DomainKind::Rectangle);
  d.center = center;
  d.width = w;
  d.height = h;
  return d;
}

Domain Domain::convex_polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("polygon: need at least 3 vertices");
  // enforce counter-clockwise orientation
  double twice_area = 0.0;
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % n];
    twice_area += p.x() * q.y() - q.x() * p.y();
  }
  if (twice_area < 0.0) std::reverse(vertices.begin(), vertices.end());
  for (size_t i = 0; i < n; ++i) {
    const Vec2 e1 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    const double cross = e1.x() * e2.y() - e1.y() * e2.x();
    if (cross <= 0.0) throw std::invalid_argument("polygon: vertices must be strictly convex");
  }
  Domain d(DomainKind::ConvexPolygon);
  d.vertices = std::move(vertices);
  return d;
}

Domain Domain::perturbed_disk(const Vec2& center, double radius, double eps, int k) {
  if (!(radius > 0.0)) throw std::invalid_argument("perturbed_disk: radius must be positive");
  if (k < 1) throw std::invalid_argument("perturbed_disk: k must be >= 1");
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("perturbed_disk: need 0 <= eps < 1 for a positive radial profile");
  Domain d(DomainKind::PerturbedDisk);
  d.center = center;
  d.radius = radius;
  d.p_a = eps;
  d.freq = k;
  return d;
}

std::string Domain::spec_string() const {
  switch (kind_) {
    case DomainKind::Interval:
      return "interval:a=" + fmt(p_a) + ",b=" + fmt(p_b);
    case DomainKind::Disk:
      return "disk:cx=" + fmt(center.x()) + ",cy=" + fmt(center.y()) + ",R=" + fmt(radius);
    case DomainKind::Ellipse:
      return "ellipse:cx=" + fmt(center.x()) + ",cy=" + fmt(center.y()) + ",a=" + fmt(p_a) +
             ",b=" + fmt(p_b);
    case DomainKind::Rectangle:
      return "rect:cx=" + fmt(center.x()) + ",cy=" + fmt(center.y()) + ",w=" + fmt(width) +
             ",h=" + fmt(height);
    case DomainKind::PerturbedDisk:
      return "pdisk:cx=" + fmt(center.x()) + ",cy=" + fmt(center.y()) + ",R=" + fmt(radius) +
             ",eps=" + fmt(p_a) + ",k=" + std::to_string(freq);
    case DomainKind::ConvexPolygon: {
      std::string s = "poly:v=";
      for (size_t i = 0; i < vertices.size(); ++i) {
        if (i) s += ";";
        s += fmt(vertices[i].x()) + ";" + fmt(vertices[i].y());
      }
      return s;
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// perturbed-disk radial profile helpers

namespace {

struct Radial {
  double R, eps;
  int k;
  double r(double th) const { return R * (1.0 + eps * std::cos(k * th)); }
  double dr(double th) const { return -R * eps * k * std::sin(k * th); }
  double ddr(double th) const { return -R * eps * k * k * std::cos(k * th); }
};

Radial radial_of(const Domain& d) { return Radial{d.radius, d.p_a, d.freq}; }

}  // namespace

// ---------------------------------------------------------------------------
// membership and boundary parameterization

bool Domain::contains(const Vec2& x) const {
  switch (kind_) {
    case DomainKind::Interval:
      return x.x() > p_a && x.x() < p_b;
    case DomainKind::Disk:
      return (x - center).norm() < radius;
    case DomainKind::Ellipse: {
      const Vec2 q = x - center;
      return (q.x() / p_a) * (q.x() / p_a) + (q.y() / p_b) * (q.y() / p_b) < 1.0;
    }
    case DomainKind::Rectangle: {
      const Vec2 q = x - center;
      return std::abs(q.x()) < 0.5 * width && std::abs(q.y()) < 0.5 * height;
    }
    case DomainKind::ConvexPolygon: {
      const size_t n = vertices.size();
      for (size_t i = 0; i < n; ++i) {
        const Vec2 e = vertices[(i + 1) % n] - vertices[i];
        const Vec2 q = x - vertices[i];
        if (e.x() * q.y() - e.y() * q.x() <= 0.0) return false;
      }
      return true;
    }
    case DomainKind::PerturbedDisk: {
      const Vec2 q = x - center;
      const double rho = q.norm();
      if (rho == 0.0) return true;
      return rho < radial_of(*this).r(std::atan2(q.y(), q.x()));
    }
  }
  return false;
}

Vec2 Domain::boundary_point(double theta) const {
  switch (kind_) {
    case DomainKind::Interval: {
      double th = std::fmod(theta, 2.0 * kPi);
      if (th < 0) th += 2.0 * kPi;
      return Vec2(th < kPi ? p_b : p_a, 0.0);
    }
    case DomainKind::Disk:
      return center + radius * Vec2(std::cos(theta), std::sin(theta));
    case DomainKind::Ellipse:
      return center + Vec2(p_a * std::cos(theta), p_b * std::sin(theta));
    case DomainKind::Rectangle: {
      // perimeter walk, theta in [0,2pi) mapped to arclength fraction
      double th = std::fmod(theta, 2.0 * kPi);
      if (th < 0) th += 2.0 * kPi;
      const double per = 2.0 * (width + height);
      double sarc = per * th / (2.0 * kPi);
      const double hw = 0.5 * width, hh = 0.5 * height;
      if (sarc < width) return center + Vec2(-hw + sarc, -hh);
      sarc -= width;
      if (sarc < height) return center + Vec2(hw, -hh + sarc);
      sarc -= height;
      if (sarc < width) return center + Vec2(hw - sarc, hh);
      sarc -= width;
      return center + Vec2(-hw, hh - sarc);
    }
    case DomainKind::ConvexPolygon: {
      double th = std::fmod(theta, 2.0 * kPi);
      if (th < 0) th += 2.0 * kPi;
      const double per = perimeter();
      double sarc = per * th / (2.0 * kPi);
      const size_t n = vertices.size();
      for (size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices[i], b = vertices[(i + 1) % n];
        const double len = (b - a).norm();
        if (sarc <= len) return a + (sarc / len) * (b - a);
        sarc -= len;
      }
      return vertices.front();
    }
    case DomainKind::PerturbedDisk: {
      const double r = radial_of(*this).r(theta);
      return center + r * Vec2(std::cos(theta), std::sin(theta));
    }
  }
  return Vec2::Zero();
}

Vec2 Domain::outward_normal(double theta) const {
  switch (kind_) {
    case DomainKind::Interval: {
      double th = std::fmod(theta, 2.0 * kPi);
      if (th < 0) th += 2.0 * kPi;
      return Vec2(th < kPi ? 1.0 : -1.0, 0.0);
    }
    case DomainKind::Disk:
      return Vec2(std::cos(theta), std::sin(theta));
    case DomainKind::Ellipse: {
      Vec2 nrm(p_b * std::cos(theta), p_a * std::sin(theta));
      return nrm.normalized();
    }
    case DomainKind::Rectangle:
    case DomainKind::ConvexPolygon: {
      // normal of the edge containing boundary_point(theta); corner points get
      // the preceding edge's normal
      const Vec2 p = boundary_point(theta);
      const Vec2 p2 = boundary_point(theta + 1e-7);
      Vec2 tan = p2 - p;
      if (tan.norm() == 0.0) tan = Vec2(1, 0);
      tan.normalize();
      return Vec2(tan.y(), -tan.x());
    }
    case DomainKind::PerturbedDisk: {
      const Radial rad = radial_of(*this);
      const double r = rad.r(theta), dr = rad.dr(theta);
      const double c = std::cos(theta), s = std::sin(theta);
      const Vec2 tangent(dr * c - r * s, dr * s + r * c);
      Vec2 nrm(tangent.y(), -tangent.x());
      nrm.normalize();
      // orient outward (radial component positive)
      if (nrm.dot(Vec2(c, s)) < 0) nrm = -nrm;
      return nrm;
    }
  }
  return Vec2::UnitX();
}

double Domain::boundary_curvature(double theta) const {
  switch (kind_) {
    case DomainKind::Disk:
      return 1.0 / radius;
    case DomainKind::Ellipse: {
      const double a = p_a, b = p_b;
      const double den = std::pow(a * a * std::sin(theta) * std::sin(theta) +
                                      b * b * std::cos(theta) * std::cos(theta),
                                  1.5);
      return a * b / den;
    }
    case DomainKind::PerturbedDisk: {
      const Radial rad = radial_of(*this);
      const double r = rad.r(theta), dr = rad.dr(theta), ddr = rad.ddr(theta);
      const double num = r * r + 2.0 * dr * dr - r * ddr;
      const double den = std::pow(r * r + dr * dr, 1.5);
      return num / den;
    }
    default:
      throw std::invalid_argument("boundary_curvature: undefined for this primitive");
  }
}

// ---------------------------------------------------------------------------
// distances

namespace {

// Closest boundary point of a parametric C^2 curve by multi-start sampling +
// Newton polish of f(th) = |p - b(th)|^2.
double closest_on_curve(const Domain& d, const Vec2& p, int coarse, Vec2* closest) {
  double best = std::numeric_limits<double>::infinity();
  double best_th = 0.0;
  for (int i = 0; i < coarse; ++i) {
    const double th = 2.0 * kPi * i / coarse;
    const double v = (d.boundary_point(th) - p).squaredNorm();
    if (v < best) {
      best = v;
      best_th = th;
    }
  }
  // polish the three best neighborhoods (start, start +- one step) to stay
  // robust near the evolute
  const double step = 2.0 * kPi / coarse;
  double out = std::numeric_limits<double>::infinity();
  Vec2 out_q = Vec2::Zero();
  for (int s = -1; s <= 1; ++s) {
    double th = best_th + s * step;
    for (int it = 0; it < 40; ++it) {
      const double hh = 1e-6;
      const auto f = [&](double tt) { return (d.boundary_point(tt) - p).squaredNorm(); };
      const double f0 = f(th), fp = f(th + hh), fm = f(th - hh);
      const double g = (fp - fm) / (2.0 * hh);
      double H = (fp - 2.0 * f0 + fm) / (hh * hh);
      if (!(H > 1e-12)) H = 1e-12;
      double dth = -g / H;
      dth = clamp(dth, -step, step);
      th += dth;
      if (std::abs(dth) < 1e-13) break;
    }
    const Vec2 q = d.boundary_point(th);
    const double v = (q - p).norm();
    if (v < out) {
      out = v;
      out_q = q;
    }
  }
  if (closest) *closest = out_q;
  return out;
}

}  // namespace

double Domain::boundary_distance(const Vec2& x) const {
  switch (kind_) {
    case DomainKind::Interval:
      return std::min(std::abs(x.x() - p_a), std::abs(x.x() - p_b));
    case DomainKind::Disk:
      return std::abs((x - center).norm() - radius);
    case DomainKind::Ellipse:
      return closest_on_curve(*this, x, 64, nullptr);
    case DomainKind::Rectangle: {
      const Vec2 q = x - center;
      const double dx = std::abs(q.x()) - 0.5 * width;
      const double dy = std::abs(q.y()) - 0.5 * height;
      if (dx <= 0.0 && dy <= 0.0) return std::min(-dx, -dy);
      return Vec2(std::max(dx, 0.0), std::max(dy, 0.0)).norm();
    }
    case DomainKind::ConvexPolygon: {
      double best = std::numeric_limits<double>::infinity();
      const size_t n = vertices.size();
      for (size_t i = 0; i < n; ++i)
        best = std::min(best, seg_distance(x, vertices[i], vertices[(i + 1) % n]));
      return best;
    }
    case DomainKind::PerturbedDisk:
      return closest_on_curve(*this, x, std::max(64, 16 * freq), nullptr);
  }
  return 0.0;
}

Vec2 Domain::closest_boundary_point(const Vec2& x) const {
  switch (kind_) {
    case DomainKind::Interval:
      return Vec2(std::abs(x.x() - p_a) < std::abs(x.x() - p_b) ? p_a : p_b, 0.0);
    case DomainKind::Disk: {
      Vec2 q = x - center;
      const double n = q.norm();
      if (n == 0.0) return center + Vec2(radius, 0.0);
      return center + (radius / n) * q;
    }
    case DomainKind::Ellipse: {
      Vec2 out;
      closest_on_curve(*this, x, 64, &out);
      return out;
    }
    case DomainKind::Rectangle: {
      const Vec2 q = x - center;
      const double hw = 0.5 * width, hh = 0.5 * height;
      if (std::abs(q.x()) <= hw && std::abs(q.y()) <= hh) {
        // inside: project to the nearest side
        const double dr = hw - std::abs(q.x());
        const double du = hh - std::abs(q.y());
        if (dr < du) return center + Vec2(q.x() >= 0 ? hw : -hw, q.y());
        return center + Vec2(q.x(), q.y() >= 0 ? hh : -hh);
      }
      return center + Vec2(clamp(q.x(), -hw, hw), clamp(q.y(), -hh, hh));
    }
    case DomainKind::ConvexPolygon: {
      double best = std::numeric_limits<double>::infinity();
      Vec2 out = vertices.front();
      const size_t n = vertices.size();
      for (size_t i = 0; i < n; ++i) {
        Vec2 q;
        const double v = seg_distance(x, vertices[i], vertices[(i + 1) % n], &q);
        if (v < best) {
          best = v;
          out = q;
        }
      }
      return out;
    }
    case DomainKind::PerturbedDisk: {
      Vec2 out;
      closest_on_curve(*this, x, std::max(64, 16 * freq), &out);
      return out;
    }
  }
  return Vec2::Zero();
}

double Domain::distance(const Vec2& x) const {
  if (kind_ == DomainKind::Interval) {
    if (x.x() <= p_a) return p_a - x.x();
    if (x.x() >= p_b) return x.x() - p_b;
    return 0.0;
  }
  if (contains(x)) return 0.0;
  const double bd = boundary_distance(x);
  // points exactly on the boundary have distance 0 to the closure
  return bd;
}

double Domain::signed_distance(const Vec2& x) const {
  const double bd = boundary_distance(x);
  return contains(x) ? -bd : bd;
}

double distance_to_set(const Domain& d, const Vec2& x) { return d.distance(x); }
double distance_to_boundary(const Domain& d, const Vec2& x) { return d.boundary_distance(x); }

// ---------------------------------------------------------------------------
// global geometric quantities

double Domain::support(const Vec2& dir) const {
  switch (kind_) {
    case DomainKind::Interval:
      return std::max(dir.x() * p_a, dir.x() * p_b);
    case DomainKind::Disk:
      return center.dot(dir) + radius * dir.norm();
    case DomainKind::Ellipse:
      return center.dot(dir) + std::sqrt(p_a * p_a * dir.x() * dir.x() + p_b * p_b * dir.y() * dir.y());
    case DomainKind::Rectangle:
      return center.dot(dir) + 0.5 * width * std::abs(dir.x()) + 0.5 * height * std::abs(dir.y());
    case DomainKind::ConvexPolygon: {
      double best = -std::numeric_limits<double>::infinity();
      for (const Vec2& v : vertices) best = std::max(best, v.dot(dir));
      return best;
    }
    case DomainKind::PerturbedDisk: {
      const int m = std::max(512, 64 * freq);
      double best = -std::numeric_limits<double>::infinity();
      double best_th = 0.0;
      for (int i = 0; i < m; ++i) {
        const double th = 2.0 * kPi * i / m;
        const double v = boundary_point(th).dot(dir);
        if (v > best) {
          best = v;
          best_th = th;
        }
      }
      // parabolic refine
      const double dth = 2.0 * kPi / m;
      const double fp = boundary_point(best_th + dth).dot(dir);
      const double fm = boundary_point(best_th - dth).dot(dir);
      const double den = fp - 2.0 * best + fm;
      if (den < 0.0) {
        const double shift = 0.5 * (fm - fp) / den * dth;
        best = boundary_point(best_th + clamp(shift, -dth, dth)).dot(dir);
      }
      return std::max({best, fp, fm});
    }
  }
  return 0.0;
}

double Domain::diameter() const {
  switch (kind_) {
    case DomainKind::Interval:
      return p_b - p_a;
    case DomainKind::Disk:
      return 2.0 * radius;
    case DomainKind::Ellipse:
      return 2.0 * std::max(p_a, p_b);
    case DomainKind::Rectangle:
      return std::hypot(width, height);
    case DomainKind::ConvexPolygon: {
      double best = 0.0;
      for (size_t i = 0; i < vertices.size(); ++i)
        for (size_t j = i + 1; j < vertices.size(); ++j)
          best = std::max(best, (vertices[i] - vertices[j]).norm());
      return best;
    }
    case DomainKind::PerturbedDisk: {
      const int m = std::max(512, 64 * freq);
      std::vector<Vec2> pts(m);
      for (int i = 0; i < m; ++i) pts[i] = boundary_point(2.0 * kPi * i / m);
      double best = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) best = std::max(best, (pts[i] - pts[j]).norm());
      return best;
    }
  }
  return 0.0;
}

double Domain::area() const {
  switch (kind_) {
    case DomainKind::Interval:
      return p_b - p_a;
    case DomainKind::Disk:
      return kPi * radius * radius;
    case DomainKind::Ellipse:
      return kPi * p_a * p_b;
    case DomainKind::Rectangle:
      return width * height;
    case DomainKind::ConvexPolygon: {
      double twice = 0.0;
      const size_t n = vertices.size();
      for (size_t i = 0; i < n; ++i) {
        const Vec2& p = vertices[i];
        const Vec2& q = vertices[(i + 1) % n];
        twice += p.x() * q.y() - q.x() * p.y();
      }
      return 0.5 * std::abs(twice);
    }
    case DomainKind::PerturbedDisk:
      // (1/2) int r(th)^2 dth = pi R^2 (1 + eps^2/2)
      return kPi * radius * radius * (1.0 + 0.5 * p_a * p_a);
  }
  return 0.0;
}

double Domain::perimeter() const {
  switch (kind_) {
    case DomainKind::Interval:
      return 2.0;  // H^0 of the two endpoints
    case DomainKind::Disk:
      return 2.0 * kPi * radius;
    case DomainKind::Ellipse: {
      const double a = std::max(p_a, p_b), b = std::min(p_a, p_b);
      const double e2 = 1.0 - (b * b) / (a * a);
      return 4.0 * a * std::comp_ellint_2(std::sqrt(e2));
    }
    case DomainKind::Rectangle:
      return 2.0 * (width + height);
    case DomainKind::ConvexPolygon: {
      double per = 0.0;
      const size_t n = vertices.size();
      for (size_t i = 0; i < n; ++i) per += (vertices[(i + 1) % n] - vertices[i]).norm();
      return per;
    }
    case DomainKind::PerturbedDisk: {
      // Simpson on ds = sqrt(r^2 + r'^2) dth (smooth integrand)
      const Radial rad = radial_of(*this);
      const int m = 4096;
      const double h = 2.0 * kPi / m;
      double sum = 0.0;
      auto f = [&](double th) { return std::hypot(rad.r(th), rad.dr(th)); };
      for (int i = 0; i < m; ++i) {
        const double th = i * h;
        sum += f(th) + 4.0 * f(th + 0.5 * h) + f(th + h);
      }
      return sum * h / 6.0;
    }
  }
  return 0.0;
}

Vec2 Domain::centroid_hint() const {
  switch (kind_) {
    case DomainKind::Interval:
      return Vec2(0.5 * (p_a + p_b), 0.0);
    case DomainKind::ConvexPolygon: {
      Vec2 c = Vec2::Zero();
      for (const Vec2& v : vertices) c += v;
      return c / double(vertices.size());
    }
    default:
      return center;
  }
}

Vec2 Domain::inradius_center() const {
  // Chebyshev center by pattern search on -dist(x, dOmega) from the centroid
  Vec2 x = centroid_hint();
  if (!contains(x)) x = closest_boundary_point(x);
  double step = 0.25 * diameter();
  double best = contains(x) ? boundary_distance(x) : 0.0;
  const double tol = 1e-7 * diameter();
  while (step > tol) {
    bool improved = false;
    for (const Vec2& dir : {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)}) {
      const Vec2 y = x + step * dir;
      if (!contains(y)) continue;
      const double v = boundary_distance(y);
      if (v > best + 1e-15) {
        best = v;
        x = y;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

double Domain::inradius() const {
  switch (kind_) {
    case DomainKind::Interval:
      return 0.5 * (p_b - p_a);
    case DomainKind::Disk:
      return radius;
    case DomainKind::Ellipse:
      return std::min(p_a, p_b);
    case DomainKind::Rectangle:
      return 0.5 * std::min(width, height);
    default:
      return boundary_distance(inradius_center());
  }
}

bool Domain::is_convex() const {
  if (kind_ == DomainKind::PerturbedDisk) return is_admissible();
  return true;  // every other primitive is convex by construction
}

bool Domain::is_admissible() const {
  if (kind_ != DomainKind::PerturbedDisk) return true;
  // eps (k^2+1) <= 1 keeps the polar curvature numerator
  // (1-eps)(1-eps(1+k^2)) nonnegative at its minimum, so the body is convex
  // (flat boundary points allowed at equality).
  return p_a * (freq * freq + 1.0) <= 1.0 + 1e-12;
}

Domain Domain::translated(const Vec2& shift) const {
  Domain d = *this;
  switch (kind_) {
    case DomainKind::Interval:
      d.p_a += shift.x();
      d.p_b += shift.x();
      return d;
    case DomainKind::ConvexPolygon:
      for (Vec2& v : d.vertices) v += shift;
      return d;
    default:
      d.center += shift;
      return d;
  }
}

Domain Domain::rotated(double angle) const {
  if (dim() != 2) throw std::invalid_argument("rotated: 2D domains only");
  Eigen::Rotation2D<double> rot(angle);
  switch (kind_) {
    case DomainKind::Disk: {
      Domain d = *this;
      d.center = rot * center;
      return d;
    }
    case DomainKind::Rectangle:
    case DomainKind::Ellipse: {
      if (std::abs(std::remainder(angle, kPi)) > 1e-14)
        throw std::invalid_argument("rotated: axis-aligned primitives accept multiples of pi only; use a polygon");
      Domain d = *this;
      d.center = rot * center;
      return d;
    }
    case DomainKind::ConvexPolygon: {
      Domain d = *this;
      for (Vec2& v : d.vertices) v = rot * v;
      return d;
    }
    case DomainKind::PerturbedDisk: {
      if (std::abs(std::remainder(angle * freq, 2.0 * kPi)) > 1e-12)
        throw std::invalid_argument("rotated: perturbed disk supports multiples of 2pi/k only");
      Domain d = *this;
      d.center = rot * center;
      return d;
    }
    default:
      throw std::invalid_argument("rotated: unsupported primitive");
  }
}

// ---------------------------------------------------------------------------
// parallel surfaces

ParallelSurface parallel_surface(const Domain& d, double t, int m) {
  if (!(t > 0.0)) throw std::invalid_argument("parallel_surface: t must be positive");
  ParallelSurface out;
  out.t = t;
  if (d.dim() == 1) {
    out.points = {Vec2(d.p_a - t, 0.0), Vec2(d.p_b + t, 0.0)};
    out.spacing = (d.p_b - d.p_a) + 2.0 * t;
    return out;
  }
  if (m < 16) throw std::invalid_argument("parallel_surface: need m >= 16");
  out.points.reserve(m);
  if (d.kind() == DomainKind::Rectangle || d.kind() == DomainKind::ConvexPolygon) {
    // offset polygon: edges shifted outward, arcs of radius t at the vertices;
    // sample uniformly in arclength of the offset curve
    std::vector<Vec2> vs;
    if (d.kind() == DomainKind::Rectangle) {
      const double hw = 0.5 * d.width, hh = 0.5 * d.height;
      vs = {d.center + Vec2(-hw, -hh), d.center + Vec2(hw, -hh), d.center + Vec2(hw, hh),
            d.center + Vec2(-hw, hh)};
    } else {
      vs = d.vertices;
    }
    const size_t n = vs.size();
    struct Piece {
      bool arc;
      Vec2 a, b;      // segment ends
      Vec2 c;         // arc center
      double th0, th1;  // arc angles
      double len;
    };
    std::vector<Piece> pieces;
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const Vec2 prev = vs[(i + n - 1) % n], cur = vs[i], next = vs[(i + 1) % n];
      Vec2 e_in = (cur - prev).normalized(), e_out = (next - cur).normalized();
      const Vec2 n_in(e_in.y(), -e_in.x()), n_out(e_out.y(), -e_out.x());
      double a0 = std::atan2(n_in.y(), n_in.x());
      double a1 = std::atan2(n_out.y(), n_out.x());
      while (a1 < a0) a1 += 2.0 * kPi;
      Piece arc{true, Vec2::Zero(), Vec2::Zero(), cur, a0, a1, t * (a1 - a0)};
      pieces.push_back(arc);
      total += arc.len;
      Piece seg{false, cur + t * n_out, next + t * n_out, Vec2::Zero(), 0, 0, (next - cur).norm()};
      pieces.push_back(seg);
      total += seg.len;
    }
    for (int j = 0; j < m; ++j) {
      double sarc = total * j / m;
      for (const Piece& p : pieces) {
        if (sarc > p.len) {
          sarc -= p.len;
          continue;
        }
        if (p.arc) {
          const double th = p.th0 + sarc / t;
          out.points.push_back(p.c + t * Vec2(std::cos(th), std::sin(th)));
        } else {
          out.points.push_back(p.a + (sarc / p.len) * (p.b - p.a));
        }
        break;
      }
    }
  } else {
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * j / m;
      out.points.push_back(d.boundary_point(th) + t * d.outward_normal(th));
    }
  }
  out.spacing = 0.0;
  for (int j = 0; j < m; ++j)
    out.spacing = std::max(out.spacing, (out.points[(j + 1) % m] - out.points[j]).norm());
  return out;
}

// ---------------------------------------------------------------------------
// reach estimation

namespace {

std::vector<Vec2> fine_boundary_sampling(const Domain& d, int n) {
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = d.boundary_point(2.0 * kPi * i / n);
  return pts;
}

}  // namespace

bool estimate_reach(const Domain& d, double r_test, int m) {
  if (!(r_test > 0.0)) throw std::invalid_argument("estimate_reach: r_test must be positive");
  if (d.dim() == 1) return true;  // two points, projections always unique
  const int nb = std::max(4096, 8 * m);
  const std::vector<Vec2> B = fine_boundary_sampling(d, nb);
  const double spacing = d.perimeter() / nb;
  // resolution floor of sampled branch separation
  const double tol_u = std::max(1e-9 * d.diameter(), 4.0 * spacing * spacing / r_test);
  const int n_theta = std::max(32, m / 2);
  const std::array<double, 6> deltas = {0.25, 0.5, 0.75, 0.9, 0.97, 0.995};
  // parameter half-width of the global-minimum basin in the well-conditioned
  // case; jitter minima inside it are sampling artifacts, genuine second
  // branches sit outside
  const auto basin_width = [&](double dmin) {
    return std::min(0.1 * d.perimeter(), 16.0 * std::sqrt(tol_u * std::max(dmin, spacing)));
  };
  for (int i = 0; i < n_theta; ++i) {
    const double th = 2.0 * kPi * (i + 0.37) / n_theta;
    const Vec2 bp = d.boundary_point(th);
    const Vec2 nu = d.outward_normal(th);
    for (double f : deltas) {
      const double delta = f * r_test;
      const Vec2 z = bp + delta * nu;
      // distance samples along the boundary
      double dmin = std::numeric_limits<double>::infinity();
      int imin = 0;
      std::vector<double> dist(nb);
      for (int j = 0; j < nb; ++j) {
        dist[j] = (z - B[j]).norm();
        if (dist[j] < dmin) {
          dmin = dist[j];
          imin = j;
        }
      }
      // normal shot must still be distance-realizing
      if (dmin < delta - std::max(tol_u, 1e-9 * d.diameter())) return false;
      // second branch: local minima away from the global one
      const double w = basin_width(dmin);
      double second = std::numeric_limits<double>::infinity();
      for (int j = 0; j < nb; ++j) {
        const double dl = dist[(j + nb - 1) % nb], dr = dist[(j + 1) % nb];
        if (dist[j] <= dl && dist[j] <= dr) {
          const int gap = std::min(std::abs(j - imin), nb - std::abs(j - imin));
          if (gap * spacing < w) continue;
          second = std::min(second, dist[j]);
        }
      }
      if (second - dmin <= tol_u) return false;
    }
  }
  return true;
}

namespace {

// Analytic upper bound on reach(closure) from the concave boundary curvature:
// exterior osculating disks force reach <= 1/|kappa| wherever kappa < 0.
std::optional<double> concave_curvature_bound(const Domain& d) {
  if (d.kind() != DomainKind::PerturbedDisk || d.is_convex()) return std::nullopt;
  const int m = std::max(8192, 512 * d.freq);
  double best = std::numeric_limits<double>::infinity();
  double best_th = -1.0;
  for (int i = 0; i < m; ++i) {
    const double th = 2.0 * kPi * i / m;
    const double kappa = d.boundary_curvature(th);
    if (kappa < 0.0 && 1.0 / std::abs(kappa) < best) {
      best = 1.0 / std::abs(kappa);
      best_th = th;
    }
  }
  if (best_th < 0.0) return std::nullopt;
  // golden-section refine |kappa| maximum inside the bracketing interval
  const double dth = 2.0 * kPi / m;
  double a = best_th - dth, b = best_th + dth;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double th) { return d.boundary_curvature(th); };  // negative here
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  return 1.0 / std::abs(std::min(f1, f2));
}

}  // namespace

ReachCertificate certified_reach(const Domain& d) {
  ReachCertificate out;
  if (d.dim() == 1 || d.is_convex()) {
    out.value = 10.0 * d.diameter();
    out.capped = true;
    return out;
  }
  const std::optional<double> curv_bound = concave_curvature_bound(d);
  double lo = 0.0, hi = 10.0 * d.diameter();
  if (estimate_reach(d, hi, 256)) {
    out.value = curv_bound ? std::min(*curv_bound, hi) : hi;
    out.capped = !curv_bound;
    return out;
  }
  const double tol_r = 1e-3 * d.diameter();
  for (int it = 0; it < 40 && hi - lo > tol_r; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (estimate_reach(d, mid, 256))
      lo = mid;
    else
      hi = mid;
  }
  // discount the bisection resolution, then clamp by the analytic concave
  // curvature bound (exact for the parametric primitives)
  out.value = std::max(0.5 * lo, lo - tol_r);
  if (curv_bound) out.value = std::min(out.value, *curv_bound);
  out.capped = false;
  return out;
}

FedererReport federer_check(const Domain& d, double r, int m) {
  if (!(r > 0.0)) throw std::invalid_argument("federer_check: r must be positive");
  FedererReport rep;
  if (d.dim() == 1) {
    rep.max_violation = -std::numeric_limits<double>::infinity();
    const std::array<std::pair<double, double>, 2> bpts = {{{d.p_a, -1.0}, {d.p_b, 1.0}}};
    for (auto [bx, v] : bpts) {
      for (int j = 0; j < m; ++j) {
        const double y = d.p_a + (d.p_b - d.p_a) * (j + 0.5) / m;
        rep.max_violation =
            std::max(rep.max_violation, v * (y - bx) - (y - bx) * (y - bx) / (2.0 * r));
        ++rep.pair_count;
      }
    }
    return rep;
  }
  rep.max_violation = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<Vec2, Vec2>> bn;
  for (int i = 0; i < m; ++i) {
    const double th = 2.0 * kPi * (i + 0.21) / m;
    bn.emplace_back(d.boundary_point(th), d.outward_normal(th));
  }
  // domain samples: interior grid plus boundary points
  std::vector<Vec2> ys;
  const double R = 0.51 * d.diameter();
  const Vec2 c = d.centroid_hint();
  const int g = std::max(8, (int)std::round(std::sqrt((double)m)));
  for (int i = 0; i <= g; ++i)
    for (int j = 0; j <= g; ++j) {
      const Vec2 y = c + Vec2(-R + 2.0 * R * i / g, -R + 2.0 * R * j / g);
      if (d.distance(y) == 0.0) ys.push_back(y);
    }
  for (const auto& [b, v] : bn) ys.push_back(b);
  for (const auto& [x, v] : bn) {
    for (const Vec2& y : ys) {
      const double lhs = v.dot(y - x);
      const double rhs = (y - x).squaredNorm() / (2.0 * r);
      rep.max_violation = std::max(rep.max_violation, lhs - rhs);
      ++rep.pair_count;
    }
  }
  return rep;
}

double interior_sphere_radius(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::Interval:
      return 0.5 * (d.p_b - d.p_a);
    case DomainKind::Disk:
      return d.radius;
    case DomainKind::Ellipse: {
      const double a = std::max(d.p_a, d.p_b), b = std::min(d.p_a, d.p_b);
      return b * b / a;  // osculating radius at the major-axis vertex
    }
    case DomainKind::Rectangle:
    case DomainKind::ConvexPolygon:
      throw std::invalid_argument("interior_sphere_radius: no interior sphere condition (corners)");
    case DomainKind::PerturbedDisk: {
      const int m = std::max(2048, 256 * d.freq);
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double kappa = d.boundary_curvature(2.0 * kPi * i / m);
        if (kappa > 0.0) best = std::min(best, 1.0 / kappa);
      }
      return std::min(best, d.inradius());
    }
  }
  throw std::invalid_argument("interior_sphere_radius: unsupported primitive");
}

// ---------------------------------------------------------------------------
// grid measures

namespace {

// Area of {sd <= 0} by cell fractions from the 1-Lipschitz signed distance,
// refined until two consecutive resolutions agree.
double measure_sublevel(const Domain& dom, const std::function<double(const Vec2&)>& sd,
                        double rel_tol, double abs_floor, double margin) {
  const Vec2 c = dom.centroid_hint();
  const double R = 0.51 * dom.diameter() + margin;
  if (dom.dim() == 1) {
    double lo = c.x() - R, hi = c.x() + R;
    double prev = -1.0;
    for (int cells = 512;; cells *= 2) {
      const double h = (hi - lo) / cells;
      double acc = 0.0;
      for (int i = 0; i < cells; ++i) {
        const double x = lo + (i + 0.5) * h;
        acc += h * clamp(0.5 - sd(Vec2(x, 0.0)) / h, 0.0, 1.0);
      }
      if (prev >= 0.0 && (std::abs(acc - prev) <= rel_tol * std::abs(acc) + abs_floor || cells >= 1 << 18))
        return acc;
      prev = acc;
    }
  }
  double prev = -1.0;
  for (int cells = 160;; cells *= 2) {
    const double h = 2.0 * R / cells;
    double acc = 0.0;
    for (int i = 0; i < cells; ++i) {
      const double x = c.x() - R + (i + 0.5) * h;
      double row = 0.0;
      for (int j = 0; j < cells; ++j) {
        const double y = c.y() - R + (j + 0.5) * h;
        const double v = sd(Vec2(x, y));
        if (v >= 0.71 * h) continue;
        row += clamp(0.5 - v / h, 0.0, 1.0);
      }
      acc += row * h * h;
    }
    if (prev >= 0.0 && (std::abs(acc - prev) <= rel_tol * std::abs(acc) + abs_floor || cells >= 5120))
      return acc;
    prev = acc;
  }
}

}  // namespace

double grid_measure(const Domain& bbox_of, const std::function<double(const Vec2&)>& sd,
                    double rel_tol, double abs_floor, double extra_margin) {
  return measure_sublevel(bbox_of, sd, rel_tol, abs_floor, extra_margin);
}

double half_tube_measure(const Domain& d, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("half_tube_measure: gamma must be positive");
  if (d.dim() == 1) {
    return std::min(2.0 * gamma, d.p_b - d.p_a);
  }
  if (gamma >= d.inradius()) return d.area();
  // band {-gamma <= sd <= 0} measured with both edges on one grid, so the
  // cell-fraction errors of the two level sets cancel instead of compounding
  const Vec2 c = d.centroid_hint();
  const double R = 0.51 * d.diameter();
  double prev = -1.0;
  for (int cells = 320;; cells *= 2) {
    const double h = 2.0 * R / cells;
    double acc = 0.0;
    for (int i = 0; i < cells; ++i) {
      const double x = c.x() - R + (i + 0.5) * h;
      double row = 0.0;
      for (int j = 0; j < cells; ++j) {
        const Vec2 p(x, c.y() - R + (j + 0.5) * h);
        const double v = d.signed_distance(p);
        if (v >= 0.71 * h || v + gamma <= -0.71 * h) continue;
        row += clamp(0.5 - v / h, 0.0, 1.0) - clamp(0.5 - (v + gamma) / h, 0.0, 1.0);
      }
      acc += row * h * h;
    }
    if (prev >= 0.0 && (std::abs(acc - prev) <= 0.002 * std::abs(acc) || cells >= 5120))
      return acc;
    prev = acc;
  }
}

double curvature_measure(const Domain& d) {
  if (d.dim() != 2) throw std::invalid_argument("curvature_measure: 2D domains only");
  const ReachCertificate rc = certified_reach(d);
  const double r0 = std::min(0.1 * d.diameter(), 0.3 * rc.value);
  const double area = d.area();
  std::array<double, 3> rs = {r0, 2.0 * r0, 3.0 * r0};
  std::array<double, 3> y{};
  for (int i = 0; i < 3; ++i) {
    auto sd = [&](const Vec2& x) { return d.signed_distance(x) - rs[i]; };
    const double vol = measure_sublevel(d, sd, 0.002, 1e-6 * area, rs[i] + 1e-9);
    y[i] = vol - area - kPi * rs[i] * rs[i];
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 3; ++i) {
    num += y[i] * rs[i];
    den += rs[i] * rs[i];
  }
  const double phi1 = num / (2.0 * den);
  double resid = 0.0;
  for (int i = 0; i < 3; ++i) resid = std::max(resid, std::abs(y[i] - 2.0 * phi1 * rs[i]));
  if (resid > 0.02 * std::max(area, std::abs(phi1) * rs[2]))
    throw std::runtime_error("curvature_measure: Steiner fit failed");
  if (!(phi1 > 0.0)) throw std::runtime_error("curvature_measure: nonpositive Phi_1");
  return phi1;
}

Vec2 reflect(const Vec2& x, const Direction& w, double lambda) {
  return x + 2.0 * (lambda - w.omega.dot(x)) * w.omega;
}

double symmetric_difference_measure(const Domain& d, const Direction& w, double lambda) {
  if (d.dim() == 1) {
    const double c = lambda * w.omega.x();
    // reflected interval
    const double a2 = 2.0 * c - d.p_b, b2 = 2.0 * c - d.p_a;
    const double inter = std::max(0.0, std::min(d.p_b, b2) - std::max(d.p_a, a2));
    return 2.0 * ((d.p_b - d.p_a) - inter);
  }
  const double area = d.area();
  auto inter_sd = [&](const Vec2& x) {
    return std::max(d.signed_distance(x), d.signed_distance(reflect(x, w, lambda)));
  };
  // |A xor A^l| = 2(|A| - |A cap A^l|); the intersection stays inside the
  // bbox of Omega around its centroid plus the reflection sweep
  const double inter = measure_sublevel(d, inter_sd, 0.005, 1e-4 * area, 0.0);
  return std::max(0.0, 2.0 * (area - inter));
}

// ---------------------------------------------------------------------------
// deficit

namespace {

double farthest_boundary_distance(const Domain& d, const Vec2& x) {
  switch (d.kind()) {
    case DomainKind::Interval:
      return std::max(std::abs(x.x() - d.p_a), std::abs(x.x() - d.p_b));
    case DomainKind::Disk:
      return (x - d.center).norm() + d.radius;
    case DomainKind::Rectangle: {
      double best = 0.0;
      const double hw = 0.5 * d.width, hh = 0.5 * d.height;
      for (double sx : {-hw, hw})
        for (double sy : {-hh, hh}) best = std::max(best, (x - (d.center + Vec2(sx, sy))).norm());
      return best;
    }
    case DomainKind::ConvexPolygon: {
      double best = 0.0;
      for (const Vec2& v : d.vertices) best = std::max(best, (x - v).norm());
      return best;
    }
    default: {
      const int m = 2048;
      double best = -1.0;
      double best_th = 0.0;
      for (int i = 0; i < m; ++i) {
        const double th = 2.0 * kPi * i / m;
        const double v = (d.boundary_point(th) - x).norm();
        if (v > best) {
          best = v;
          best_th = th;
        }
      }
      const double dth = 2.0 * kPi / m;
      const double fp = (d.boundary_point(best_th + dth) - x).norm();
      const double fm = (d.boundary_point(best_th - dth) - x).norm();
      const double den = fp - 2.0 * best + fm;
      if (den < 0.0) {
        const double shift = clamp(0.5 * (fm - fp) / den * dth, -dth, dth);
        best = std::max(best, (d.boundary_point(best_th + shift) - x).norm());
      }
      return std::max({best, fp, fm});
    }
  }
}

}  // namespace

double deficit(const Domain& d) {
  if (d.dim() == 1) return 0.0;  // every interval is a 1D ball
  auto objective = [&](const Vec2& x) {
    return farthest_boundary_distance(d, x) - d.boundary_distance(x);
  };
  // coarse grid over Omega
  const Vec2 c = d.centroid_hint();
  const double R = 0.51 * d.diameter();
  Vec2 best_x = d.contains(c) ? c : d.inradius_center();
  double best = objective(best_x);
  const int g = 40;
  for (int i = 0; i <= g; ++i)
    for (int j = 0; j <= g; ++j) {
      const Vec2 x = c + Vec2(-R + 2.0 * R * i / g, -R + 2.0 * R * j / g);
      if (!d.contains(x)) continue;
      const double v = objective(x);
      if (v < best) {
        best = v;
        best_x = x;
      }
    }
  // pattern search with shrinking step
  double step = 2.0 * R / g;
  const double tol = 1e-5 * d.diameter();
  while (step > tol) {
    bool improved = false;
    for (const Vec2& dir : {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)}) {
      const Vec2 y = best_x + step * dir;
      if (!d.contains(y)) continue;
      const double v = objective(y);
      if (v < best - 1e-15) {
        best = v;
        best_x = y;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return std::max(0.0, best);
}

}  // namespace fracstab
