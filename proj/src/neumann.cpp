#include "fracstab/neumann.hpp"

#include <cmath>
#include <stdexcept>

namespace fracstab {

double nonlocal_neumann(const Field& u, const Domain& d, const FracParams& p, const Vec2& x) {
  p.validate();
  if (!(d.distance(x) > 0.0))
    throw std::invalid_argument("nonlocal_neumann: evaluation point must be exterior to the closure");
  const double c = kernel_constant(p);
  const double hn = std::pow(u.grid.h, u.grid.dim);
  const double expo = p.n + 2.0 * p.s;
  double acc = 0.0;
  const int N = u.grid.node_count();
  for (int i = 0; i < N; ++i)
    acc += u.values(i) * std::pow((x - u.grid.nodes[i]).norm(), -expo);
  return -c * hn * acc;
}

NeumannTrace neumann_trace(const Field& u, const Domain& d, const FracParams& p, double t, int m) {
  if (!(t >= 4.0 * u.grid.h))
    throw std::invalid_argument("neumann_trace: need t >= 4h (quadrature blow-up near Gamma_0)");
  NeumannTrace out;
  out.surface = parallel_surface(d, t, m);
  const int np = (int)out.surface.points.size();
  out.values.resize(np);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < np; ++i)
    out.values[i] = nonlocal_neumann(u, d, p, out.surface.points[i]);
  out.seminorm = 0.0;
  for (int i = 0; i < np; ++i)
    for (int j = i + 1; j < np; ++j) {
      const double gap = (out.surface.points[i] - out.surface.points[j]).norm();
      if (gap <= 0.0) continue;
      out.seminorm = std::max(out.seminorm, std::abs(out.values[i] - out.values[j]) / gap);
    }
  return out;
}

double neumann_directional_derivative(const Field& u, const Domain& d, const FracParams& p,
                                      const Vec2& x, const Direction& omega) {
  p.validate();
  if (!(d.distance(x) > 0.0))
    throw std::invalid_argument("neumann_directional_derivative: point must be exterior");
  const double c = kernel_constant(p);
  const double hn = std::pow(u.grid.h, u.grid.dim);
  const double expo = p.n + 2.0 * p.s + 2.0;
  double acc = 0.0;
  const int N = u.grid.node_count();
  for (int i = 0; i < N; ++i) {
    const Vec2 diff = x - u.grid.nodes[i];
    acc += u.values(i) * diff.dot(omega.omega) * std::pow(diff.norm(), -expo);
  }
  return c * (p.n + 2.0 * p.s) * hn * acc;
}

}  // namespace fracstab
