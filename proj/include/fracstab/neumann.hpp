#pragma once

#include <vector>

#include "fracstab/fracsolver.hpp"
#include "fracstab/geometry.hpp"

namespace fracstab {

// Nonlocal normal derivative trace along an outer parallel surface together
// with its sampled Lipschitz seminorm.
struct NeumannTrace {
  ParallelSurface surface;
  std::vector<double> values;
  double seminorm = 0.0;  // max over pairs of |v_i - v_j| / |x_i - x_j|
};

// N_s u(x) = -c_{n,s} h^n sum_y u(y) / |x-y|^{n+2s}; valid for exterior x
// since u vanishes outside Omega. Throws if x is not exterior.
double nonlocal_neumann(const Field& u, const Domain& d, const FracParams& p, const Vec2& x);

// Trace on parallel_surface(d, t, m). Requires t >= 4h; nearer surfaces sit
// inside the quadrature blow-up layer.
NeumannTrace neumann_trace(const Field& u, const Domain& d, const FracParams& p, double t, int m);

// d/domega N_s u(x) = c_{n,s}(n+2s) h^n sum_y u(y) ((x-y).omega) / |x-y|^{n+2s+2}
double neumann_directional_derivative(const Field& u, const Domain& d, const FracParams& p,
                                      const Vec2& x, const Direction& omega);

}  // namespace fracstab
