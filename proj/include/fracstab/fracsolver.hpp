#pragma once

#include <Eigen/Dense>
#include <functional>
#include <unordered_map>
#include <vector>

#include "fracstab/constants.hpp"
#include "fracstab/geometry.hpp"

namespace fracstab {

// Uniform Cartesian collocation grid: nodes are lattice points k*h strictly
// inside Omega; the function is extended by zero outside.
struct Grid {
  double h = 0.0;
  int dim = 2;
  Vec2 bbox_lo = Vec2::Zero();
  Vec2 bbox_hi = Vec2::Zero();
  std::vector<Eigen::Vector2i> index;  // lattice indices
  std::vector<Vec2> nodes;
  std::unordered_map<long long, int> node_of;  // packed lattice index -> node id

  int node_count() const { return (int)nodes.size(); }
  int find(int i, int j) const {
    auto it = node_of.find(pack(i, j));
    return it == node_of.end() ? -1 : it->second;
  }
  static long long pack(int i, int j) { return ((long long)i << 24) ^ (j & 0xffffff); }
};

Grid build_grid(const Domain& d, double h);

// Dense collocation matrix of (-Delta)^s with the exterior zero condition
// absorbed into the diagonal.
struct OperatorMatrix {
  Eigen::MatrixXd A;
  double h = 0.0;
  double s = 0.0;
  int n = 2;
  double truncation_min = 0.0;  // smallest per-row truncation radius R(x)
};

OperatorMatrix assemble_operator(const Domain& d, const Grid& g, const FracParams& p);

struct Field {
  Grid grid;
  Eigen::VectorXd values;

  // multilinear interpolation; zero outside the node set's convex lattice hull
  double value_at(const Vec2& x) const;
  double max_value() const { return values.size() ? values.maxCoeff() : 0.0; }
};

// Solves A u = 1 by dense Cholesky factorization.
Field solve_torsion(const Domain& d, const Grid& g, const FracParams& p);
Field solve_torsion(const Grid& g, const OperatorMatrix& op);

struct LipschitzFn {
  std::function<double(double)> f;
  double lipschitz = 0.0;  // Lipschitz constant on the expected range
  double f0 = 0.0;         // f(0)
};

struct SemilinearResult {
  Field field;
  int iterations = 0;
  bool positive = true;  // all node values > 0
  std::vector<double> residual_history;
};

// Damped Picard iteration u <- (1-theta) u + theta A^{-1} f(u); throws
// std::runtime_error carrying the residual history on non-convergence.
SemilinearResult solve_semilinear(const Domain& d, const Grid& g, const FracParams& p,
                                  const LipschitzFn& f);
SemilinearResult solve_semilinear(const Grid& g, const OperatorMatrix& op, const LipschitzFn& f);

// psi(x) = gamma_{n,s} (R^2 - |x - center|^2)_+^s
double exact_ball_solution(const Vec2& center, double R, const FracParams& p, const Vec2& x);

// Discrete J(u) = (1/2) h^n u^T A u - h^n sum(u).
double energy(const Field& u, const OperatorMatrix& op);

enum class LowerBoundMode { Weak, Sphere, CPrime };

struct LowerBoundReport {
  double min_slack = 0.0;          // min over nodes of u - bound
  double violating_fraction = 0.0; // fraction of nodes with slack < -eps_band
  double eps_band = 0.0;           // tolerated discretization band c h^s
  int node_count = 0;
};

LowerBoundReport verify_lower_bound(const Field& u, const Domain& d, const FracParams& p,
                                    LowerBoundMode mode, double cprime = 0.0);

// Discretization error band used by bound checks and stability reports.
double solver_error_band(double h, const FracParams& p);

// Largest eigenvalue of A^{-1} (inverse of the smallest eigenvalue of A) by
// power iteration on the factorized inverse.
double inverse_power_estimate(const OperatorMatrix& op, int iterations = 50);

}  // namespace fracstab
