#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fracstab/fracsolver.hpp"
#include "fracstab/geometry.hpp"

namespace fracstab {

enum class TouchingCase { InteriorTouching, NonTransversal, Both, Undetermined };

const char* touching_name(TouchingCase c);

struct TouchReport {
  TouchingCase kind = TouchingCase::Undetermined;
  std::optional<Vec2> interior_point;
  std::optional<Vec2> nontransversal_point;
  double coincidence_fraction = 0.0;  // fraction of Gamma_t samples touching
};

struct InclusionReport {
  double violating_fraction = 0.0;  // fraction of samples beyond `tolerance`
  double max_penetration = 0.0;     // raw maximum penetration depth
  double tolerance = 0.0;           // grid tolerance from the lambda resolution
  int sample_count = 0;
  bool ok() const { return violating_fraction == 0.0; }
};

struct MovingPlaneResult {
  Vec2 omega = Vec2::UnitX();
  double t = 0.0;
  double lambda_star = 0.0;
  double lambda_hat = 0.0;
  TouchReport touching;
  double sym_diff = 0.0;
  InclusionReport inclusion;
};

double default_tol_mp(const Domain& d);

// Critical value of the closure-based moving plane: the infimum lambda such
// that closure(G^mu) cap H^mu stays inside the open enlargement G for every
// mu above it. Requires t below the certified reach.
double critical_value(const Domain& d, double t, const Direction& omega, double tol_mp);

// Classical critical value: same sweep but with the open reflected cap only.
double classical_critical_value(const Domain& d, double t, const Direction& omega, double tol_mp);

TouchReport classify_touching(const Domain& d, double t, const Direction& omega, double lambda_star,
                              double tol_mp);

// Samples Omega cap H_star, reflects, asserts membership in Omega.
InclusionReport check_inclusion(const Domain& d, double t, const Direction& omega,
                                double lambda_star);

// Both sides of the one-direction quantitative estimate: lhs is the moment
// integral of u over Omega \ Omega^star, rhs the explicit multiple of the
// sampled trace seminorm.
std::pair<double, double> quantitative_onedir(const Field& u, const Domain& d, const FracParams& p,
                                              const Direction& omega, double lambda_star, double t,
                                              double seminorm, double reach);

MovingPlaneResult moving_plane_analyze(const Domain& d, double t, const Direction& omega,
                                       double tol_mp);

}  // namespace fracstab
