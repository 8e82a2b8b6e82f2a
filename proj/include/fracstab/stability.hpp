#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracstab/constants.hpp"
#include "fracstab/fracsolver.hpp"
#include "fracstab/geometry.hpp"
#include "fracstab/movingplane.hpp"
#include "fracstab/neumann.hpp"

namespace fracstab {

struct DirectionCheck {
  double angle = 0.0;
  double lambda_star = 0.0;        // after centering
  double bound = 0.0;              // C_flat * seminorm^exponent
  double sym_diff = 0.0;
  double sym_diff_bound = 0.0;     // C_sharp * seminorm^exponent
  bool ok = false;
};

struct StabilityReport {
  TheoremVariant variant = TheoremVariant::T13;
  std::string domain_spec;
  double s = 0.0, t = 0.0, h = 0.0;
  int m = 0;
  GeomSummary geom;
  ConstantSet constants;
  double rho = 0.0;        // deficit
  double seminorm = 0.0;   // sampled [N_s u]_{Gamma_t}
  double lhs = 0.0;        // rho
  double rhs = 0.0;        // C * seminorm^exponent
  double margin = 0.0;     // rhs - lhs
  double eps_total = 0.0;  // discretization error budget
  Vec2 center = Vec2::Zero();
  std::vector<DirectionCheck> direction_checks;
  std::string classification;  // "ok" | "inconclusive" | "violation"
  bool cns_caveat = false;     // T14/T16: constants valid up to C_{n,s}=1
  std::optional<double> cprime;
  double u_center = 0.0;
  double solve_seconds = 0.0;
};

// Geometric summary with the fields the chosen variant needs (convex reach
// capped at 10*diam).
GeomSummary make_geom_summary(const Domain& d, const FracParams& p, TheoremVariant variant);

// Intersection of the per-axis classical critical hyperplanes.
Vec2 center_of_symmetry(const Domain& d, double t, double tol_mp);

// Full pipeline for one theorem variant: solve, deficit, trace seminorm,
// constants, margin, per-direction bounds. `f` is required for T14/T16.
StabilityReport verify_theorem(const Domain& d, const FracParams& p, double t, double h, int m,
                               TheoremVariant variant, const LipschitzFn* f = nullptr,
                               int fan_directions = 16);

struct ScalingRow {
  std::string domain_spec;
  double rho = 0.0;
  double seminorm = 0.0;
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  double slope = 0.0;     // d log(rho) / d log(seminorm)
  double required = 0.0;  // theorem exponent
  bool pass = false;
};

// Log-log regression of deficit against seminorm across a shrinking-deficit
// family; the theorem exponent is a lower bound for the empirical slope.
ScalingStudy deficit_scaling_study(const std::vector<Domain>& family, const FracParams& p, double t,
                                   double h, int m, TheoremVariant variant);

// Fixed verification corpus: disk, three ellipses, two perturbed disks,
// square, rotated square, one asymmetric convex polygon.
std::vector<Domain> verification_corpus();

double total_error_budget(const Domain& d, const FracParams& p, double t, double h, int m);

}  // namespace fracstab
