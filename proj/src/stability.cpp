#include "fracstab/stability.hpp"

#include <chrono>
#include <cmath>

#include "fracstab/domain_spec.hpp"

namespace fracstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double weight_integral(const Field& u, const FracParams& p) {
  // int u(x) / (1 + |x|^{n+2s}) dx by midpoint over the nodes
  const double hn = std::pow(u.grid.h, u.grid.dim);
  double acc = 0.0;
  for (int i = 0; i < u.grid.node_count(); ++i)
    acc += u.values(i) / (1.0 + std::pow(u.grid.nodes[i].norm(), p.n + 2.0 * p.s));
  return hn * acc;
}

}  // namespace

GeomSummary make_geom_summary(const Domain& d, const FracParams& p, TheoremVariant variant) {
  GeomSummary g;
  g.diam = d.diameter();
  g.reach = certified_reach(d).value;
  g.area = d.area();
  g.unit_ball_vol = unit_ball_volume(p.n);
  if (variant == TheoremVariant::T13 || variant == TheoremVariant::T14)
    g.inner_sphere = interior_sphere_radius(d);
  if (variant == TheoremVariant::T15 || variant == TheoremVariant::T16)
    g.curvature_total = curvature_measure(d);
  g.validate();
  return g;
}

Vec2 center_of_symmetry(const Domain& d, double t, double tol_mp) {
  if (d.dim() == 1)
    return Vec2(classical_critical_value(d, t, Direction(Vec2(1, 0)), tol_mp), 0.0);
  const double cx = classical_critical_value(d, t, Direction(Vec2(1, 0)), tol_mp);
  const double cy = classical_critical_value(d, t, Direction(Vec2(0, 1)), tol_mp);
  return Vec2(cx, cy);
}

double total_error_budget(const Domain& d, const FracParams& p, double t, double h, int m) {
  // solver band + trace quadrature band + geometric measure band
  const double eps_solver = solver_error_band(h, p);
  const double c = kernel_constant(p);
  const double eps_trace =
      c * d.area() * std::pow(h, p.s) / std::pow(t, p.n + 2.0 * p.s + 1.0);
  const double eps_geom = d.diameter() * (1.0 / std::max(16, m) + 1e-4);
  return eps_solver + eps_trace + eps_geom;
}

StabilityReport verify_theorem(const Domain& d, const FracParams& p, double t, double h, int m,
                               TheoremVariant variant, const LipschitzFn* f, int fan_directions) {
  p.validate_for_stability();
  const bool semilinear = (variant == TheoremVariant::T14 || variant == TheoremVariant::T16);
  if ((variant == TheoremVariant::T15 || variant == TheoremVariant::T16) && p.n < 2)
    throw std::invalid_argument("verify_theorem: T15/T16 require n >= 2");
  if (semilinear) {
    if (!f) throw std::invalid_argument("verify_theorem: T14/T16 require the nonlinearity f");
    if (f->f0 < 0.0) throw std::invalid_argument("verify_theorem: T14/T16 require f(0) >= 0");
  }
  if (p.n != d.dim()) throw std::invalid_argument("verify_theorem: dimension mismatch");

  StabilityReport rep;
  rep.variant = variant;
  rep.domain_spec = d.spec_string();
  rep.s = p.s;
  rep.t = t;
  rep.h = h;
  rep.m = m;
  rep.cns_caveat = semilinear;
  rep.geom = make_geom_summary(d, p, variant);
  if (!(t < rep.geom.reach))
    throw std::invalid_argument("verify_theorem: t must stay below the certified reach");

  const auto t0 = std::chrono::steady_clock::now();
  const Grid grid = build_grid(d, h);
  const OperatorMatrix op = assemble_operator(d, grid, p);
  Field u;
  if (semilinear) {
    u = solve_semilinear(grid, op, *f).field;
  } else {
    u = solve_torsion(grid, op);
  }
  rep.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.u_center = u.value_at(d.centroid_hint());

  if (semilinear) {
    const double u_sup = u.max_value();
    rep.cprime = cprime_constant(f->f0, f->lipschitz, u_sup, weight_integral(u, p), rep.geom, p);
  }
  rep.constants = stability_constants(rep.geom, p, variant, rep.cprime);

  rep.rho = deficit(d);
  const NeumannTrace trace = neumann_trace(u, d, p, t, m);
  rep.seminorm = trace.seminorm;
  rep.lhs = rep.rho;
  rep.rhs = rep.constants.C * std::pow(rep.seminorm, rep.constants.exponent);
  rep.margin = rep.rhs - rep.lhs;
  rep.eps_total = total_error_budget(d, p, t, h, m);
  rep.classification =
      rep.margin >= 0.0 ? "ok" : (rep.margin >= -rep.eps_total ? "inconclusive" : "violation");

  const double tol_mp = default_tol_mp(d);
  rep.center = center_of_symmetry(d, t, tol_mp);
  const double sem_pow = std::pow(rep.seminorm, rep.constants.exponent);
  const int fan = d.dim() == 1 ? 2 : fan_directions;
  for (int k = 0; k < fan; ++k) {
    const double ang = d.dim() == 1 ? kPi * k : 2.0 * kPi * k / fan;
    const Direction w = Direction::angle(ang);
    DirectionCheck chk;
    chk.angle = ang;
    const double lam = critical_value(d, t, w, tol_mp);
    chk.lambda_star = lam - rep.center.dot(w.omega);
    chk.bound = rep.constants.Cflat * sem_pow;
    chk.sym_diff = symmetric_difference_measure(d, w, lam);
    chk.sym_diff_bound = rep.constants.Csharp * sem_pow;
    chk.ok = std::abs(chk.lambda_star) <= chk.bound + rep.eps_total &&
             chk.sym_diff <= chk.sym_diff_bound + rep.eps_total;
    rep.direction_checks.push_back(chk);
  }
  return rep;
}

ScalingStudy deficit_scaling_study(const std::vector<Domain>& family, const FracParams& p, double t,
                                   double h, int m, TheoremVariant variant) {
  if (family.size() < 3)
    throw std::invalid_argument("deficit_scaling_study: need at least 3 family members");
  ScalingStudy study;
  const double s = p.s;
  study.required = (variant == TheoremVariant::T13 || variant == TheoremVariant::T14)
                       ? 1.0 / (2.0 + s)
                       : 1.0 / (2.0 + 2.0 * s);
  for (const Domain& d : family) {
    ScalingRow row;
    row.domain_spec = d.spec_string();
    row.rho = deficit(d);
    const Grid grid = build_grid(d, h);
    const Field u = solve_torsion(d, grid, p);
    row.seminorm = neumann_trace(u, d, p, t, m).seminorm;
    study.rows.push_back(row);
  }
  // least-squares slope of log periods
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = (int)study.rows.size();
  for (const ScalingRow& r : study.rows) {
    if (!(r.rho > 0.0) || !(r.seminorm > 0.0))
      throw std::invalid_argument("deficit_scaling_study: degenerate fit (zero deficit or seminorm)");
    const double x = std::log(r.seminorm), y = std::log(r.rho);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-12)
    throw std::invalid_argument("deficit_scaling_study: degenerate fit (zero variance)");
  study.slope = (n * sxy - sx * sy) / den;
  study.pass = study.slope >= study.required;
  return study;
}

std::vector<Domain> verification_corpus() {
  std::vector<Domain> out;
  out.push_back(parse_domain_spec("disk:R=1"));
  out.push_back(parse_domain_spec("ellipse:a=1.05,b=1"));
  out.push_back(parse_domain_spec("ellipse:a=1.2,b=1"));
  out.push_back(parse_domain_spec("ellipse:a=1.4,b=1"));
  out.push_back(parse_domain_spec("pdisk:R=1,eps=0.04,k=2"));
  out.push_back(parse_domain_spec("pdisk:R=1,eps=0.08,k=3"));
  out.push_back(parse_domain_spec("square:w=2"));
  out.push_back(parse_domain_spec("rotsquare:w=2,angle=30"));
  // asymmetric convex polygon with one horizontal edge (bottom), so the
  // closure-based and classical critical values differ along e1
  out.push_back(parse_domain_spec(
      "poly:v=1.2;-0.2;0.9;0.8;-0.3;1.0;-1.1;0.4;-1.0;-0.6;-0.4;-1.0;0.8;-1.0"));
  return out;
}

}  // namespace fracstab
