#include "fracstab/fracsolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fracstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sphere_area(int n) { return n == 1 ? 2.0 : 2.0 * kPi; }

}  // namespace

Grid build_grid(const Domain& d, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("build_grid: h must be positive");
  const double inr = d.inradius();
  if (h > 0.25 * inr + 1e-15)
    throw std::invalid_argument("build_grid: h too coarse, need h <= inradius/4");
  Grid g;
  g.h = h;
  g.dim = d.dim();
  const Vec2 c = d.centroid_hint();
  const double R = 0.51 * d.diameter();
  const int pad = 2;
  if (g.dim == 1) {
    const int i_lo = (int)std::floor((c.x() - R) / h) - pad;
    const int i_hi = (int)std::ceil((c.x() + R) / h) + pad;
    for (int i = i_lo; i <= i_hi; ++i) {
      const Vec2 x(i * h, 0.0);
      if (d.contains(x)) {
        g.node_of[Grid::pack(i, 0)] = (int)g.nodes.size();
        g.index.emplace_back(i, 0);
        g.nodes.push_back(x);
      }
    }
    g.bbox_lo = Vec2((i_lo - 0.5) * h, 0.0);
    g.bbox_hi = Vec2((i_hi + 0.5) * h, 0.0);
  } else {
    const int i_lo = (int)std::floor((c.x() - R) / h) - pad;
    const int i_hi = (int)std::ceil((c.x() + R) / h) + pad;
    const int j_lo = (int)std::floor((c.y() - R) / h) - pad;
    const int j_hi = (int)std::ceil((c.y() + R) / h) + pad;
    for (int i = i_lo; i <= i_hi; ++i)
      for (int j = j_lo; j <= j_hi; ++j) {
        const Vec2 x(i * h, j * h);
        if (d.contains(x)) {
          g.node_of[Grid::pack(i, j)] = (int)g.nodes.size();
          g.index.emplace_back(i, j);
          g.nodes.push_back(x);
        }
      }
    g.bbox_lo = Vec2((i_lo - 0.5) * h, (j_lo - 0.5) * h);
    g.bbox_hi = Vec2((i_hi + 0.5) * h, (j_hi + 0.5) * h);
  }
  if (g.node_count() < 7) throw std::invalid_argument("build_grid: too coarse, fewer than 7 interior nodes");
  return g;
}

OperatorMatrix assemble_operator(const Domain& d, const Grid& g, const FracParams& p) {
  p.validate();
  if (p.n != g.dim) throw std::invalid_argument("assemble_operator: grid/params dimension mismatch");
  const int N = g.node_count();
  const double h = g.h, s = p.s;
  const int n = p.n;
  const double c = kernel_constant(p);
  const double hn = std::pow(h, n);
  const double sig = sphere_area(n);
  // singular-cell Taylor correction weight
  const double kcorr = sig / (2.0 * n) * std::pow(0.5 * h, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);

  // per-row truncation radius: farthest bbox corner + h
  Eigen::VectorXd Rv(N);
  for (int i = 0; i < N; ++i) {
    const Vec2& x = g.nodes[i];
    double far = 0.0;
    for (double cx : {g.bbox_lo.x(), g.bbox_hi.x()}) {
      if (n == 1) {
        far = std::max(far, std::abs(x.x() - cx));
      } else {
        for (double cy : {g.bbox_lo.y(), g.bbox_hi.y()})
          far = std::max(far, (x - Vec2(cx, cy)).norm());
      }
    }
    Rv(i) = far + h;
  }
  const double Rmax = Rv.maxCoeff();

  // prefix sums of the kernel over the full lattice ball: S(R) covers every
  // lattice cell with 0 < |w| <= R, so the exterior-cell contribution at a
  // node is S(R) minus the interior-node part of the same sum
  std::vector<double> lat_r, lat_pref;
  {
    const int M = (int)std::ceil(Rmax / h) + 2;
    std::vector<std::pair<double, double>> entries;  // (radius, kernel weight)
    if (n == 1) {
      entries.reserve(2 * M);
      for (int i = 1; i <= M; ++i) {
        const double r = i * h;
        entries.push_back({r, 2.0 * hn * std::pow(r, -(n + 2.0 * s))});
      }
    } else {
      entries.reserve((size_t)(kPi * Rmax * Rmax / (h * h)) + 16);
      for (int i = -M; i <= M; ++i)
        for (int j = -M; j <= M; ++j) {
          if (i == 0 && j == 0) continue;
          const double r = std::hypot(i * h, j * h);
          if (r > Rmax + h) continue;
          entries.push_back({r, hn * std::pow(r, -(n + 2.0 * s))});
        }
    }
    std::sort(entries.begin(), entries.end());
    lat_r.resize(entries.size());
    lat_pref.resize(entries.size() + 1);
    lat_pref[0] = 0.0;
    for (size_t i = 0; i < entries.size(); ++i) {
      lat_r[i] = entries[i].first;
      lat_pref[i + 1] = lat_pref[i] + entries[i].second;
    }
  }
  auto lattice_sum = [&](double R) {
    const size_t idx = std::upper_bound(lat_r.begin(), lat_r.end(), R) - lat_r.begin();
    return lat_pref[idx];
  };

  OperatorMatrix op;
  op.A.resize(N, N);
  op.h = h;
  op.s = s;
  op.n = n;
  op.truncation_min = Rv.minCoeff();

  Eigen::MatrixXd& A = op.A;
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < N; ++i) {
    const Vec2& x = g.nodes[i];
    double offsum = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == i) {
        A(i, i) = 0.0;
        continue;
      }
      const double r = (x - g.nodes[j]).norm();
      const double w = hn * std::pow(r, -(n + 2.0 * s));
      A(i, j) = -c * w;
      offsum += w;
    }
    const double tail = sig * std::pow(Rv(i), -2.0 * s) / (2.0 * s);
    const double exterior = lattice_sum(Rv(i)) - offsum;
    double diag = c * (offsum + exterior + tail + 2.0 * n * kcorr / (h * h));
    // correction stencil neighbors (zero outside Omega)
    const Eigen::Vector2i ij = g.index[i];
    const std::array<std::pair<int, int>, 4> nbs = {
        {{ij.x() + 1, ij.y()}, {ij.x() - 1, ij.y()}, {ij.x(), ij.y() + 1}, {ij.x(), ij.y() - 1}}};
    const int n_nb = (n == 1) ? 2 : 4;
    for (int q = 0; q < n_nb; ++q) {
      const int j = g.find(nbs[q].first, nbs[q].second);
      if (j >= 0) A(i, j) -= c * kcorr / (h * h);
    }
    A(i, i) = diag;
  }
  return op;
}

double Field::value_at(const Vec2& x) const {
  const double h = grid.h;
  if (grid.dim == 1) {
    const double fi = x.x() / h;
    const int i0 = (int)std::floor(fi);
    const double t = fi - i0;
    auto val = [&](int i) {
      const int id = grid.find(i, 0);
      return id >= 0 ? values(id) : 0.0;
    };
    return (1.0 - t) * val(i0) + t * val(i0 + 1);
  }
  const double fi = x.x() / h, fj = x.y() / h;
  const int i0 = (int)std::floor(fi), j0 = (int)std::floor(fj);
  const double tx = fi - i0, ty = fj - j0;
  auto val = [&](int i, int j) {
    const int id = grid.find(i, j);
    return id >= 0 ? values(id) : 0.0;
  };
  return (1 - tx) * (1 - ty) * val(i0, j0) + tx * (1 - ty) * val(i0 + 1, j0) +
         (1 - tx) * ty * val(i0, j0 + 1) + tx * ty * val(i0 + 1, j0 + 1);
}

Field solve_torsion(const Grid& g, const OperatorMatrix& op) {
  Eigen::MatrixXd M = op.A;
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(M);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("solve_torsion: Cholesky factorization failed (assembly broken?)");
  Field u;
  u.grid = g;
  u.values = llt.solve(Eigen::VectorXd::Ones(g.node_count()));
  return u;
}

Field solve_torsion(const Domain& d, const Grid& g, const FracParams& p) {
  return solve_torsion(g, assemble_operator(d, g, p));
}

double inverse_power_estimate(const OperatorMatrix& op, int iterations) {
  Eigen::MatrixXd M = op.A;
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(M);
  if (llt.info() != Eigen::Success) throw std::runtime_error("inverse_power_estimate: factorization failed");
  const int N = (int)op.A.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(N).normalized();
  double lam = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Eigen::VectorXd w = llt.solve(v);
    lam = w.norm();
    if (lam <= 0.0) break;
    v = w / lam;
  }
  return lam;
}

SemilinearResult solve_semilinear(const Grid& g, const OperatorMatrix& op, const LipschitzFn& f) {
  if (!f.f) throw std::invalid_argument("solve_semilinear: missing nonlinearity");
  Eigen::MatrixXd M = op.A;
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(M);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("solve_semilinear: Cholesky factorization failed");
  const int N = g.node_count();

  // damping from the one-step power estimate of ||A^{-1}||
  Eigen::VectorXd probe = Eigen::VectorXd::Ones(N).normalized();
  const double inv_norm_est = llt.solve(probe).norm();
  const double theta = std::min(1.0, 1.0 / (1.0 + f.lipschitz * inv_norm_est));

  SemilinearResult out;
  Eigen::VectorXd u = llt.solve(Eigen::VectorXd::Ones(N) * std::max(f.f0, 1.0));
  const int k_max = 500;
  const double tol = 1e-10;
  for (int k = 0; k < k_max; ++k) {
    Eigen::VectorXd rhs(N);
    for (int i = 0; i < N; ++i) rhs(i) = f.f(u(i));
    Eigen::VectorXd next = (1.0 - theta) * u + theta * llt.solve(rhs);
    const double upd = (next - u).lpNorm<Eigen::Infinity>();
    out.residual_history.push_back(upd);
    u = next;
    out.iterations = k + 1;
    if (!u.allFinite()) break;
    if (upd <= tol) {
      out.field.grid = g;
      out.field.values = u;
      out.positive = (u.minCoeff() > 0.0);
      return out;
    }
  }
  std::string msg = "solve_semilinear: Picard iteration did not converge in 500 steps; residuals:";
  const size_t nh = out.residual_history.size();
  for (size_t i = nh > 6 ? nh - 6 : 0; i < nh; ++i)
    msg += " " + std::to_string(out.residual_history[i]);
  throw std::runtime_error(msg);
}

SemilinearResult solve_semilinear(const Domain& d, const Grid& g, const FracParams& p,
                                  const LipschitzFn& f) {
  return solve_semilinear(g, assemble_operator(d, g, p), f);
}

double exact_ball_solution(const Vec2& center, double R, const FracParams& p, const Vec2& x) {
  if (!(R > 0.0)) throw std::invalid_argument("exact_ball_solution: R must be positive");
  p.validate();
  const double q = R * R - (x - center).squaredNorm();
  if (q <= 0.0) return 0.0;
  return ball_constant(p) * std::pow(q, p.s);
}

double energy(const Field& u, const OperatorMatrix& op) {
  const double hn = std::pow(u.grid.h, u.grid.dim);
  return 0.5 * hn * u.values.dot(op.A * u.values) - hn * u.values.sum();
}

double solver_error_band(double h, const FracParams& p) {
  return 2.0 * ball_constant(p) * std::pow(h, p.s);
}

LowerBoundReport verify_lower_bound(const Field& u, const Domain& d, const FracParams& p,
                                    LowerBoundMode mode, double cprime) {
  p.validate();
  LowerBoundReport rep;
  rep.eps_band = solver_error_band(u.grid.h, p);
  rep.node_count = u.grid.node_count();
  rep.min_slack = std::numeric_limits<double>::infinity();
  const double gamma = ball_constant(p);
  double factor = 0.0, expo = 0.0;
  switch (mode) {
    case LowerBoundMode::Weak:
      factor = gamma;
      expo = 2.0 * p.s;
      break;
    case LowerBoundMode::Sphere:
      factor = gamma * std::pow(interior_sphere_radius(d), p.s);
      expo = p.s;
      break;
    case LowerBoundMode::CPrime:
      if (!(cprime > 0.0)) throw std::invalid_argument("verify_lower_bound: need positive C'");
      factor = cprime;
      expo = 2.0 * p.s;
      break;
  }
  int violations = 0;
  for (int i = 0; i < rep.node_count; ++i) {
    const double dist = d.boundary_distance(u.grid.nodes[i]);
    const double slack = u.values(i) - factor * std::pow(dist, expo);
    rep.min_slack = std::min(rep.min_slack, slack);
    if (slack < -rep.eps_band) ++violations;
  }
  rep.violating_fraction = rep.node_count ? double(violations) / rep.node_count : 0.0;
  return rep;
}

}  // namespace fracstab
