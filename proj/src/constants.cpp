#include "fracstab/constants.hpp"

#include <cmath>
#include <string>

namespace fracstab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void GeomSummary::validate() const {
  if (!(diam > 0.0)) throw std::invalid_argument("GeomSummary: diam must be positive");
  if (!(reach > 0.0)) throw std::invalid_argument("GeomSummary: reach must be positive");
  if (!(area > 0.0)) throw std::invalid_argument("GeomSummary: area must be positive");
  if (!(unit_ball_vol > 0.0)) throw std::invalid_argument("GeomSummary: unit_ball_vol must be positive");
  if (inner_sphere) {
    if (!(*inner_sphere > 0.0)) throw std::invalid_argument("GeomSummary: inner_sphere must be positive");
    if (*inner_sphere > 0.5 * diam * (1.0 + 1e-12))
      throw std::invalid_argument("GeomSummary: inner_sphere cannot exceed diam/2");
  }
  if (curvature_total && !(*curvature_total > 0.0))
    throw std::invalid_argument("GeomSummary: curvature_total must be positive");
}

const char* variant_name(TheoremVariant v) {
  switch (v) {
    case TheoremVariant::T13: return "T13";
    case TheoremVariant::T14: return "T14";
    case TheoremVariant::T15: return "T15";
    case TheoremVariant::T16: return "T16";
  }
  return "?";
}

TheoremVariant variant_from_name(const std::string& name) {
  if (name == "T13") return TheoremVariant::T13;
  if (name == "T14") return TheoremVariant::T14;
  if (name == "T15") return TheoremVariant::T15;
  if (name == "T16") return TheoremVariant::T16;
  throw std::invalid_argument("unknown theorem variant: " + name);
}

double unit_ball_volume(int n) {
  if (n == 1) return 2.0;
  if (n == 2) return kPi;
  throw std::invalid_argument("unit_ball_volume: n must be 1 or 2");
}

double kernel_constant(const FracParams& p) {
  p.validate();
  const double n = p.n, s = p.s;
  // The Gamma(2-s) pole at s=1 is cancelled by the (1-s) prefactor; on
  // s in (0,1) both arguments stay in (1,2) resp. (0.25,2.5) where
  // std::tgamma is accurate to ~1e-15 relative.
  return s * (1.0 - s) * std::pow(4.0, s) * std::pow(kPi, -0.5 * n) *
         std::tgamma(0.5 * n + s) / std::tgamma(2.0 - s);
}

double ball_constant(const FracParams& p) {
  p.validate();
  const double n = p.n, s = p.s;
  return std::pow(4.0, -s) * std::tgamma(0.5 * n) /
         (std::tgamma(0.5 * n + s) * std::tgamma(1.0 + s));
}

ConstantSet stability_constants(const GeomSummary& g, const FracParams& p, TheoremVariant variant,
                                std::optional<double> cprime) {
  p.validate_for_stability();
  g.validate();
  const bool sphere_variant = (variant == TheoremVariant::T13 || variant == TheoremVariant::T14);
  const bool semilinear = (variant == TheoremVariant::T14 || variant == TheoremVariant::T16);
  if (sphere_variant && !g.inner_sphere)
    throw std::invalid_argument("stability_constants: T13/T14 require inner_sphere");
  if (!sphere_variant && !g.curvature_total)
    throw std::invalid_argument("stability_constants: T15/T16 require curvature_total");
  if (!sphere_variant && p.n < 2)
    throw std::invalid_argument("stability_constants: T15/T16 require n >= 2");
  if (semilinear && (!cprime || !(*cprime > 0.0)))
    throw std::invalid_argument("stability_constants: T14/T16 require a positive C' value");

  const double n = p.n, s = p.s;
  const double c = kernel_constant(p);
  const double lower = semilinear ? *cprime : ball_constant(p);
  const double diam = g.diam, r = g.reach, b1 = g.unit_ball_vol;

  ConstantSet out;
  out.variant = variant;
  if (sphere_variant) {
    const double rs = *g.inner_sphere;
    out.exponent = 1.0 / (2.0 + s);
    out.C1 = std::pow(diam + r, n + 2.0 * s + 2.0) / (c * lower * std::pow(rs, s) * (n + 2.0 * s));
    out.C2 = std::pow(diam, n - 1.0) + n * b1 * std::pow(diam, n) / (std::pow(2.0, n - 1.0) * rs);
    out.Csharp = 2.0 * (s + 2.0) * std::pow(out.C1, out.exponent) *
                 std::pow(out.C2 / (s + 1.0), (1.0 + s) / (2.0 + s));
    out.Cflat = 4.0 * (n + 3.0) * out.Csharp * diam / (std::pow(rs, n) * b1);
    out.C = 2.0 * out.Cflat;
  } else {
    // curvature_total is the Steiner-normalized Phi_{n-1} (half the boundary
    // measure); the tube estimate behind C2 is stated through the limit of
    // H^{n-1}(Gamma_t), which equals omega_1 Phi_{n-1} = 2 Phi_{n-1}
    const double boundary_measure = 2.0 * (*g.curvature_total);
    out.exponent = 1.0 / (2.0 + 2.0 * s);
    out.C1 = std::pow(diam + r, n + 2.0 * s + 2.0) / (c * lower * (n + 2.0 * s));
    out.C2 = std::pow(diam, n - 1.0) + std::pow(1.0 + 2.0 / r, n - 1.0) * boundary_measure;
    out.Csharp = 4.0 * (s + 1.0) * std::pow(out.C1, out.exponent) *
                 std::pow(out.C2 / (2.0 * s + 1.0), (2.0 * s + 1.0) / (2.0 + 2.0 * s));
    out.Cflat = 4.0 * (n + 3.0) * out.Csharp * diam / g.area;
    const double small_gate =
        diam * std::pow((2.0 * s + 1.0) * out.C1 / std::pow(diam, n - 1.0), out.exponent);
    out.C = std::max(2.0 * out.Cflat, small_gate);
  }
  return out;
}

double cprime_constant(double f0, double f_lip, double u_sup, double u_weight_integral,
                       const GeomSummary& g, const FracParams& p, double c_ns) {
  p.validate();
  g.validate();
  if (f0 < 0.0) throw std::invalid_argument("cprime_constant: f(0) must be nonnegative");
  if (f_lip < 0.0 || u_sup < 0.0 || u_weight_integral < 0.0)
    throw std::invalid_argument("cprime_constant: norms must be nonnegative");
  if (!(c_ns > 0.0)) throw std::invalid_argument("cprime_constant: C_{n,s} must be positive");
  if (f0 + u_weight_integral <= 0.0) throw std::runtime_error("cprime_constant: C' degenerate");
  const double n = p.n, s = p.s, diam = g.diam;
  return c_ns / std::pow(std::max(1.0, diam), n + 2.0 * s) /
         (1.0 + std::pow(diam, 2.0 * s) * f_lip) * (f0 + u_weight_integral);
}

}  // namespace fracstab
