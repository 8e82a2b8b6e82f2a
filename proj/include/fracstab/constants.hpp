#pragma once

#include <optional>
#include <stdexcept>

namespace fracstab {

// Dimension / fractional order pair. Only n = 1 and n = 2 are supported;
// the stability machinery additionally requires s >= 1/2 when n = 1.
struct FracParams {
  int n = 2;
  double s = 0.5;

  void validate() const {
    if (n != 1 && n != 2) throw std::invalid_argument("FracParams: n must be 1 or 2");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("FracParams: s must lie in (0,1)");
  }
  void validate_for_stability() const {
    validate();
    if (n == 1 && s < 0.5)
      throw std::invalid_argument("FracParams: stability estimates need n >= 2, or n = 1 with s >= 1/2");
  }
};

// Geometric summary of a domain, in the units of the domain itself.
// `reach` is a certified lower bound on the reach of the closure; for convex
// domains the true reach is infinite and callers store the conventional cap
// 10*diam (the estimates remain valid for any finite stand-in).
struct GeomSummary {
  double diam = 0.0;
  double reach = 0.0;
  std::optional<double> inner_sphere;     // uniform interior sphere radius
  double area = 0.0;                      // |Omega|
  std::optional<double> curvature_total;  // Phi_{n-1}(closure, R^n)
  double unit_ball_vol = 0.0;             // |B_1| in R^n

  void validate() const;
};

enum class TheoremVariant { T13, T14, T15, T16 };

const char* variant_name(TheoremVariant v);
TheoremVariant variant_from_name(const std::string& name);

// Full constant set of one stability theorem, assembled from the closed-form
// displays. `exponent` is the stability exponent: 1/(2+s) for T13/T14 and
// 1/(2+2s) for T15/T16.
struct ConstantSet {
  TheoremVariant variant;
  double C = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double Csharp = 0.0;
  double Cflat = 0.0;
  double exponent = 0.0;
};

double unit_ball_volume(int n);

// Kernel normalization c_{n,s} = s(1-s) 4^s pi^{-n/2} Gamma(n/2+s)/Gamma(2-s).
double kernel_constant(const FracParams& p);

// Ball constant gamma_{n,s} = 4^{-s} Gamma(n/2) / (Gamma(n/2+s) Gamma(1+s)).
double ball_constant(const FracParams& p);

// Constants of the chosen stability theorem. For T14/T16 `cprime` replaces
// gamma_{n,s} in C1 and must be supplied by the caller.
ConstantSet stability_constants(const GeomSummary& g, const FracParams& p, TheoremVariant variant,
                                std::optional<double> cprime = std::nullopt);

// The semilinear Hopf-type constant C'. `c_ns` is the dimensional constant
// left unspecified by the underlying estimate; it is configurable and
// defaults to 1 everywhere in this project.
double cprime_constant(double f0, double f_lip, double u_sup, double u_weight_integral,
                       const GeomSummary& g, const FracParams& p, double c_ns = 1.0);

}  // namespace fracstab
