#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>

#include "fracstab/domain_spec.hpp"
#include "fracstab/report_io.hpp"
#include "fracstab/stability.hpp"

namespace {

using namespace fracstab;

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 1;
constexpr int kExitVerification = 2;
constexpr int kExitUsage = 64;

struct CommonOpts {
  std::string domain_spec;
  std::string config_path;
  double s = 0.5;
  double t = 0.3;
  double h = 1.0 / 32.0;
  int m = 128;
  double tol_mp = 0.0;  // 0 -> default 1e-4*diam
};

// --config file: line-oriented key=value pairs overriding defaults
void apply_config(CommonOpts& o) {
  if (o.config_path.empty()) return;
  std::ifstream in(o.config_path);
  if (!in) throw std::invalid_argument("config: cannot open " + o.config_path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: expected key=value, got " + line);
    const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "domain") o.domain_spec = val;
    else if (key == "s") o.s = std::stod(val);
    else if (key == "t") o.t = std::stod(val);
    else if (key == "h") o.h = std::stod(val);
    else if (key == "m") o.m = std::stoi(val);
    else if (key == "tol_mp") o.tol_mp = std::stod(val);
    else throw std::invalid_argument("config: unknown key " + key);
  }
}

FracParams params_for(const Domain& d, double s) { return FracParams{d.dim(), s}; }

LipschitzFn parse_f_spec(const std::string& spec) {
  // "affine:a=1,b=0.1" means f(u) = a + b u
  if (spec.rfind("affine:", 0) != 0)
    throw SpecParseError("f spec: only 'affine:a=..,b=..' is supported");
  double a = 0.0, b = 0.0;
  bool seen_a = false, seen_b = false;
  std::stringstream ss(spec.substr(7));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos) throw SpecParseError("f spec: expected key=value");
    const std::string key = item.substr(0, eq);
    const double v = std::stod(item.substr(eq + 1));
    if (key == "a") { a = v; seen_a = true; }
    else if (key == "b") { b = v; seen_b = true; }
    else throw SpecParseError("f spec: unknown key " + key);
  }
  if (!seen_a || !seen_b) throw SpecParseError("f spec: need both a and b");
  LipschitzFn f;
  f.f = [a, b](double u) { return a + b * u; };
  f.lipschitz = std::abs(b);
  f.f0 = a;
  return f;
}

int run_solve(const CommonOpts& o, const std::string& f_spec, const std::string& out_path) {
  const Domain d = parse_domain_spec(o.domain_spec);
  const FracParams p = params_for(d, o.s);
  const Grid g = build_grid(d, o.h);
  Field u;
  if (f_spec.empty()) {
    u = solve_torsion(d, g, p);
  } else {
    u = solve_semilinear(d, g, p, parse_f_spec(f_spec)).field;
  }
  write_text_file(out_path, field_csv(u));
  const std::string svg_path = out_path + ".svg";
  write_text_file(svg_path, field_svg(u, d));
  std::cout << "nodes=" << g.node_count() << " u_center=" << u.value_at(d.centroid_hint())
            << " wrote " << out_path << " and " << svg_path << "\n";
  return kExitOk;
}

int run_neumann(const CommonOpts& o, const std::string& out_path) {
  const Domain d = parse_domain_spec(o.domain_spec);
  const FracParams p = params_for(d, o.s);
  const Grid g = build_grid(d, o.h);
  const Field u = solve_torsion(d, g, p);
  const NeumannTrace tr = neumann_trace(u, d, p, o.t, o.m);
  write_text_file(out_path, trace_csv(tr));
  const std::string json_path = out_path + ".json";
  write_text_file(json_path, trace_summary_json(tr, o.domain_spec, o.s).dump(2) + "\n");
  write_text_file(out_path + ".svg", trace_svg(tr, d));
  std::cout << "seminorm_sampled=" << tr.seminorm << " wrote " << out_path << " and " << json_path
            << "\n";
  return kExitOk;
}

int run_movingplane(const CommonOpts& o, int directions, const std::string& out_path) {
  const Domain d = parse_domain_spec(o.domain_spec);
  const double tol = o.tol_mp > 0.0 ? o.tol_mp : default_tol_mp(d);
  nlohmann::json arr = nlohmann::json::array();
  const int fan = d.dim() == 1 ? 2 : directions;
  bool all_ok = true;
  for (int k = 0; k < fan; ++k) {
    const double ang = d.dim() == 1 ? M_PI * k : 2.0 * M_PI * k / fan;
    const MovingPlaneResult r = moving_plane_analyze(d, o.t, Direction::angle(ang), tol);
    all_ok = all_ok && r.inclusion.ok() && r.lambda_hat <= r.lambda_star + tol;
    arr.push_back(to_json(r));
  }
  write_text_file(out_path, arr.dump(2) + "\n");
  std::cout << "directions=" << fan << " wrote " << out_path << "\n";
  return all_ok ? kExitOk : kExitVerification;
}

int run_verify(const CommonOpts& o, const std::string& variant_name_in, const std::string& f_spec,
               const std::string& out_path) {
  const Domain d = parse_domain_spec(o.domain_spec);
  const FracParams p = params_for(d, o.s);
  const TheoremVariant variant = variant_from_name(variant_name_in);
  LipschitzFn f;
  const bool semilinear = variant == TheoremVariant::T14 || variant == TheoremVariant::T16;
  if (semilinear) {
    if (f_spec.empty()) throw std::invalid_argument("verify: T14/T16 need --f affine:a=..,b=..");
    f = parse_f_spec(f_spec);
  }
  const StabilityReport rep =
      verify_theorem(d, p, o.t, o.h, o.m, variant, semilinear ? &f : nullptr);
  write_text_file(out_path, to_json(rep).dump(2) + "\n");
  std::cout << variant_name(rep.variant) << " " << rep.domain_spec << ": rho=" << rep.rho
            << " seminorm=" << rep.seminorm << " margin=" << rep.margin << " ["
            << rep.classification << "] wrote " << out_path << "\n";
  return rep.classification == "violation" ? kExitVerification : kExitOk;
}

int run_steiner(const CommonOpts& o, const std::string& out_path) {
  const Domain d = parse_domain_spec(o.domain_spec);
  const double phi1 = curvature_measure(d);
  const ReachCertificate rc = certified_reach(d);
  nlohmann::json rows = nlohmann::json::array();
  bool ok = true;
  const double g_hi = 0.9 * d.inradius();
  for (double g = 0.02 * g_hi; g <= g_hi; g *= 2.0) {
    const double tube = half_tube_measure(d, g);
    const double bound62 = g * std::pow(1.0 + 2.0 * g / rc.value, d.dim() - 1) * 2.0 * phi1;
    nlohmann::json row{{"gamma", g}, {"tube", tube}, {"lemma62_bound", bound62}};
    if (d.is_convex()) {
      const double bound61 = g * d.perimeter();
      row["lemma61_bound"] = bound61;
      ok = ok && tube <= bound61 * 1.005 + 1e-9;
    }
    ok = ok && tube <= bound62 * 1.005 + 1e-9;
    rows.push_back(row);
  }
  nlohmann::json j{{"domain", o.domain_spec},
                   {"phi1", phi1},
                   {"reach_certified", rc.value},
                   {"reach_capped", rc.capped},
                   {"rows", rows}};
  write_text_file(out_path, j.dump(2) + "\n");
  std::cout << "phi1=" << phi1 << " wrote " << out_path << "\n";
  return ok ? kExitOk : kExitVerification;
}

int run_corpus(const CommonOpts& o, const std::string& out_path) {
  nlohmann::json arr = nlohmann::json::array();
  bool ok = true;
  for (const Domain& d : verification_corpus()) {
    const FracParams p = params_for(d, o.s);
    const bool has_sphere = d.kind() != DomainKind::Rectangle && d.kind() != DomainKind::ConvexPolygon;
    const TheoremVariant variant = has_sphere ? TheoremVariant::T13 : TheoremVariant::T15;
    try {
      const StabilityReport rep = verify_theorem(d, p, o.t, o.h, o.m, variant);
      ok = ok && rep.classification != "violation";
      arr.push_back(to_json(rep));
    } catch (const std::exception& e) {
      arr.push_back({{"domain", d.spec_string()}, {"error", e.what()}});
      ok = false;
    }
  }
  write_text_file(out_path, arr.dump(2) + "\n");
  std::cout << "corpus reports written to " << out_path << "\n";
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracstab: fractional torsion overdetermined-problem verification toolkit"};
  app.set_help_flag("--help", "print help");  // frees -h / --h for the grid spacing
  app.require_subcommand(1);

  CommonOpts o;
  std::string f_spec, variant = "T13", out_path = "out.csv";
  int directions = 16;

  auto add_common = [&](CLI::App* cmd, bool needs_domain = true) {
    if (needs_domain) cmd->add_option("--domain", o.domain_spec, "domain spec, e.g. disk:R=1")->required();
    cmd->add_option("--s", o.s, "fractional order in (0,1)");
    cmd->add_option("--t", o.t, "parallel surface offset");
    cmd->add_option("--h", o.h, "grid spacing");
    cmd->add_option("--m", o.m, "surface sample count");
    cmd->add_option("--tol-mp", o.tol_mp, "moving-plane tolerance override");
    cmd->add_option("--config", o.config_path, "key=value config file overriding defaults");
    cmd->add_option("--out", out_path, "output path");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve the torsion or semilinear problem");
  add_common(solve);
  solve->add_option("--f", f_spec, "semilinear rhs, e.g. affine:a=1,b=0.1");

  CLI::App* neumann = app.add_subcommand("neumann", "trace of N_s u on Gamma_t");
  add_common(neumann);

  CLI::App* mp = app.add_subcommand("movingplane", "per-direction critical values and inclusion");
  add_common(mp);
  mp->add_option("--directions", directions, "fan size");

  CLI::App* verify = app.add_subcommand("verify", "stability theorem verification report");
  add_common(verify);
  verify->add_option("--variant", variant, "T13|T14|T15|T16");
  verify->add_option("--f", f_spec, "semilinear rhs for T14/T16");

  CLI::App* steiner = app.add_subcommand("steiner", "Phi_1 and half-tube bound table");
  add_common(steiner);

  CLI::App* corpus = app.add_subcommand("corpus", "run the verification corpus");
  add_common(corpus, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    apply_config(o);
    if (solve->parsed()) return run_solve(o, f_spec, out_path);
    if (neumann->parsed()) return run_neumann(o, out_path);
    if (mp->parsed()) return run_movingplane(o, directions, out_path);
    if (verify->parsed()) return run_verify(o, variant, f_spec, out_path);
    if (steiner->parsed()) return run_steiner(o, out_path);
    if (corpus->parsed()) return run_corpus(o, out_path);
  } catch (const SpecParseError& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "see 'fracstab <subcommand> --help' for the spec grammar\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  return kExitUsage;
}
