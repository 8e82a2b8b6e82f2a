#include "fracstab/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

namespace fracstab {

namespace {

// shortest round-trip decimal representation
std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string color_of(double t) {
  // 5-stop blue->yellow ramp on t in [0,1]
  static const int stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98},
                                  {253, 231, 37}};
  t = std::min(std::max(t, 0.0), 1.0);
  const double x = t * 4.0;
  const int i = std::min(3, (int)x);
  const double f = x - i;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                (int)std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                (int)std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                (int)std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

}  // namespace

std::string field_csv(const Field& u) {
  std::string out = u.grid.dim == 1 ? "x,u\n" : "x,y,u\n";
  // lexicographic lattice order for reproducibility
  std::vector<int> order(u.grid.node_count());
  for (int i = 0; i < (int)order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& ia = u.grid.index[a];
    const auto& ib = u.grid.index[b];
    return ia.x() != ib.x() ? ia.x() < ib.x() : ia.y() < ib.y();
  });
  for (int i : order) {
    out += num(u.grid.nodes[i].x());
    if (u.grid.dim == 2) out += "," + num(u.grid.nodes[i].y());
    out += "," + num(u.values(i)) + "\n";
  }
  return out;
}

std::string trace_csv(const NeumannTrace& tr) {
  std::string out = "arclength,x,y,value\n";
  double arc = 0.0;
  for (size_t i = 0; i < tr.surface.points.size(); ++i) {
    if (i > 0) arc += (tr.surface.points[i] - tr.surface.points[i - 1]).norm();
    out += num(arc) + "," + num(tr.surface.points[i].x()) + "," + num(tr.surface.points[i].y()) +
           "," + num(tr.values[i]) + "\n";
  }
  return out;
}

nlohmann::json trace_summary_json(const NeumannTrace& tr, const std::string& domain_spec,
                                  double s) {
  double vmin = 0.0, vmax = 0.0, mean = 0.0;
  if (!tr.values.empty()) {
    vmin = *std::min_element(tr.values.begin(), tr.values.end());
    vmax = *std::max_element(tr.values.begin(), tr.values.end());
    for (double v : tr.values) mean += v;
    mean /= (double)tr.values.size();
  }
  return nlohmann::json{{"domain", domain_spec},
                        {"s", s},
                        {"t", tr.surface.t},
                        {"samples", tr.values.size()},
                        {"spacing", tr.surface.spacing},
                        {"seminorm_sampled", tr.seminorm},
                        {"value_min", vmin},
                        {"value_max", vmax},
                        {"value_mean", mean}};
}

nlohmann::json to_json(const MovingPlaneResult& r) {
  nlohmann::json j{{"omega", {r.omega.x(), r.omega.y()}},
                   {"t", r.t},
                   {"lambda_star", r.lambda_star},
                   {"lambda_hat", r.lambda_hat},
                   {"case", touching_name(r.touching.kind)},
                   {"coincidence_fraction", r.touching.coincidence_fraction},
                   {"sym_diff", r.sym_diff},
                   {"inclusion_ok", r.inclusion.ok()},
                   {"inclusion_violating_fraction", r.inclusion.violating_fraction},
                   {"inclusion_max_penetration", r.inclusion.max_penetration},
                   {"inclusion_samples", r.inclusion.sample_count}};
  if (r.touching.interior_point)
    j["interior_touch"] = {r.touching.interior_point->x(), r.touching.interior_point->y()};
  if (r.touching.nontransversal_point)
    j["nontransversal_touch"] = {r.touching.nontransversal_point->x(),
                                 r.touching.nontransversal_point->y()};
  return j;
}

MovingPlaneResult moving_plane_from_json(const nlohmann::json& j) {
  MovingPlaneResult r;
  r.omega = Vec2(j.at("omega")[0].get<double>(), j.at("omega")[1].get<double>());
  r.t = j.at("t").get<double>();
  r.lambda_star = j.at("lambda_star").get<double>();
  r.lambda_hat = j.at("lambda_hat").get<double>();
  const std::string cs = j.at("case").get<std::string>();
  if (cs == "interior_touching") r.touching.kind = TouchingCase::InteriorTouching;
  else if (cs == "non_transversal") r.touching.kind = TouchingCase::NonTransversal;
  else if (cs == "both") r.touching.kind = TouchingCase::Both;
  else r.touching.kind = TouchingCase::Undetermined;
  r.touching.coincidence_fraction = j.at("coincidence_fraction").get<double>();
  r.sym_diff = j.at("sym_diff").get<double>();
  r.inclusion.violating_fraction = j.at("inclusion_violating_fraction").get<double>();
  r.inclusion.max_penetration = j.at("inclusion_max_penetration").get<double>();
  r.inclusion.sample_count = j.at("inclusion_samples").get<int>();
  if (j.contains("interior_touch"))
    r.touching.interior_point =
        Vec2(j["interior_touch"][0].get<double>(), j["interior_touch"][1].get<double>());
  if (j.contains("nontransversal_touch"))
    r.touching.nontransversal_point =
        Vec2(j["nontransversal_touch"][0].get<double>(), j["nontransversal_touch"][1].get<double>());
  return r;
}

namespace {

nlohmann::json geom_to_json(const GeomSummary& g) {
  nlohmann::json j{{"diam", g.diam},
                   {"reach", g.reach},
                   {"area", g.area},
                   {"unit_ball_vol", g.unit_ball_vol}};
  if (g.inner_sphere) j["inner_sphere"] = *g.inner_sphere;
  if (g.curvature_total) j["curvature_total"] = *g.curvature_total;
  return j;
}

GeomSummary geom_from_json(const nlohmann::json& j) {
  GeomSummary g;
  g.diam = j.at("diam").get<double>();
  g.reach = j.at("reach").get<double>();
  g.area = j.at("area").get<double>();
  g.unit_ball_vol = j.at("unit_ball_vol").get<double>();
  if (j.contains("inner_sphere")) g.inner_sphere = j["inner_sphere"].get<double>();
  if (j.contains("curvature_total")) g.curvature_total = j["curvature_total"].get<double>();
  return g;
}

}  // namespace

nlohmann::json to_json(const StabilityReport& r) {
  nlohmann::json dirs = nlohmann::json::array();
  for (const DirectionCheck& c : r.direction_checks)
    dirs.push_back({{"angle", c.angle},
                    {"lambda_star_centered", c.lambda_star},
                    {"bound", c.bound},
                    {"sym_diff", c.sym_diff},
                    {"sym_diff_bound", c.sym_diff_bound},
                    {"ok", c.ok}});
  nlohmann::json j{{"variant", variant_name(r.variant)},
                   {"domain", r.domain_spec},
                   {"s", r.s},
                   {"t", r.t},
                   {"h", r.h},
                   {"m", r.m},
                   {"geometry", geom_to_json(r.geom)},
                   {"constants",
                    {{"C", r.constants.C},
                     {"C1", r.constants.C1},
                     {"C2", r.constants.C2},
                     {"Csharp", r.constants.Csharp},
                     {"Cflat", r.constants.Cflat},
                     {"exponent", r.constants.exponent}}},
                   {"rho", r.rho},
                   {"seminorm_sampled", r.seminorm},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"margin", r.margin},
                   {"eps_total", r.eps_total},
                   {"center", {r.center.x(), r.center.y()}},
                   {"directions", dirs},
                   {"classification", r.classification},
                   {"u_center", r.u_center},
                   {"provenance",
                    {{"software", "fracstab 0.1.0"},
                     {"tol_note", "seminorm is a sampled lower bound of the supremum"}}}};
  if (r.cns_caveat) j["caveat"] = "constants computed with the unspecified C_{n,s} set to 1";
  if (r.cprime) j["cprime"] = *r.cprime;
  return j;
}

StabilityReport stability_from_json(const nlohmann::json& j) {
  StabilityReport r;
  r.variant = variant_from_name(j.at("variant").get<std::string>());
  r.domain_spec = j.at("domain").get<std::string>();
  r.s = j.at("s").get<double>();
  r.t = j.at("t").get<double>();
  r.h = j.at("h").get<double>();
  r.m = j.at("m").get<int>();
  r.geom = geom_from_json(j.at("geometry"));
  const auto& c = j.at("constants");
  r.constants.variant = r.variant;
  r.constants.C = c.at("C").get<double>();
  r.constants.C1 = c.at("C1").get<double>();
  r.constants.C2 = c.at("C2").get<double>();
  r.constants.Csharp = c.at("Csharp").get<double>();
  r.constants.Cflat = c.at("Cflat").get<double>();
  r.constants.exponent = c.at("exponent").get<double>();
  r.rho = j.at("rho").get<double>();
  r.seminorm = j.at("seminorm_sampled").get<double>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.margin = j.at("margin").get<double>();
  r.eps_total = j.at("eps_total").get<double>();
  r.center = Vec2(j.at("center")[0].get<double>(), j.at("center")[1].get<double>());
  for (const auto& dj : j.at("directions")) {
    DirectionCheck chk;
    chk.angle = dj.at("angle").get<double>();
    chk.lambda_star = dj.at("lambda_star_centered").get<double>();
    chk.bound = dj.at("bound").get<double>();
    chk.sym_diff = dj.at("sym_diff").get<double>();
    chk.sym_diff_bound = dj.at("sym_diff_bound").get<double>();
    chk.ok = dj.at("ok").get<bool>();
    r.direction_checks.push_back(chk);
  }
  r.classification = j.at("classification").get<std::string>();
  r.u_center = j.at("u_center").get<double>();
  r.cns_caveat = j.contains("caveat");
  if (j.contains("cprime")) r.cprime = j["cprime"].get<double>();
  return r;
}

std::string field_svg(const Field& u, const Domain& d) {
  const double h = u.grid.h;
  const double lo_x = u.grid.bbox_lo.x(), hi_x = u.grid.bbox_hi.x();
  const double lo_y = u.grid.dim == 1 ? -0.1 : u.grid.bbox_lo.y();
  const double hi_y = u.grid.dim == 1 ? 0.1 : u.grid.bbox_hi.y();
  const double scale = 640.0 / (hi_x - lo_x);
  const double W = 640.0, H = (hi_y - lo_y) * scale;
  auto px = [&](double x) { return (x - lo_x) * scale; };
  auto py = [&](double y) { return H - (y - lo_y) * scale; };
  const double vmax = std::max(1e-300, u.values.size() ? u.values.maxCoeff() : 0.0);
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
                    num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int i = 0; i < u.grid.node_count(); ++i) {
    const Vec2& x = u.grid.nodes[i];
    const double yy = u.grid.dim == 1 ? 0.0 : x.y();
    svg += "<rect x=\"" + num(px(x.x() - 0.5 * h)) + "\" y=\"" + num(py(yy + 0.5 * h)) +
           "\" width=\"" + num(h * scale) + "\" height=\"" + num(h * scale) + "\" fill=\"" +
           color_of(u.values(i) / vmax) + "\"/>\n";
  }
  if (u.grid.dim == 2) {
    svg += "<path d=\"";
    const int mb = 256;
    for (int i = 0; i <= mb; ++i) {
      const Vec2 b = d.boundary_point(2.0 * 3.14159265358979323846 * i / mb);
      svg += (i == 0 ? "M" : "L") + num(px(b.x())) + " " + num(py(b.y()));
    }
    svg += "Z\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string trace_svg(const NeumannTrace& tr, const Domain& d) {
  (void)d;
  double vmin = 0.0, vmax = 1.0;
  if (!tr.values.empty()) {
    vmin = *std::min_element(tr.values.begin(), tr.values.end());
    vmax = *std::max_element(tr.values.begin(), tr.values.end());
  }
  const double span = std::max(vmax - vmin, 1e-300);
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const Vec2& p : tr.surface.points) {
    lo_x = std::min(lo_x, p.x());
    hi_x = std::max(hi_x, p.x());
    lo_y = std::min(lo_y, p.y());
    hi_y = std::max(hi_y, p.y());
  }
  const double pad = 0.05 * std::max(hi_x - lo_x, hi_y - lo_y) + 1e-9;
  lo_x -= pad; hi_x += pad; lo_y -= pad; hi_y += pad;
  const double scale = 640.0 / (hi_x - lo_x);
  const double W = 640.0, H = (hi_y - lo_y) * scale;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
                    num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (size_t i = 0; i < tr.surface.points.size(); ++i) {
    const Vec2& p = tr.surface.points[i];
    svg += "<circle cx=\"" + num((p.x() - lo_x) * scale) + "\" cy=\"" +
           num(H - (p.y() - lo_y) * scale) + "\" r=\"3\" fill=\"" +
           color_of((tr.values[i] - vmin) / span) + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

}  // namespace fracstab
