#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "fracstab/movingplane.hpp"
#include "fracstab/neumann.hpp"
#include "fracstab/stability.hpp"

namespace fracstab {

// CSV field dump: columns x,(y,)u in lexicographic node order.
std::string field_csv(const Field& u);

// CSV trace dump: arclength parameter, x,(y,) value.
std::string trace_csv(const NeumannTrace& tr);

nlohmann::json trace_summary_json(const NeumannTrace& tr, const std::string& domain_spec, double s);

nlohmann::json to_json(const MovingPlaneResult& r);
MovingPlaneResult moving_plane_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StabilityReport& r);
StabilityReport stability_from_json(const nlohmann::json& j);

// Static SVG contour-style plot of a field (colored cells + boundary).
std::string field_svg(const Field& u, const Domain& d);

// SVG of a parallel surface trace colored by value.
std::string trace_svg(const NeumannTrace& tr, const Domain& d);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fracstab
