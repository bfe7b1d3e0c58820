#pragma once

#include <string>

#include "json.hpp"

#include "corrlab/correspondence.hpp"
#include "corrlab/trees.hpp"

namespace corrlab::io {

using nlohmann::json;

// SpherePoint as [re_z, im_z, re_w, im_w]
json to_json(const SpherePoint& p);
SpherePoint sphere_point_from_json(const json& j);

// MoebiusMap as four complex entries row-major, each [re, im]
json to_json(const MoebiusMap& m);
MoebiusMap moebius_from_json(const json& j);

// Expression tree: {"op":"const","re":..,"im":..} | {"op":"n"} |
// {"op":"+"|"-"|"*"|"/","args":[a, b]}; bare numbers read as constants.
json to_json(const Expr& e);
Expr expr_from_json(const json& j);

json to_json(const RescalingSequence& s);
RescalingSequence rescaling_from_json(const json& j);

// coefficient arrays as [re, im] pairs ascending
json to_json(const ComplexPoly& p);
ComplexPoly poly_from_json(const json& j);

// {"degree": d, "num": [[re,im],...], "den": [[re,im],...]}
json to_json(const HomRationalMap& f);
HomRationalMap map_from_json(const json& j);

// family format: coefficients as expression trees in n
json to_json(const RatMapFamily& f);
RatMapFamily family_from_json(const json& j);

// bivariate coefficient matrix plus bidegree and provenance tag
json to_json(const Correspondence& c);
Correspondence correspondence_from_json(const json& j);

json to_json(const TreeOfSpheres& t);
TreeOfSpheres tree_from_json(const json& j);

json to_json(const Signature& k);
Signature signature_from_json(const json& j);

json to_json(const ReducedForm& rf);

std::string tree_to_dot(const TreeOfSpheres& t);

// CSV of a root list: columns re, im, multiplicity
std::string roots_to_csv(const std::vector<std::pair<SpherePoint, int>>& roots);

// CSV of the sampled variety: columns x_re, x_im, y_re, y_im, branch_index
std::string variety_to_csv(const Correspondence& C, int grid_size);

std::string read_file(const std::string& path);
// temp file + rename; an interrupted run never leaves a partial artifact
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace corrlab::io
