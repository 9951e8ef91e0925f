#pragma once

// JSON run configuration for the CLI: parse + validate, canonical emission,
// and the translation into a ProblemSpec.  A config file is one flat object:
//
//   {
//     "case": "II",
//     "k": 1.4142135623730951,
//     "eps": 1e-06,                              // optional, default 1e-6
//     "n_max": 0,                                // optional truncation override
//     "eta": 1,                                  // optional coupling, default 1
//     "complement": {
//       "interior": [[2,2],[3,2],[3,3]],         // empty/omitted for case I
//       "boundary": [[1,2],[1,3], ...]
//     },
//     "boundary_data": 1,                        // number, [re,im], or
//                                                // {"default":d, "values":[{"point":[a,b],"value":v}]}
//     "window": {"x1": [-15,20], "x2": [-15,20]},
//     "output": {"field":"field.csv", "embedded":"field_embedded.csv", "report":"report.txt"},
//     "radiation": {"rays": [[1,0],[2,1],[1,1],[1,2],[0,1]], "r_min": 20, "r_max": 80}
//   }
//
// Structural problems (bad JSON, wrong types, unknown keys) raise ParseError;
// value problems (k out of range, broken geometry, dangling overrides) raise
// ValidationError.  emit_config(parse_config(t)) is a fixed point and
// parse_config(emit_config(c)) == c.

#include <json.hpp>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "trihelm/errors.hpp"
#include "trihelm/lattice.hpp"
#include "trihelm/solver.hpp"

namespace trihelm {

inline std::vector<Point> default_rays() {
  return {{1, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 1}};
}

struct RunConfig {
  ProblemCase problem_case = ProblemCase::CaseII;
  double k = 1.4142135623730951;
  double eps = 1e-6;
  int n_max = 0;
  double eta = 1.0;
  std::vector<Point> interior;
  std::vector<Point> boundary;
  Complex data_default{1.0, 0.0};
  std::vector<std::pair<Point, Complex>> data_overrides;  // sorted by point
  Window window{};
  std::string out_field = "field.csv";
  std::string out_embedded = "field_embedded.csv";
  std::string out_report = "report.txt";
  std::vector<Point> rays = default_rays();
  double r_min = 20.0;
  double r_max = 80.0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void bad_field(const std::string& where, const std::string& why) {
  throw ParseError("config field '" + where + "': " + why);
}

inline void expect_keys(const json& j, const std::string& where,
                        std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = std::any_of(allowed.begin(), allowed.end(),
                             [&](const char* a) { return item.key() == a; });
    if (!known) bad_field(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
  }
}

inline double json_number(const json& j, const std::string& where) {
  if (!j.is_number()) bad_field(where, "expected a number");
  return j.get<double>();
}

inline std::int64_t json_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad_field(where, "expected an integer");
  return j.get<std::int64_t>();
}

inline Complex json_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  bad_field(where, "expected a number or [re, im]");
}

inline Point json_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) bad_field(where, "expected [x1, x2]");
  return {json_integer(j[0], where), json_integer(j[1], where)};
}

inline std::vector<Point> json_points(const json& j, const std::string& where) {
  if (!j.is_array()) bad_field(where, "expected an array of [x1, x2] pairs");
  std::vector<Point> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(json_point(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline void require_distinct(const std::vector<Point>& pts, const std::string& what) {
  PointSet seen;
  for (Point p : pts)
    if (!seen.insert(p).second)
      throw ValidationError("duplicate point in " + what);
}

inline Region config_region(ProblemCase pc, const std::vector<Point>& interior,
                            const std::vector<Point>& boundary) {
  PointSet b(boundary.begin(), boundary.end());
  if (pc == ProblemCase::CaseI) return make_case1_region(std::move(b));
  return make_finite_region(PointSet(interior.begin(), interior.end()), std::move(b));
}

inline void validate_config(const RunConfig& c) {
  validate_wave_number(c.k);
  if (!(c.eps >= 0)) throw ValidationError("eps must be nonnegative");
  if (c.n_max < 0) throw ValidationError("n_max must be nonnegative");
  if (c.problem_case == ProblemCase::CaseII && c.eta == 0)
    throw ValidationError("eta must be nonzero for case II");
  if (c.boundary.empty()) throw ValidationError("boundary point list is empty");
  require_distinct(c.boundary, "complement.boundary");
  require_distinct(c.interior, "complement.interior");
  if (c.problem_case == ProblemCase::CaseI && !c.interior.empty())
    throw ValidationError("case I admits no complement interior points");
  if (c.problem_case == ProblemCase::CaseII && c.interior.empty())
    throw ValidationError("case II requires complement interior points");
  PointSet bset(c.boundary.begin(), c.boundary.end());
  PointSet override_seen;
  for (const auto& [p, v] : c.data_overrides) {
    if (!bset.count(p))
      throw ValidationError("boundary_data override names a point off the boundary");
    if (!override_seen.insert(p).second)
      throw ValidationError("duplicate boundary_data override");
  }
  if (c.window.x1_min > c.window.x1_max || c.window.x2_min > c.window.x2_max)
    throw ValidationError("window is empty");
  if (c.rays.empty()) throw ValidationError("radiation.rays is empty");
  for (Point d : c.rays)
    if (d.x1 == 0 && d.x2 == 0) throw ValidationError("radiation ray direction is zero");
  if (!(0 < c.r_min && c.r_min < c.r_max))
    throw ValidationError("radiation radii must satisfy 0 < r_min < r_max");
  try {
    Region r = config_region(c.problem_case, c.interior, c.boundary);
    validate_region(r);
    check_cone_condition(r);
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(std::string("region checks failed: ") + e.what());
  }
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const detail::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config root must be an object");
  detail::expect_keys(j, "", {"case", "k", "eps", "n_max", "eta", "complement", "boundary_data",
                              "window", "output", "radiation"});
  for (const char* req : {"case", "k", "complement"})
    if (!j.contains(req)) throw ParseError(std::string("config field '") + req + "': missing");

  RunConfig c;
  if (!j["case"].is_string()) detail::bad_field("case", "expected \"I\" or \"II\"");
  std::string pc = j["case"].get<std::string>();
  if (pc == "I")
    c.problem_case = ProblemCase::CaseI;
  else if (pc == "II")
    c.problem_case = ProblemCase::CaseII;
  else
    throw ValidationError("case must be \"I\" or \"II\"");
  c.k = detail::json_number(j["k"], "k");
  if (j.contains("eps")) c.eps = detail::json_number(j["eps"], "eps");
  if (j.contains("n_max"))
    c.n_max = static_cast<int>(detail::json_integer(j["n_max"], "n_max"));
  if (j.contains("eta")) c.eta = detail::json_number(j["eta"], "eta");

  const detail::json& comp = j["complement"];
  if (!comp.is_object()) detail::bad_field("complement", "expected an object");
  detail::expect_keys(comp, "complement", {"interior", "boundary"});
  if (!comp.contains("boundary")) detail::bad_field("complement.boundary", "missing");
  c.boundary = detail::json_points(comp["boundary"], "complement.boundary");
  if (comp.contains("interior"))
    c.interior = detail::json_points(comp["interior"], "complement.interior");

  if (j.contains("boundary_data")) {
    const detail::json& bd = j["boundary_data"];
    if (bd.is_object()) {
      detail::expect_keys(bd, "boundary_data", {"default", "values"});
      if (bd.contains("default"))
        c.data_default = detail::json_complex(bd["default"], "boundary_data.default");
      if (bd.contains("values")) {
        if (!bd["values"].is_array()) detail::bad_field("boundary_data.values", "expected an array");
        for (const auto& item : bd["values"]) {
          if (!item.is_object()) detail::bad_field("boundary_data.values", "expected objects");
          detail::expect_keys(item, "boundary_data.values", {"point", "value"});
          if (!item.contains("point") || !item.contains("value"))
            detail::bad_field("boundary_data.values", "entries need 'point' and 'value'");
          c.data_overrides.emplace_back(
              detail::json_point(item["point"], "boundary_data.values.point"),
              detail::json_complex(item["value"], "boundary_data.values.value"));
        }
        std::sort(c.data_overrides.begin(), c.data_overrides.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
      }
    } else {
      c.data_default = detail::json_complex(bd, "boundary_data");
    }
  }

  if (j.contains("window")) {
    const detail::json& w = j["window"];
    if (!w.is_object()) detail::bad_field("window", "expected an object");
    detail::expect_keys(w, "window", {"x1", "x2"});
    auto axis = [&](const char* name, std::int64_t& lo, std::int64_t& hi) {
      if (!w.contains(name)) return;
      const detail::json& a = w[name];
      std::string where = std::string("window.") + name;
      if (!a.is_array() || a.size() != 2) detail::bad_field(where, "expected [min, max]");
      lo = detail::json_integer(a[0], where);
      hi = detail::json_integer(a[1], where);
    };
    axis("x1", c.window.x1_min, c.window.x1_max);
    axis("x2", c.window.x2_min, c.window.x2_max);
  }

  if (j.contains("output")) {
    const detail::json& o = j["output"];
    if (!o.is_object()) detail::bad_field("output", "expected an object");
    detail::expect_keys(o, "output", {"field", "embedded", "report"});
    auto name = [&](const char* key, std::string& slot) {
      if (!o.contains(key)) return;
      if (!o[key].is_string()) detail::bad_field(std::string("output.") + key, "expected a string");
      slot = o[key].get<std::string>();
      if (slot.empty()) detail::bad_field(std::string("output.") + key, "file name is empty");
    };
    name("field", c.out_field);
    name("embedded", c.out_embedded);
    name("report", c.out_report);
  }

  if (j.contains("radiation")) {
    const detail::json& r = j["radiation"];
    if (!r.is_object()) detail::bad_field("radiation", "expected an object");
    detail::expect_keys(r, "radiation", {"rays", "r_min", "r_max"});
    if (r.contains("rays")) c.rays = detail::json_points(r["rays"], "radiation.rays");
    if (r.contains("r_min")) c.r_min = detail::json_number(r["r_min"], "radiation.r_min");
    if (r.contains("r_max")) c.r_max = detail::json_number(r["r_max"], "radiation.r_max");
  }

  detail::validate_config(c);
  return c;
}

namespace detail {

inline json complex_json(Complex v) {
  if (v.imag() == 0.0) return v.real();
  return json::array({v.real(), v.imag()});
}

inline json point_json(Point p) { return json::array({p.x1, p.x2}); }

inline json points_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (Point p : pts) a.push_back(point_json(p));
  return a;
}

}  // namespace detail

// Canonical form: every field explicit, object keys in nlohmann's sorted
// order, shortest round-tripping number literals.
inline std::string emit_config(const RunConfig& c) {
  detail::json j;
  j["case"] = c.problem_case == ProblemCase::CaseI ? "I" : "II";
  j["k"] = c.k;
  j["eps"] = c.eps;
  j["n_max"] = c.n_max;
  j["eta"] = c.eta;
  j["complement"]["interior"] = detail::points_json(c.interior);
  j["complement"]["boundary"] = detail::points_json(c.boundary);
  if (c.data_overrides.empty()) {
    j["boundary_data"] = detail::complex_json(c.data_default);
  } else {
    j["boundary_data"]["default"] = detail::complex_json(c.data_default);
    detail::json vals = detail::json::array();
    for (const auto& [p, v] : c.data_overrides)
      vals.push_back({{"point", detail::point_json(p)}, {"value", detail::complex_json(v)}});
    j["boundary_data"]["values"] = std::move(vals);
  }
  j["window"]["x1"] = detail::json::array({c.window.x1_min, c.window.x1_max});
  j["window"]["x2"] = detail::json::array({c.window.x2_min, c.window.x2_max});
  j["output"]["field"] = c.out_field;
  j["output"]["embedded"] = c.out_embedded;
  j["output"]["report"] = c.out_report;
  j["radiation"]["rays"] = detail::points_json(c.rays);
  j["radiation"]["r_min"] = c.r_min;
  j["radiation"]["r_max"] = c.r_max;
  return j.dump(2) + "\n";
}

inline ProblemSpec to_problem_spec(const RunConfig& c) {
  ProblemSpec spec;
  spec.scatterer = detail::config_region(c.problem_case, c.interior, c.boundary);
  spec.k = c.k;
  spec.eps = c.eps;
  spec.eta = c.eta;
  spec.n_max = c.n_max;
  spec.window = c.window;
  BoundaryEnumeration b = enumerate_boundary(spec.scatterer);
  spec.f.assign(b.size(), c.data_default);
  for (const auto& [p, v] : c.data_overrides) {
    auto it = std::lower_bound(b.points.begin(), b.points.end(), p);
    if (it == b.points.end() || *it != p)
      throw ValidationError("boundary_data override names a point off the boundary");
    spec.f[static_cast<std::size_t>(it - b.points.begin())] = v;
  }
  return spec;
}

}  // namespace trihelm
