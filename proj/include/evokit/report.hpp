#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "critical_points.hpp"
#include "error.hpp"
#include "geometry_checks.hpp"
#include "regularity.hpp"
#include "vec2.hpp"

namespace evokit {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

using json = nlohmann::json;

struct ErrorInfo {
  std::string code;
  std::string message;
  bool operator==(const ErrorInfo&) const = default;
};

inline ErrorInfo error_info(const GeometryError& e) { return {std::string(to_string(e.code())), e.what()}; }

/// Diagnostics at one zero of R'.
struct PointReport {
  double s1 = 0.0;
  std::string kind;  ///< "extremum", "inflection" or "plateau" (s1 at its midpoint)
  std::optional<RegularityEstimate> order;
  std::optional<CuspReport> cusp;
  std::optional<ErrorInfo> error;
  bool operator==(const PointReport&) const = default;
};

/// Tait-Kneser check on one stretch where R is monotone.
struct SegmentNesting {
  double s_begin = 0.0;
  double s_end = 0.0;
  std::optional<NestingResult> result;
  std::optional<ErrorInfo> error;
  bool operator==(const SegmentNesting&) const = default;
};

struct IncrevolSample {
  double s1 = 0.0;
  double s2 = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;  ///< rel_tol * (1 + |R(s2) - R(s1)|)
  bool pass = false;
  std::optional<ErrorInfo> error;
  bool operator==(const IncrevolSample&) const = default;
};

/// Every numeric setting an analysis ran with.
struct AnalysisParameters {
  double kappa_min = kDefaultKappaMin;
  int sample_density = 0;
  double window_lo = 1e-4;  ///< relative to the arclength range
  double window_hi = 1e-1;
  int scales = 48;
  double rounding_threshold = 0.15;
  double min_fit_r2 = 0.99;
  double critical_zero_threshold = 1e-10;
  double critical_tolerance = 1e-10;
  std::size_t nesting_pairs = 200;
  double nesting_slack = kNestingSlack;
  std::size_t increvol_pairs = 8;
  double increvol_rel_tol = 1e-6;
  double separation = 0.0;  ///< arclength; 0 selects 10 node spacings
  std::uint64_t seed = kDefaultSeed;
  bool operator==(const AnalysisParameters&) const = default;
};

struct AnalysisReport {
  int schema_version = kSchemaVersion;
  std::string tool_version = kToolVersion;
  std::string descriptor;
  std::string curve_name;
  std::map<std::string, double> curve_params;
  std::size_t nodes = 0;
  double s_begin = 0.0;
  double s_end = 0.0;
  AnalysisParameters parameters;
  std::optional<std::string> skipped;  ///< why evolute analyses were not run
  CriticalPoints critical;
  std::vector<PointReport> points;
  std::vector<SegmentNesting> nesting;
  std::optional<IntersectionReport> double_points;
  std::vector<IncrevolSample> increvol;
  bool operator==(const AnalysisReport&) const = default;
};

// JSON has no infinities: they travel as the strings "inf" and "-inf".

inline json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double as_num(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    fail(ErrorCode::ParseError, "expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

inline json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline std::vector<double> as_nums(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(as_num(x));
  return v;
}

inline void to_json(json& j, const Vec2& v) { j = json::array({num(v.x), num(v.y)}); }
inline void from_json(const json& j, Vec2& v) { v = {as_num(j.at(0)), as_num(j.at(1))}; }

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> as_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

inline void to_json(json& j, const ErrorInfo& e) { j = {{"code", e.code}, {"message", e.message}}; }
inline void from_json(const json& j, ErrorInfo& e) {
  e.code = j.at("code").get<std::string>();
  e.message = j.at("message").get<std::string>();
}

inline void to_json(json& j, const ScaleWindow& w) { j = json::array({num(w.h_min), num(w.h_max)}); }
inline void from_json(const json& j, ScaleWindow& w) { w = {as_num(j.at(0)), as_num(j.at(1))}; }

inline void to_json(json& j, const RegularityEstimate& e) {
  j = {{"s1", num(e.s1)},         {"m_minus", num(e.m_minus)}, {"m_plus", num(e.m_plus)},
       {"holder_alpha", num(e.holder_alpha)}, {"fit_r2", num(e.fit_r2)}, {"scale_window", e.window},
       {"scales_used", e.scales_used}, {"flat", e.flat}, {"reliable", e.reliable()}};
}
inline void from_json(const json& j, RegularityEstimate& e) {
  e.s1 = as_num(j.at("s1"));
  e.m_minus = as_num(j.at("m_minus"));
  e.m_plus = as_num(j.at("m_plus"));
  e.holder_alpha = as_num(j.at("holder_alpha"));
  e.fit_r2 = as_num(j.at("fit_r2"));
  e.window = j.at("scale_window").get<ScaleWindow>();
  e.scales_used = j.at("scales_used").get<std::size_t>();
  e.flat = j.at("flat").get<bool>();
}

inline void to_json(json& j, const HolderEstimate& e) {
  j = {{"s1", num(e.s1)}, {"alpha", num(e.alpha)}, {"fit_r2", num(e.fit_r2)}, {"scales_used", e.scales_used}};
}
inline void from_json(const json& j, HolderEstimate& e) {
  e.s1 = as_num(j.at("s1"));
  e.alpha = as_num(j.at("alpha"));
  e.fit_r2 = as_num(j.at("fit_r2"));
  e.scales_used = j.at("scales_used").get<std::size_t>();
}

inline void to_json(json& j, const LocalFrame& f) {
  j = {{"origin", f.origin}, {"ex", f.ex}, {"ey", f.ey}, {"flipped", f.flipped}};
}
inline void from_json(const json& j, LocalFrame& f) {
  f.origin = j.at("origin").get<Vec2>();
  f.ex = j.at("ex").get<Vec2>();
  f.ey = j.at("ey").get<Vec2>();
  f.flipped = j.at("flipped").get<bool>();
}

inline void to_json(json& j, const GraphBranch& b) {
  j = {{"side", b.side}, {"s", nums(b.s)}, {"x", nums(b.x)}, {"y", nums(b.y)}};
}
inline void from_json(const json& j, GraphBranch& b) {
  b.side = j.at("side").get<int>();
  b.s = as_nums(j.at("s"));
  b.x = as_nums(j.at("x"));
  b.y = as_nums(j.at("y"));
}

inline void to_json(json& j, const LocalFrameGraph& g) {
  j = {{"s1", num(g.s1)}, {"frame", g.frame}, {"branches", g.branches}, {"monotone", g.monotone}};
}
inline void from_json(const json& j, LocalFrameGraph& g) {
  g.s1 = as_num(j.at("s1"));
  g.frame = j.at("frame").get<LocalFrame>();
  g.branches = j.at("branches").get<std::array<GraphBranch, 2>>();
  g.monotone = j.at("monotone").get<bool>();
}

inline PointClass point_class_from(const std::string& s) {
  for (PointClass c : {PointClass::regular_point, PointClass::c1_1overm_point, PointClass::cusp}) {
    if (to_string(c) == s) return c;
  }
  fail(ErrorCode::ParseError, "unknown classification '" + s + "'");
}

inline void to_json(json& j, const CuspReport& r) {
  json exps = nullptr;
  if (r.branch_exponents) exps = json::array({num((*r.branch_exponents)[0]), num((*r.branch_exponents)[1])});
  j = {{"s1", num(r.s1)},
       {"order", r.order},
       {"order_m", r.order_m},
       {"order_confident", r.order_confident},
       {"parity", r.even ? "even" : "odd"},
       {"classification", to_string(r.classification)},
       {"tangent_holder", r.tangent_holder},
       {"branch_exponents", exps},
       {"branch_fit_r2", json::array({num(r.branch_fit_r2[0]), num(r.branch_fit_r2[1])})},
       {"branch_signs", r.branch_signs},
       {"min_branch_value", num(r.min_branch_value)},
       {"graph", r.graph}};
}
inline void from_json(const json& j, CuspReport& r) {
  r.s1 = as_num(j.at("s1"));
  r.order = j.at("order").get<RegularityEstimate>();
  r.order_m = j.at("order_m").get<int>();
  r.order_confident = j.at("order_confident").get<bool>();
  r.even = j.at("parity").get<std::string>() == "even";
  r.classification = point_class_from(j.at("classification").get<std::string>());
  r.tangent_holder = j.at("tangent_holder").get<HolderEstimate>();
  if (j.at("branch_exponents").is_null()) {
    r.branch_exponents.reset();
  } else {
    r.branch_exponents = std::array{as_num(j.at("branch_exponents").at(0)), as_num(j.at("branch_exponents").at(1))};
  }
  r.branch_fit_r2 = {as_num(j.at("branch_fit_r2").at(0)), as_num(j.at("branch_fit_r2").at(1))};
  r.branch_signs = j.at("branch_signs").get<std::array<int, 2>>();
  r.min_branch_value = as_num(j.at("min_branch_value"));
  r.graph = j.at("graph").get<LocalFrameGraph>();
}

inline void to_json(json& j, const CriticalPoints& c) {
  json plateaus = json::array();
  for (const auto& [p, q] : c.plateaus) plateaus.push_back(json::array({num(p), num(q)}));
  j = {{"extrema", nums(c.extrema)}, {"inflections", nums(c.inflections)}, {"plateaus", plateaus}};
}
inline void from_json(const json& j, CriticalPoints& c) {
  c.extrema = as_nums(j.at("extrema"));
  c.inflections = as_nums(j.at("inflections"));
  c.plateaus.clear();
  for (const auto& p : j.at("plateaus")) c.plateaus.emplace_back(as_num(p.at(0)), as_num(p.at(1)));
}

inline void to_json(json& j, const NestingResult& n) {
  j = {{"nested", n.nested},           {"worst_margin", num(n.worst_margin)}, {"worst_sa", num(n.worst_sa)},
       {"worst_sb", num(n.worst_sb)}, {"pairs", n.pairs},                    {"degenerate", n.degenerate}};
}
inline void from_json(const json& j, NestingResult& n) {
  n.nested = j.at("nested").get<bool>();
  n.worst_margin = as_num(j.at("worst_margin"));
  n.worst_sa = as_num(j.at("worst_sa"));
  n.worst_sb = as_num(j.at("worst_sb"));
  n.pairs = j.at("pairs").get<std::size_t>();
  n.degenerate = j.at("degenerate").get<bool>();
}

inline void to_json(json& j, const Crossing& c) {
  j = {{"s_i", num(c.s_i)},
       {"s_j", num(c.s_j)},
       {"point", c.point},
       {"residual", num(c.residual)},
       {"polyline_point", c.polyline_point},
       {"segment_residual", num(c.segment_residual)}};
}
inline void from_json(const json& j, Crossing& c) {
  c.s_i = as_num(j.at("s_i"));
  c.s_j = as_num(j.at("s_j"));
  c.point = j.at("point").get<Vec2>();
  c.residual = as_num(j.at("residual"));
  c.polyline_point = j.at("polyline_point").get<Vec2>();
  c.segment_residual = as_num(j.at("segment_residual"));
}

inline void to_json(json& j, const IntersectionReport& r) {
  j = {{"separation", num(r.separation)}, {"crossings", r.crossings}};
}
inline void from_json(const json& j, IntersectionReport& r) {
  r.separation = as_num(j.at("separation"));
  r.crossings = j.at("crossings").get<std::vector<Crossing>>();
}

inline void to_json(json& j, const PointReport& p) {
  j = {{"s1", num(p.s1)}, {"kind", p.kind}, {"order", opt(p.order)}, {"cusp", opt(p.cusp)}, {"error", opt(p.error)}};
}
inline void from_json(const json& j, PointReport& p) {
  p.s1 = as_num(j.at("s1"));
  p.kind = j.at("kind").get<std::string>();
  p.order = as_opt<RegularityEstimate>(j, "order");
  p.cusp = as_opt<CuspReport>(j, "cusp");
  p.error = as_opt<ErrorInfo>(j, "error");
}

inline void to_json(json& j, const SegmentNesting& n) {
  j = {{"range", json::array({num(n.s_begin), num(n.s_end)})}, {"result", opt(n.result)}, {"error", opt(n.error)}};
}
inline void from_json(const json& j, SegmentNesting& n) {
  n.s_begin = as_num(j.at("range").at(0));
  n.s_end = as_num(j.at("range").at(1));
  n.result = as_opt<NestingResult>(j, "result");
  n.error = as_opt<ErrorInfo>(j, "error");
}

inline void to_json(json& j, const IncrevolSample& s) {
  j = {{"s1", num(s.s1)},         {"s2", num(s.s2)}, {"residual", num(s.residual)},
       {"tolerance", num(s.tolerance)}, {"pass", s.pass}, {"error", opt(s.error)}};
}
inline void from_json(const json& j, IncrevolSample& s) {
  s.s1 = as_num(j.at("s1"));
  s.s2 = as_num(j.at("s2"));
  s.residual = as_num(j.at("residual"));
  s.tolerance = as_num(j.at("tolerance"));
  s.pass = j.at("pass").get<bool>();
  s.error = as_opt<ErrorInfo>(j, "error");
}

inline void to_json(json& j, const AnalysisParameters& p) {
  j = {{"kappa_min", num(p.kappa_min)},
       {"sample_density", p.sample_density},
       {"scale_window_relative", json::array({num(p.window_lo), num(p.window_hi)})},
       {"scales", p.scales},
       {"rounding_threshold", num(p.rounding_threshold)},
       {"min_fit_r2", num(p.min_fit_r2)},
       {"critical_zero_threshold", num(p.critical_zero_threshold)},
       {"critical_tolerance", num(p.critical_tolerance)},
       {"nesting_pairs", p.nesting_pairs},
       {"nesting_slack", num(p.nesting_slack)},
       {"increvol_pairs", p.increvol_pairs},
       {"increvol_rel_tol", num(p.increvol_rel_tol)},
       {"separation", num(p.separation)},
       {"seed", p.seed}};
}
inline void from_json(const json& j, AnalysisParameters& p) {
  p.kappa_min = as_num(j.at("kappa_min"));
  p.sample_density = j.at("sample_density").get<int>();
  p.window_lo = as_num(j.at("scale_window_relative").at(0));
  p.window_hi = as_num(j.at("scale_window_relative").at(1));
  p.scales = j.at("scales").get<int>();
  p.rounding_threshold = as_num(j.at("rounding_threshold"));
  p.min_fit_r2 = as_num(j.at("min_fit_r2"));
  p.critical_zero_threshold = as_num(j.at("critical_zero_threshold"));
  p.critical_tolerance = as_num(j.at("critical_tolerance"));
  p.nesting_pairs = j.at("nesting_pairs").get<std::size_t>();
  p.nesting_slack = as_num(j.at("nesting_slack"));
  p.increvol_pairs = j.at("increvol_pairs").get<std::size_t>();
  p.increvol_rel_tol = as_num(j.at("increvol_rel_tol"));
  p.separation = as_num(j.at("separation"));
  p.seed = j.at("seed").get<std::uint64_t>();
}

inline void to_json(json& j, const AnalysisReport& r) {
  json params = json::object();
  for (const auto& [k, v] : r.curve_params) params[k] = num(v);
  j = {{"schema_version", r.schema_version},
       {"tool", {{"name", "evokit"}, {"version", r.tool_version}}},
       {"curve",
        {{"descriptor", r.descriptor},
         {"name", r.curve_name},
         {"params", params},
         {"nodes", r.nodes},
         {"s_range", json::array({num(r.s_begin), num(r.s_end)})}}},
       {"parameters", r.parameters},
       {"skipped", opt(r.skipped)},
       {"critical_points", r.critical},
       {"points", r.points},
       {"nesting", r.nesting},
       {"double_points", opt(r.double_points)},
       {"increvol", r.increvol}};
}
inline void from_json(const json& j, AnalysisReport& r) {
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) {
    fail(ErrorCode::ParseError, "unsupported report schema_version " + std::to_string(r.schema_version));
  }
  r.tool_version = j.at("tool").at("version").get<std::string>();
  const json& c = j.at("curve");
  r.descriptor = c.at("descriptor").get<std::string>();
  r.curve_name = c.at("name").get<std::string>();
  r.curve_params.clear();
  for (const auto& [k, v] : c.at("params").items()) r.curve_params[k] = as_num(v);
  r.nodes = c.at("nodes").get<std::size_t>();
  r.s_begin = as_num(c.at("s_range").at(0));
  r.s_end = as_num(c.at("s_range").at(1));
  r.parameters = j.at("parameters").get<AnalysisParameters>();
  r.skipped = as_opt<std::string>(j, "skipped");
  r.critical = j.at("critical_points").get<CriticalPoints>();
  r.points = j.at("points").get<std::vector<PointReport>>();
  r.nesting = j.at("nesting").get<std::vector<SegmentNesting>>();
  r.double_points = as_opt<IntersectionReport>(j, "double_points");
  r.increvol = j.at("increvol").get<std::vector<IncrevolSample>>();
}

inline std::string emit_report(const AnalysisReport& r) { return json(r).dump(2) + "\n"; }

inline AnalysisReport parse_report(const std::string& text) {
  try {
    return json::parse(text).get<AnalysisReport>();
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
  }
}

}  // namespace evokit
