#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "arc_curve.hpp"
#include "catalog.hpp"
#include "critical_points.hpp"
#include "curve_core.hpp"
#include "error.hpp"
#include "evolute.hpp"
#include "geometry_checks.hpp"
#include "quadrature.hpp"
#include "regularity.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "svg.hpp"

namespace evokit {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitParse = 2,
  kExitGate = 3,
  kExitInternal = 4,
};

struct CurveInput {
  std::string descriptor;  ///< catalog descriptor, or empty when csv is set
  std::string csv;         ///< path of a `t,x,y` file
  double kappa_min = kDefaultKappaMin;
  std::optional<int> density;
};

struct LoadedCurve {
  std::string label;
  std::string name;
  std::map<std::string, double> params;
  int density = 0;
  std::shared_ptr<const ArcCurve> arc;
};

inline CurveSource load_source(const CurveInput& in) {
  if (in.csv.empty()) return catalog::make_curve(in.descriptor);
  std::ifstream file(in.csv, std::ios::binary);
  if (!file) fail(ErrorCode::ParseError, "cannot open '" + in.csv + "'");
  return catalog::read_curve_csv(file, in.density.value_or(128));
}

/// Parses the input (ParseError) and builds its arclength form (curve gates).
inline LoadedCurve load_curve(const CurveInput& in) {
  const CurveSource src = load_source(in);
  LoadedCurve out;
  out.label = in.csv.empty() ? in.descriptor : in.csv;
  std::visit(
      [&](const auto& spec) {
        out.name = spec.name;
        out.params = spec.params;
        out.density = in.density.value_or(spec.sample_density);
      },
      src);
  out.arc = std::make_shared<const ArcCurve>(build_arc_curve(src, ReparamOptions{in.kappa_min, out.density}));
  return out;
}

/// R constant along the whole curve.
inline bool constant_radius(const ArcCurve& ac, const CriticalPoints& cp) {
  return std::any_of(cp.plateaus.begin(), cp.plateaus.end(),
                     [&](const auto& p) { return p.first <= ac.s_begin() && p.second >= ac.s_end(); });
}

inline constexpr const char* kConstantRadiusMessage = "constant radius of curvature: evolute degenerates to a point";

/// Runs a command body, mapping failures onto the exit-code contract.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ParseError ? kExitParse : kExitGate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
}

inline std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV with header `header` ("s,x,y" or "t,x,y").
inline std::string xy_csv(const std::string& header, std::span<const double> keys, std::span<const Vec2> points) {
  std::string out = header + "\n";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out += csv_number(keys[i]) + "," + csv_number(points[i].x) + "," + csv_number(points[i].y) + "\n";
  }
  return out;
}

struct OutputOptions {
  std::filesystem::path dir = ".";
  std::string prefix;  ///< defaults to the curve name
};

// evolute ------------------------------------------------------------------

inline int cmd_evolute(const CurveInput& in, const OutputOptions& out_opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedCurve curve = load_curve(in);
    const ArcCurve& ac = *curve.arc;
    const CriticalPoints cp = critical_points_of_R(ac);
    if (constant_radius(ac, cp)) fail(ErrorCode::DegenerateCurve, kConstantRadiusMessage);
    const EvoluteCurve ev = evolute(curve.arc);
    const std::string stem = out_opts.prefix.empty() ? curve.name : out_opts.prefix;
    const auto parent_csv = out_opts.dir / (stem + "_parent.csv");
    const auto evolute_csv = out_opts.dir / (stem + "_evolute.csv");
    const auto svg_path = out_opts.dir / (stem + "_evolute.svg");
    write_file(parent_csv, xy_csv("s,x,y", ac.s(), ac.points()));
    write_file(evolute_csv, xy_csv("s,x,y", ac.s(), ev.points));

    FigureSpec fig;
    fig.title = "evolute of " + curve.label;
    fig.curves.push_back({{ac.points().begin(), ac.points().end()}, "#1f77b4", 1.5, "", "curve"});
    fig.curves.push_back({ev.points, "#ff7f0e", 1.5, "", "evolute"});
    for (double e : cp.extrema) fig.markers.push_back({ev.point_at(e), MarkerKind::cusp, "cusp"});
    write_file(svg_path, render_svg(fig));
    out << "nodes " << ac.size() << "\n";
    out << "cusps " << cp.extrema.size() << "\n";
    out << "wrote " << parent_csv.string() << "\n";
    out << "wrote " << evolute_csv.string() << "\n";
    out << "wrote " << svg_path.string() << "\n";
    return kExitOk;
  });
}

// involute -----------------------------------------------------------------

inline int cmd_involute(const CurveInput& in, const InvoluteParams& params, const OutputOptions& out_opts,
                        std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedCurve curve = load_curve(in);
    const ArcCurve& ac = *curve.arc;
    out << "gate c outside [" << csv_number(ac.s_begin()) << ", " << csv_number(ac.s_end()) << "]: "
        << ((params.c < ac.s_begin() || params.c > ac.s_end()) ? "pass" : "fail") << "\n";
    const ArcCurve inv = involute(ac, params);
    double weakest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ac.size(); ++i) {
      weakest = std::min(weakest, std::abs(params.c - ac.s()[i]) * std::abs(ac.kappa()[i]));
    }
    out << "gate regular involute: pass, min |c - s| |kappa| = " << csv_number(weakest) << "\n";
    const std::string stem = out_opts.prefix.empty() ? curve.name : out_opts.prefix;
    const auto csv_path = out_opts.dir / (stem + "_involute.csv");
    const auto svg_path = out_opts.dir / (stem + "_involute.svg");
    write_file(csv_path, xy_csv("t,x,y", inv.param(), inv.points()));
    FigureSpec fig;
    fig.title = "involute of " + curve.label;
    fig.curves.push_back({{ac.points().begin(), ac.points().end()}, "#1f77b4", 1.5, "", "curve"});
    fig.curves.push_back({{inv.points().begin(), inv.points().end()}, "#000000", 1.5, "", "involute"});
    write_file(svg_path, render_svg(fig));
    out << "nodes " << inv.size() << "\n";
    out << "wrote " << csv_path.string() << "\n";
    out << "wrote " << svg_path.string() << "\n";
    return kExitOk;
  });
}

// analyze ------------------------------------------------------------------

struct AnalyzeOptions {
  CurveInput curve;
  AnalysisParameters params;
};

/// Splits [s_begin, s_end] at the extrema and plateaus of R.
inline std::vector<std::pair<double, double>> monotone_segments(const ArcCurve& ac, const CriticalPoints& cp) {
  if (constant_radius(ac, cp)) return {{ac.s_begin(), ac.s_end()}};
  std::vector<std::pair<double, double>> cuts;  // removed intervals
  const double pad = 1e-9 * ac.length();
  for (double e : cp.extrema) cuts.emplace_back(e - pad, e + pad);
  for (const auto& [p, q] : cp.plateaus) cuts.emplace_back(p - pad, q + pad);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> out;
  double start = ac.s_begin();
  const double min_len = 4.0 * ac.length() / static_cast<double>(ac.size() - 1);
  for (const auto& [p, q] : cuts) {
    if (p - start > min_len) out.emplace_back(start, p);
    start = std::max(start, q);
  }
  if (ac.s_end() - start > min_len) out.emplace_back(start, ac.s_end());
  return out;
}

inline AnalysisReport run_analysis(const AnalyzeOptions& opts) {
  const LoadedCurve curve = load_curve(opts.curve);
  const ArcCurve& ac = *curve.arc;
  AnalysisReport r;
  r.descriptor = curve.label;
  r.curve_name = curve.name;
  r.curve_params = curve.params;
  r.nodes = ac.size();
  r.s_begin = ac.s_begin();
  r.s_end = ac.s_end();
  r.parameters = opts.params;
  r.parameters.kappa_min = opts.curve.kappa_min;
  r.parameters.sample_density = curve.density;
  const AnalysisParameters& p = r.parameters;

  r.critical = critical_points_of_R(ac, CriticalPointOptions{p.critical_zero_threshold, p.critical_tolerance});
  std::optional<EvoluteCurve> ev;
  if (constant_radius(ac, r.critical)) {
    r.skipped = kConstantRadiusMessage;
  } else {
    try {
      ev = evolute(curve.arc, CriticalPointOptions{p.critical_zero_threshold, p.critical_tolerance});
    } catch (const GeometryError& e) {
      r.skipped = std::string(to_string(e.code())) + ": " + e.what();
    }
  }

  if (ev) {
    std::vector<PointReport> points;
    for (double s : r.critical.extrema) points.push_back({s, "extremum", {}, {}, {}});
    for (double s : r.critical.inflections) points.push_back({s, "inflection", {}, {}, {}});
    for (const auto& [lo, hi] : r.critical.plateaus) points.push_back({0.5 * (lo + hi), "plateau", {}, {}, {}});
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.s1 < b.s1; });
    for (PointReport& pt : points) {
      try {
        const ScaleWindow w = default_window(ac, pt.s1, p.window_lo, p.window_hi);
        pt.order = radius_order(ac, pt.s1, w, VanishingOrderOptions{p.scales});
        // Plateaus carry no exponent to classify; the order estimate is the diagnostic.
        if (pt.kind == "plateau") continue;
        ClassifyOptions co;
        co.window = w;
        co.scales = p.scales;
        co.rounding_threshold = p.rounding_threshold;
        co.min_fit_r2 = p.min_fit_r2;
        pt.cusp = classify_cusp(*ev, pt.s1, co);
      } catch (const GeometryError& e) {
        pt.error = error_info(e);
      }
    }
    r.points = std::move(points);
  }

  for (const auto& [a, b] : monotone_segments(ac, r.critical)) {
    SegmentNesting seg{a, b, {}, {}};
    try {
      seg.result = tait_kneser_check(ac, a, b, p.nesting_pairs, p.seed);
      seg.result->nested = seg.result->worst_margin >= -p.nesting_slack;
    } catch (const GeometryError& e) {
      seg.error = error_info(e);
    }
    r.nesting.push_back(seg);
  }

  DoublePointOptions dpo;
  if (p.separation > 0.0) dpo.separation = p.separation;
  r.double_points = double_points(ac, dpo);

  if (ev) {
    for (const auto& [a, b] : random_pairs(ac.s_begin(), ac.s_end(), p.increvol_pairs, p.seed + 1)) {
      IncrevolSample smp{a, b, 0.0, 0.0, false, {}};
      try {
        smp.residual = verify_increvol_identity(ac, a, b);
        smp.tolerance = p.increvol_rel_tol * (1.0 + std::abs(ac.radius_at(b) - ac.radius_at(a)));
        smp.pass = smp.residual <= smp.tolerance;
      } catch (const GeometryError& e) {
        smp.error = error_info(e);
      }
      r.increvol.push_back(smp);
    }
  }
  return r;
}

inline int cmd_analyze(const AnalyzeOptions& opts, const std::string& output, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string text = emit_report(run_analysis(opts));
    if (output.empty() || output == "-") {
      out << text;
    } else {
      write_file(output, text);
      out << "wrote " << output << "\n";
    }
    return kExitOk;
  });
}

// figure 1 -----------------------------------------------------------------

/// Arclength of the limacon r = 1 + 2 cos(theta) from -pi to theta.
inline double limacon_arclength(double theta) {
  return adaptive_simpson([](double u) { return std::sqrt(5.0 + 4.0 * std::cos(u)); }, -std::numbers::pi, theta,
                          1e-13);
}

/// Involute of the limacon in closed form, with the arclength by quadrature.
inline Vec2 limacon_involute_explicit(double theta) {
  const double co = std::cos(theta), si = std::sin(theta);
  const double r = 1.0 + 2.0 * co;
  const double w = limacon_arclength(theta) / std::sqrt(5.0 + 4.0 * co);
  return Vec2{co * r, si * r} + w * Vec2{si * (1.0 + 4.0 * co), -4.0 * co * co - co + 2.0};
}

struct Figure1 {
  FigureSpec figure;
  double max_deviation = 0.0;  ///< explicit vs generic involute
  IntersectionReport limacon_crossings;
  IntersectionReport involute_crossings;
  std::array<double, 2> crossing_params{};  ///< theta at the double point
  Vec2 limacon_at_zero;
};

/// The limacon on (-3pi/4, 3pi/4) with the involute that has it as evolute,
/// computed from the closed form and by the generic involute operation.
inline Figure1 build_figure1(int density = 128, int samples = 601) {
  const double t0 = -0.75 * std::numbers::pi, t1 = 0.75 * std::numbers::pi;
  CurveSpec spec = catalog::limacon(t0, t1);
  spec.sample_density = density;
  spec.arclength_origin = limacon_arclength(t0);
  const auto lim = std::make_shared<const ArcCurve>(reparametrize_by_arclength(spec));
  const ArcCurve inv = involute(*lim, InvoluteParams{0.0, 1, density});

  Figure1 f;
  f.limacon_crossings = double_points(*lim);
  f.involute_crossings = double_points(inv);
  if (f.limacon_crossings.crossings.size() == 1) {
    const Crossing& c = f.limacon_crossings.crossings.front();
    f.crossing_params = {lim->param_at(c.s_i), lim->param_at(c.s_j)};
  }
  f.limacon_at_zero = lim->point(lim->s_of_param(0.0));

  Polyline curve{{}, "#1f77b4", 2.0, "", "limacon"};
  Polyline explicit_inv{{}, "#000000", 2.0, "", "involute (closed form)"};
  Polyline generic_inv{{}, "#ff7f0e", 1.5, "8,6", "involute (generic)"};
  for (int k = 0; k < samples; ++k) {
    const double theta = t0 + (t1 - t0) * k / (samples - 1);
    const double s = lim->s_of_param(theta);
    curve.points.push_back(lim->point(s));
    const Vec2 a = limacon_involute_explicit(theta);
    const Vec2 b = inv.point(inv.s_of_param(s));
    f.max_deviation = std::max(f.max_deviation, distance(a, b));
    explicit_inv.points.push_back(a);
    generic_inv.points.push_back(b);
  }
  f.figure.title = "limacon r = 1 + 2 cos(theta) and its involute";
  f.figure.curves = {curve, explicit_inv, generic_inv};
  for (const Crossing& c : f.limacon_crossings.crossings) {
    f.figure.markers.push_back({c.point, MarkerKind::double_point, "double point"});
  }
  return f;
}

inline int cmd_figure1(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Figure1 f = build_figure1();
    const auto& crossings = f.limacon_crossings.crossings;
    if (crossings.size() != 1 || norm(crossings.front().point) > 1e-6) {
      err << "error: expected exactly one limacon double point at the origin, found " << crossings.size() << "\n";
      return static_cast<int>(kExitInternal);
    }
    if (!(f.max_deviation <= 1e-6)) {
      err << "error: closed-form and generic involutes differ by " << csv_number(f.max_deviation) << "\n";
      return static_cast<int>(kExitInternal);
    }
    write_file(path, render_svg(f.figure));
    out << "double point " << csv_number(crossings.front().point.x) << " " << csv_number(crossings.front().point.y)
        << " at theta " << csv_number(f.crossing_params[0]) << " " << csv_number(f.crossing_params[1]) << "\n";
    out << "involute deviation " << csv_number(f.max_deviation) << "\n";
    out << "wrote " << path.string() << "\n";
    return static_cast<int>(kExitOk);
  });
}

// checks -------------------------------------------------------------------

inline int cmd_checks(const CurveInput& in, std::size_t n_pairs, std::uint64_t seed, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    const LoadedCurve curve = load_curve(in);
    const SimplicityReport rep = simplicity_under_monotone_curvature(*curve.arc, n_pairs, seed);
    json j = {{"curve", curve.label},
              {"verdict", to_string(rep.verdict)},
              {"reason", rep.reason},
              {"critical_points", rep.critical},
              {"double_points", opt(rep.intersections)},
              {"nesting", opt(rep.nesting)}};
    out << j.dump(2) << "\n";
    return rep.verdict == Simplicity::not_simple ? kExitCheckFailed : kExitOk;
  });
}

}  // namespace evokit
