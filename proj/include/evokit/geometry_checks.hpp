#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "arc_curve.hpp"
#include "critical_points.hpp"
#include "error.hpp"
#include "sampling.hpp"
#include "vec2.hpp"

namespace evokit {

struct OsculatingCircle {
  Vec2 center;
  double radius = 0.0;
  double s = 0.0;
  bool operator==(const OsculatingCircle&) const = default;
};

inline OsculatingCircle osculating_circle(const ArcCurve& ac, double s) {
  const Frame f = eval_frame(ac, s);
  const double r = f.radius();
  return {f.point + r * f.normal, std::abs(r), s};
}

/// Slack of closed-disk inclusion: larger radius minus smaller radius minus
/// the distance between centres. Non-negative iff one disk contains the other.
inline double nesting_margin(const OsculatingCircle& a, const OsculatingCircle& b) {
  return std::abs(a.radius - b.radius) - distance(a.center, b.center);
}

inline constexpr double kNestingSlack = 1e-9;

struct NestingResult {
  bool nested = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_sa = 0.0;
  double worst_sb = 0.0;
  std::size_t pairs = 0;
  bool degenerate = false;  ///< R constant on the range: all disks coincide
  bool operator==(const NestingResult&) const = default;
};

namespace detail {

/// Throws NonMonotonePrecondition unless R is strictly monotone on [s1, s2]
/// or constant on all of it.
inline bool check_monotone_range(const ArcCurve& ac, double s1, double s2) {
  const CriticalPoints cp = critical_points_of_R(ac);
  for (const auto& [p, q] : cp.plateaus) {
    if (p <= s1 && q >= s2) return true;
    if (q > s1 && p < s2) {
      fail(ErrorCode::NonMonotonePrecondition, "R is constant on part of the range, from s=" + std::to_string(p) +
                                                   " to s=" + std::to_string(q));
    }
  }
  for (double e : cp.extrema) {
    if (e > s1 && e < s2) {
      fail(ErrorCode::NonMonotonePrecondition, "R has an extremum at s=" + std::to_string(e) + " inside the range");
    }
  }
  return false;
}

}  // namespace detail

/// Samples n_pairs random pairs in [s1, s2] and checks that their osculating
/// disks are nested, up to kNestingSlack.
inline NestingResult tait_kneser_check(const ArcCurve& ac, double s1, double s2, std::size_t n_pairs,
                                       std::uint64_t seed = kDefaultSeed) {
  if (!(s1 < s2)) fail(ErrorCode::InvalidArgument, "range must satisfy s1 < s2");
  ac.check_range(s1);
  ac.check_range(s2);
  NestingResult out;
  out.degenerate = detail::check_monotone_range(ac, s1, s2);
  for (const auto& [sa, sb] : random_pairs(s1, s2, n_pairs, seed)) {
    const double m = nesting_margin(osculating_circle(ac, sa), osculating_circle(ac, sb));
    if (m < out.worst_margin) {
      out.worst_margin = m;
      out.worst_sa = sa;
      out.worst_sb = sb;
    }
    ++out.pairs;
  }
  out.nested = out.worst_margin >= -kNestingSlack;
  return out;
}

struct Crossing {
  double s_i = 0.0;  ///< smaller arclength of the two passes
  double s_j = 0.0;
  Vec2 point;                  ///< crossing of the curve interpolant
  double residual = 0.0;       ///< |gamma(s_i) - gamma(s_j)| after refinement
  Vec2 polyline_point;         ///< crossing of the two polyline segments
  double segment_residual = 0.0;  ///< largest distance of polyline_point to either segment
  bool operator==(const Crossing&) const = default;
};

struct IntersectionReport {
  std::vector<Crossing> crossings;
  double separation = 0.0;
  bool empty() const { return crossings.empty(); }
  bool operator==(const IntersectionReport&) const = default;
};

struct DoublePointOptions {
  std::optional<double> separation;  ///< default: 10 node spacings
  std::vector<double> exclude;       ///< arclengths whose neighbourhood is ignored
  int exclusion_nodes = 4;
};

namespace detail {

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  const double u = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + u * d);
}

/// Parameters (u, v) in [0,1]^2 where segments ab and cd cross, if they do.
inline std::optional<std::pair<double, double>> segment_crossing(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Vec2 r = b - a, q = d - c;
  const double den = cross(r, q);
  if (den == 0.0) return std::nullopt;
  const double u = cross(c - a, q) / den;
  const double v = cross(c - a, r) / den;
  if (u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0) return std::nullopt;
  return std::pair{u, v};
}

/// Newton on gamma(a) - gamma(b) = 0 over the interpolant.
inline std::pair<double, double> refine_crossing(const ArcCurve& ac, double a, double b) {
  for (int it = 0; it < 40; ++it) {
    const auto ja = ac.position(a), jb = ac.position(b);
    const Vec2 f = ja.value - jb.value;
    if (norm(f) <= 1e-15 * (1.0 + norm(ja.value))) break;
    // Solve a' Ta - b' Tb = -f.
    const double det = cross(ja.d1, -jb.d1);
    if (det == 0.0) break;
    const double da = cross(-f, -jb.d1) / det;
    const double db = cross(ja.d1, -f) / det;
    const double na = std::clamp(a + da, ac.s_begin(), ac.s_end());
    const double nb = std::clamp(b + db, ac.s_begin(), ac.s_end());
    if (na == a && nb == b) break;
    a = na;
    b = nb;
  }
  return {a, b};
}

}  // namespace detail

/// Self-intersections of the node polyline between segments whose arclengths
/// differ by more than the separation, located through a uniform grid over
/// segment bounding boxes and refined on the interpolant.
inline IntersectionReport double_points(const ArcCurve& ac, const DoublePointOptions& opts = {}) {
  const std::size_t n = ac.size();
  if (n < 4) fail(ErrorCode::InvalidArgument, "double point search needs at least 4 nodes");
  const auto s = ac.s();
  const auto p = ac.points();
  const double spacing = ac.length() / static_cast<double>(n - 1);
  IntersectionReport rep;
  rep.separation = opts.separation.value_or(10.0 * spacing);
  if (!(rep.separation > 2.0 * spacing)) {
    fail(ErrorCode::InvalidArgument, "separation must exceed two node spacings");
  }

  double longest = 0.0;
  Vec2 lo = p[0], hi = p[0];
  for (std::size_t i = 0; i < n; ++i) {
    lo = {std::min(lo.x, p[i].x), std::min(lo.y, p[i].y)};
    hi = {std::max(hi.x, p[i].x), std::max(hi.y, p[i].y)};
    if (i + 1 < n) longest = std::max(longest, distance(p[i], p[i + 1]));
  }
  const double cell = std::max({longest, 1e-12 * (1.0 + norm(hi - lo))});
  auto cell_of = [&](double v, double origin) { return static_cast<std::int64_t>(std::floor((v - origin) / cell)); };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  auto key = [](std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint64_t>(cy & 0xffffffff);
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto x0 = cell_of(std::min(p[i].x, p[i + 1].x), lo.x), x1 = cell_of(std::max(p[i].x, p[i + 1].x), lo.x);
    const auto y0 = cell_of(std::min(p[i].y, p[i + 1].y), lo.y), y1 = cell_of(std::max(p[i].y, p[i + 1].y), lo.y);
    for (auto cx = x0; cx <= x1; ++cx) {
      for (auto cy = y0; cy <= y1; ++cy) grid[key(cx, cy)].push_back(i);
    }
  }

  std::set<std::pair<std::size_t, std::size_t>> tested;
  std::vector<Crossing> raw;
  for (const auto& [k, segs] : grid) {
    for (std::size_t a = 0; a < segs.size(); ++a) {
      for (std::size_t b = a + 1; b < segs.size(); ++b) {
        const std::size_t i = std::min(segs[a], segs[b]), j = std::max(segs[a], segs[b]);
        if (s[j] - s[i] <= rep.separation) continue;
        if (!tested.emplace(i, j).second) continue;
        const auto hit = detail::segment_crossing(p[i], p[i + 1], p[j], p[j + 1]);
        if (!hit) continue;
        Crossing c;
        c.polyline_point = p[i] + hit->first * (p[i + 1] - p[i]);
        c.segment_residual = std::max(detail::point_segment_distance(c.polyline_point, p[i], p[i + 1]),
                                      detail::point_segment_distance(c.polyline_point, p[j], p[j + 1]));
        const auto [si, sj] = detail::refine_crossing(ac, s[i] + hit->first * (s[i + 1] - s[i]),
                                                      s[j] + hit->second * (s[j + 1] - s[j]));
        c.s_i = std::min(si, sj);
        c.s_j = std::max(si, sj);
        const Vec2 gi = ac.point(c.s_i), gj = ac.point(c.s_j);
        c.point = 0.5 * (gi + gj);
        c.residual = distance(gi, gj);
        raw.push_back(c);
      }
    }
  }
  const double exclusion = opts.exclusion_nodes * spacing;
  // On a closed curve the two ends are one point: s_end is identified with
  // s_begin, and the closing point itself is not a crossing.
  const bool closed = distance(p.front(), p.back()) <= 1e-9 * (1.0 + norm(hi - lo));
  auto wrap = [&](double v) {
    return closed && ac.s_end() - v <= 2.0 * spacing ? std::max(ac.s_begin(), v - ac.length()) : v;
  };
  for (Crossing& c : raw) {
    const double a = wrap(c.s_i), b = wrap(c.s_j);
    c.s_i = std::min(a, b);
    c.s_j = std::max(a, b);
  }
  std::sort(raw.begin(), raw.end(), [](const Crossing& x, const Crossing& y) {
    return x.s_i != y.s_i ? x.s_i < y.s_i : x.s_j < y.s_j;
  });
  for (const Crossing& c : raw) {
    if (c.s_j - c.s_i <= rep.separation) continue;
    const bool excluded = std::any_of(opts.exclude.begin(), opts.exclude.end(), [&](double e) {
      return std::abs(c.s_i - e) <= exclusion || std::abs(c.s_j - e) <= exclusion;
    });
    if (excluded) continue;
    // A crossing through a node shows up on neighbouring segment pairs.
    const bool duplicate = std::any_of(rep.crossings.begin(), rep.crossings.end(), [&](const Crossing& d) {
      return std::abs(d.s_i - c.s_i) <= 2.0 * spacing && std::abs(d.s_j - c.s_j) <= 2.0 * spacing;
    });
    if (!duplicate) rep.crossings.push_back(c);
  }
  return rep;
}

enum class Simplicity { simple, not_simple, not_applicable };

constexpr std::string_view to_string(Simplicity v) {
  switch (v) {
    case Simplicity::simple: return "simple";
    case Simplicity::not_simple: return "not_simple";
    case Simplicity::not_applicable: return "not_applicable";
  }
  return "unknown";
}

struct SimplicityReport {
  Simplicity verdict = Simplicity::not_applicable;
  std::string reason;
  CriticalPoints critical;
  std::optional<IntersectionReport> intersections;
  std::optional<NestingResult> nesting;
};

/// With R strictly monotone the curve has no double point and its osculating
/// circles are nested; checks both on the full range.
inline SimplicityReport simplicity_under_monotone_curvature(const ArcCurve& ac, std::size_t n_pairs = 200,
                                                           std::uint64_t seed = kDefaultSeed) {
  SimplicityReport rep;
  rep.critical = critical_points_of_R(ac);
  if (!rep.critical.monotone()) {
    rep.reason = "R is not strictly monotone";
    return rep;
  }
  rep.intersections = double_points(ac);
  rep.nesting = tait_kneser_check(ac, ac.s_begin(), ac.s_end(), n_pairs, seed);
  const bool ok = rep.intersections->empty() && rep.nesting->nested;
  rep.verdict = ok ? Simplicity::simple : Simplicity::not_simple;
  if (!rep.intersections->empty()) {
    rep.reason = std::to_string(rep.intersections->crossings.size()) + " double point(s) despite monotone R";
  } else if (!rep.nesting->nested) {
    rep.reason = "osculating disks fail to nest";
  }
  return rep;
}

}  // namespace evokit
