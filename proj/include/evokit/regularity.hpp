#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arc_curve.hpp"
#include "critical_points.hpp"
#include "curve_spec.hpp"
#include "error.hpp"
#include "evolute.hpp"
#include "vec2.hpp"

namespace evokit {

/// Orders above this are reported as infinite ("infinity cap").
inline constexpr double kOrderCap = 50.0;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct ScaleWindow {
  double h_min = 0.0;
  double h_max = 0.0;
  bool operator==(const ScaleWindow&) const = default;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t count = 0;
};

/// Ordinary least squares y = slope * x + intercept.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  LinearFit fit;
  fit.count = x.size();
  if (x.size() < 2) return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= x.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

/// `count` scales spaced geometrically from h_min to h_max inclusive.
inline std::vector<double> geometric_scales(ScaleWindow w, int count) {
  std::vector<double> h(count);
  const double ratio = std::log(w.h_max / w.h_min);
  for (int i = 0; i < count; ++i) h[i] = w.h_min * std::exp(ratio * i / (count - 1));
  return h;
}

/// Estimated vanishing orders of f - f(s1) at s1, with fit diagnostics.
struct RegularityEstimate {
  double s1 = 0.0;
  double m_minus = 0.0;       ///< from the upper envelope of |f(s1 +- h) - f(s1)|
  double m_plus = 0.0;        ///< from the lower envelope
  double holder_alpha = 0.0;  ///< pointwise Hoelder exponent of f, min(1, m_minus)
  double fit_r2 = 0.0;
  ScaleWindow window;
  std::size_t scales_used = 0;
  bool flat = false;  ///< every difference fell below the flatness threshold

  bool capped() const { return std::isinf(m_minus); }
  bool reliable() const { return fit_r2 >= 0.99; }
  bool operator==(const RegularityEstimate&) const = default;
};

struct VanishingOrderOptions {
  int scales = 48;
  double flat_threshold = 1e-14;  ///< relative to max(1, |f(s1)|)
  double fit_floor = 1e-11;       ///< differences below this (relative) are not fitted
};

namespace detail {

struct Envelope {
  std::vector<double> log_h;
  std::vector<double> log_d;
};

/// Per dyadic bin of scales: largest (upper) or smallest (lower) difference.
inline Envelope dyadic_envelope(const std::vector<double>& h, const std::vector<double>& d, double h_min, bool upper) {
  std::map<int, std::pair<double, double>> bins;  // bin -> (h, d)
  for (std::size_t i = 0; i < h.size(); ++i) {
    const int bin = static_cast<int>(std::floor(std::log2(h[i] / h_min) + 1e-9));
    auto it = bins.find(bin);
    if (it == bins.end()) {
      bins.emplace(bin, std::pair{h[i], d[i]});
    } else if (upper ? d[i] > it->second.second : d[i] < it->second.second) {
      it->second = {h[i], d[i]};
    }
  }
  Envelope e;
  for (const auto& [bin, hd] : bins) {
    e.log_h.push_back(std::log(hd.first));
    e.log_d.push_back(std::log(hd.second));
  }
  return e;
}

}  // namespace detail

/// Vanishing order of f at s1 from log-log least squares of
/// |f(s1 +- h) - f(s1)| against h over a geometric grid of scales. The upper
/// envelope (largest difference per dyadic bin) gives m_minus, the lower
/// envelope m_plus. Slopes above kOrderCap are reported as infinite.
inline RegularityEstimate vanishing_order(const ScalarMap& f, double s1, ScaleWindow window,
                                          const VanishingOrderOptions& opts = {}) {
  if (!(window.h_min > 0.0 && window.h_max > window.h_min)) {
    fail(ErrorCode::InvalidArgument, "scale window must satisfy 0 < h_min < h_max");
  }
  if (window.h_max < 99.999 * window.h_min) fail(ErrorCode::InvalidArgument, "scale window spans under two decades");
  if (opts.scales < 40) fail(ErrorCode::InvalidArgument, "at least 40 scales are required");

  RegularityEstimate est;
  est.s1 = s1;
  est.window = window;
  const double f0 = f(s1);
  const double scale = std::max(1.0, std::abs(f0));
  const std::vector<double> hs = geometric_scales(window, opts.scales);
  std::vector<double> d_plus(hs.size()), d_minus(hs.size());
  bool any_above_flat = false;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    d_plus[i] = std::abs(f(s1 + hs[i]) - f0);
    d_minus[i] = std::abs(f(s1 - hs[i]) - f0);
    any_above_flat = any_above_flat || std::max(d_plus[i], d_minus[i]) >= opts.flat_threshold * scale;
  }
  if (!any_above_flat) {
    est.m_minus = est.m_plus = kInfinity;
    est.holder_alpha = 1.0;
    est.fit_r2 = 1.0;
    est.flat = true;
    return est;
  }

  for (double floor : {opts.fit_floor * scale, opts.flat_threshold * scale}) {
    std::vector<double> hu, du, hl, dl;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const double hi = std::max(d_plus[i], d_minus[i]);
      const double lo = std::min(d_plus[i], d_minus[i]);
      if (hi >= floor) {
        hu.push_back(hs[i]);
        du.push_back(hi);
      }
      if (lo >= floor) {
        hl.push_back(hs[i]);
        dl.push_back(lo);
      }
    }
    const auto upper = detail::dyadic_envelope(hu, du, window.h_min, true);
    if (upper.log_h.size() < 3) continue;
    const LinearFit fu = fit_line(upper.log_h, upper.log_d);
    est.m_minus = fu.slope > kOrderCap ? kInfinity : std::max(0.0, fu.slope);
    est.fit_r2 = fu.r2;
    est.scales_used = hu.size();
    const auto lower = detail::dyadic_envelope(hl, dl, window.h_min, false);
    if (lower.log_h.size() >= 3) {
      const LinearFit fl = fit_line(lower.log_h, lower.log_d);
      est.m_plus = fl.slope > kOrderCap ? kInfinity : std::max(0.0, fl.slope);
      est.fit_r2 = std::min(est.fit_r2, fl.r2);
    } else {
      est.m_plus = kInfinity;
    }
    // The two envelopes can cross by rounding; the definitions order them.
    est.m_plus = std::max(est.m_plus, est.m_minus);
    est.holder_alpha = std::min(1.0, est.m_minus);
    return est;
  }
  // Differences exist but too few scales resolve them: steeper than any power.
  est.m_minus = est.m_plus = kInfinity;
  est.holder_alpha = 1.0;
  est.fit_r2 = 0.0;
  return est;
}

/// Scale window around s1: [lo, hi] times the arclength range (default
/// [1e-4, 1e-1]), shrunk so that s1 +- h_max stays on the curve.
inline ScaleWindow default_window(const ArcCurve& ac, double s1, double lo = 1e-4, double hi = 1e-1) {
  const double range = ac.length();
  const double room = std::min(s1 - ac.s_begin(), ac.s_end() - s1);
  const double h_max = std::min(hi * range, room);
  if (!(h_max > 0.0)) fail(ErrorCode::OutOfRange, "s1 lies on the end of the curve");
  return {std::min(lo * range, h_max / 100.0), h_max};
}

/// Vanishing order of the radius of curvature at s1.
inline RegularityEstimate radius_order(const ArcCurve& ac, double s1, std::optional<ScaleWindow> window = {},
                                       const VanishingOrderOptions& opts = {}) {
  return vanishing_order([&ac](double s) { return ac.radius_at(s); }, s1, window.value_or(default_window(ac, s1)),
                         opts);
}

/// Hoelder exponent of the evolute unit tangent as a function of evolute arclength.
struct HolderEstimate {
  double s1 = 0.0;
  double alpha = 0.0;
  double fit_r2 = 0.0;
  std::size_t scales_used = 0;
  bool operator==(const HolderEstimate&) const = default;
};

/// Measures alpha from |T(s1 + k h) - T(s1 - k h)| against the evolute
/// arclength between the two nodes, over node offsets k drawn from the
/// geometric scale grid. s1 is snapped to the nearest node. The arclength is
/// summed from segment lengths, which stay resolvable where s_tilde itself
/// has stopped changing in floating point.
inline HolderEstimate evolute_tangent_holder(const EvoluteCurve& ev, double s1, std::optional<ScaleWindow> window = {},
                                             int scales = 48, double fit_floor = 1e-11) {
  const ArcCurve& ac = *ev.parent;
  const ScaleWindow w = window.value_or(default_window(ac, s1));
  const std::size_t i1 = ac.nearest_node(s1);
  const auto s = ac.s();
  const double spacing = ac.length() / static_cast<double>(ac.size() - 1);
  std::vector<std::size_t> offsets;
  for (double h : geometric_scales(w, scales)) {
    const auto k = static_cast<std::size_t>(std::max(1.0, std::round(h / spacing)));
    if (k > i1 || i1 + k >= ac.size()) continue;
    if (offsets.empty() || offsets.back() != k) offsets.push_back(k);
  }
  std::vector<double> ds_all, dt_all;
  for (std::size_t k : offsets) {
    const Vec2 ta = ev.tangent[i1 - k], tb = ev.tangent[i1 + k];
    if (ta == Vec2{} || tb == Vec2{}) continue;
    const double dt = norm(tb - ta);
    double ds = 0.0;
    for (std::size_t j = i1 - k; j < i1 + k; ++j) ds += ev.segment_length[j];
    if (!(dt > 1e-14) || !(ds > 0.0) || !std::isfinite(std::log(ds))) continue;
    ds_all.push_back(ds);
    dt_all.push_back(dt);
  }
  HolderEstimate est;
  est.s1 = s[i1];
  // Prefer arclengths resolved well above rounding; fall back to every
  // positive one when the evolute is too flat for that.
  std::vector<double> log_ds, log_dt;
  const double floor = fit_floor * std::max(1.0, std::abs(ev.radius[i1]));
  for (double bound : {floor, 0.0}) {
    log_ds.clear();
    log_dt.clear();
    for (std::size_t j = 0; j < ds_all.size(); ++j) {
      if (ds_all[j] < bound) continue;
      log_ds.push_back(std::log(ds_all[j]));
      log_dt.push_back(std::log(dt_all[j]));
    }
    if (log_ds.size() >= 3) break;
  }
  est.scales_used = log_ds.size();
  if (log_ds.size() < 3) return est;
  const LinearFit fit = fit_line(log_ds, log_dt);
  est.alpha = std::clamp(fit.slope, 0.0, 1.0);
  est.fit_r2 = fit.r2;
  return est;
}

/// Coordinates at the evolute point E(s1): x along nu(s1), y along -gamma'(s1);
/// nu is negated when R has a local maximum at s1 so that the graph opens
/// towards +x.
struct LocalFrame {
  Vec2 origin;
  Vec2 ex;
  Vec2 ey;
  bool flipped = false;
  bool operator==(const LocalFrame&) const = default;
};

struct GraphBranch {
  int side = 1;  ///< +1: s > s1, -1: s < s1
  std::vector<double> s;
  std::vector<double> x;
  std::vector<double> y;
  bool operator==(const GraphBranch&) const = default;
};

struct LocalFrameGraph {
  double s1 = 0.0;
  LocalFrame frame;
  std::array<GraphBranch, 2> branches;  ///< [0] is s > s1, [1] is s < s1
  bool monotone = false;                ///< R - R(s1) changes sign across s1
  bool operator==(const LocalFrameGraph&) const = default;
};

/// Evolute near s1 expressed in the local frame, sampled on the geometric
/// scale grid on both sides of s1. Throws NonInjectiveProjection if R is
/// monotone near s1 but the x-projection of the samples is not one-to-one.
inline LocalFrameGraph local_frame_graph(const EvoluteCurve& ev, double s1, std::optional<ScaleWindow> window = {},
                                         int scales = 48) {
  const ArcCurve& ac = *ev.parent;
  const ScaleWindow w = window.value_or(default_window(ac, s1));
  const Frame f1 = eval_frame(ac, s1);
  const double r1 = f1.radius();
  const Vec2 origin = f1.point + r1 * f1.normal;
  const double up = ac.radius_at(s1 + w.h_max) - r1;
  const double down = ac.radius_at(s1 - w.h_max) - r1;

  LocalFrameGraph g;
  g.s1 = s1;
  g.monotone = (up > 0) != (down > 0);
  g.frame.flipped = !g.monotone && up < 0 && down < 0;
  g.frame.origin = origin;
  g.frame.ex = g.frame.flipped ? -f1.normal : f1.normal;
  g.frame.ey = -f1.tangent;
  const std::vector<double> hs = geometric_scales(w, scales);
  for (int b = 0; b < 2; ++b) {
    GraphBranch& br = g.branches[b];
    br.side = b == 0 ? 1 : -1;
    for (double h : hs) {
      const double s = s1 + br.side * h;
      const Vec2 d = ev.point_at(s) - origin;
      br.s.push_back(s);
      br.x.push_back(dot(d, g.frame.ex));
      br.y.push_back(dot(d, g.frame.ey));
    }
  }
  if (g.monotone) {
    // Walk the samples in order of s; resolvable x values must be monotone.
    const double floor = 1e-12 * std::max(1.0, norm(origin));
    std::vector<double> xs;
    for (auto it = g.branches[1].x.rbegin(); it != g.branches[1].x.rend(); ++it) {
      if (std::abs(*it) > floor) xs.push_back(*it);
    }
    for (double x : g.branches[0].x) {
      if (std::abs(x) > floor) xs.push_back(x);
    }
    const bool increasing = xs.size() < 2 || xs.back() > xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (increasing ? !(xs[i] > xs[i - 1]) : !(xs[i] < xs[i - 1])) {
        fail(ErrorCode::NonInjectiveProjection, "x-projection of the evolute is not one-to-one near s1=" +
                                                    std::to_string(s1));
      }
    }
  }
  return g;
}

/// Exponent e in |y| ~ |x|^e over the resolvable samples of one or more branches.
inline LinearFit graph_exponent(std::span<const GraphBranch> branches, double floor = 1e-11) {
  std::vector<double> lx, ly;
  for (const GraphBranch& br : branches) {
    for (std::size_t i = 0; i < br.x.size(); ++i) {
      if (std::abs(br.x[i]) > floor && std::abs(br.y[i]) > floor) {
        lx.push_back(std::log(std::abs(br.x[i])));
        ly.push_back(std::log(std::abs(br.y[i])));
      }
    }
  }
  return fit_line(lx, ly);
}

enum class PointClass { regular_point, c1_1overm_point, cusp };

constexpr std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::regular_point: return "regular_point";
    case PointClass::c1_1overm_point: return "C1_1overm_point";
    case PointClass::cusp: return "cusp";
  }
  return "unknown";
}

struct CuspReport {
  double s1 = 0.0;
  RegularityEstimate order;  ///< vanishing order of R at s1
  int order_m = 0;
  bool order_confident = false;
  bool even = false;
  PointClass classification = PointClass::regular_point;
  HolderEstimate tangent_holder;
  /// Cusp only: exponents of g1 (y >= 0 branch) and g2 (y <= 0 branch) against x.
  std::optional<std::array<double, 2>> branch_exponents;
  std::array<double, 2> branch_fit_r2{};
  /// Sign taken by y on the s > s1 and s < s1 branches (cusp: opposite signs).
  std::array<int, 2> branch_signs{};
  double min_branch_value = 0.0;  ///< smallest g on either oriented branch
  LocalFrameGraph graph;
  bool operator==(const CuspReport&) const = default;
};

struct ClassifyOptions {
  std::optional<ScaleWindow> window;
  int scales = 48;
  double rounding_threshold = 0.15;
  double min_fit_r2 = 0.99;
  double r_min = 1e-6;
};

/// Classifies the evolute at parent arclength s1 from the vanishing order m of
/// R - R(s1): m = 1 regular, odd m >= 3 a C^{1,1/m} point, even m a cusp with
/// two graph branches of exponent 1 + 1/m.
inline CuspReport classify_cusp(const EvoluteCurve& ev, double s1, const ClassifyOptions& opts = {}) {
  const ArcCurve& ac = *ev.parent;
  const ScaleWindow w = opts.window.value_or(default_window(ac, s1));
  CuspReport rep;
  rep.s1 = s1;
  rep.order = radius_order(ac, s1, w, VanishingOrderOptions{opts.scales});
  if (rep.order.capped()) {
    fail(ErrorCode::AmbiguousOrder, "R is flat beyond every finite order at s1=" + std::to_string(s1));
  }
  const double rounded = std::round(rep.order.m_minus);
  rep.order_m = static_cast<int>(rounded);
  rep.order_confident = std::abs(rep.order.m_minus - rounded) <= opts.rounding_threshold && rep.order_m >= 1;
  if (!rep.order_confident || rep.order.fit_r2 < opts.min_fit_r2) {
    fail(ErrorCode::AmbiguousOrder, "vanishing order estimate " + std::to_string(rep.order.m_minus) +
                                        " (fit r2 " + std::to_string(rep.order.fit_r2) + ") is not an integer");
  }
  const double dr = std::abs(ac.dradius_at(s1));
  if ((rep.order_m == 1) != (dr > opts.r_min)) {
    fail(ErrorCode::NotACriticalPoint, "order " + std::to_string(rep.order_m) + " inconsistent with |R'(s1)| = " +
                                           std::to_string(dr));
  }
  rep.even = rep.order_m % 2 == 0;
  rep.graph = local_frame_graph(ev, s1, w, opts.scales);
  rep.tangent_holder = evolute_tangent_holder(ev, s1, w, opts.scales);
  for (int b = 0; b < 2; ++b) {
    const GraphBranch& br = rep.graph.branches[b];
    const auto far = std::max_element(br.y.begin(), br.y.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
    rep.branch_signs[b] = *far >= 0 ? 1 : -1;
  }
  if (rep.order_m == 1) {
    rep.classification = PointClass::regular_point;
  } else if (!rep.even) {
    rep.classification = PointClass::c1_1overm_point;
  } else {
    rep.classification = PointClass::cusp;
    std::array<double, 2> exps{};
    rep.min_branch_value = kInfinity;
    for (int b = 0; b < 2; ++b) {
      const GraphBranch& br = rep.graph.branches[b];
      const LinearFit fit = graph_exponent(std::span(&br, 1));
      // Index 0 holds the y >= 0 branch (g1), index 1 the y <= 0 branch (g2).
      const int slot = rep.branch_signs[b] > 0 ? 0 : 1;
      exps[slot] = fit.slope;
      rep.branch_fit_r2[slot] = fit.r2;
      for (double y : br.y) rep.min_branch_value = std::min(rep.min_branch_value, rep.branch_signs[b] * y);
    }
    rep.branch_exponents = exps;
  }
  return rep;
}

inline CuspReport classify_cusp(const ArcCurve& ac, double s1, const ClassifyOptions& opts = {}) {
  return classify_cusp(evolute(ac), s1, opts);
}

}  // namespace evokit
