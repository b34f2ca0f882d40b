#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "arc_curve.hpp"
#include "critical_points.hpp"
#include "curve_core.hpp"
#include "error.hpp"
#include "quadrature.hpp"
#include "vec2.hpp"

namespace evokit {

/// Locus of the centres of curvature on the parent node grid.
struct EvoluteCurve {
  std::shared_ptr<const ArcCurve> parent;
  std::vector<Vec2> points;     ///< gamma + R nu at each parent node
  std::vector<double> radius;   ///< R at each parent node
  std::vector<double> dradius;  ///< dR/ds at each parent node
  /// Evolute arclength, normalised so that s_tilde = R at the first node; on
  /// any stretch where R increases, s_tilde = R exactly.
  std::vector<double> s_tilde;
  /// Evolute arclength of each parent segment [s_i, s_{i+1}].
  std::vector<double> segment_length;
  /// Unit tangent sign(R') nu; the zero vector where R' vanishes exactly.
  std::vector<Vec2> tangent;
  /// Parent arclengths where R' = 0.
  std::vector<double> singular_set;
  CriticalPoints critical;

  std::size_t size() const { return points.size(); }

  /// Evolute point at parent arclength s via the parent interpolant.
  Vec2 point_at(double s) const {
    const Frame f = eval_frame(*parent, s);
    return f.point + f.radius() * f.normal;
  }
};

namespace detail {

/// Integral of |R'| over [s_i, s_{i+1}]. Differences of R are exact when R is
/// monotone on the segment, but lose every digit where R is flat to machine
/// precision; there |R'| node values are integrated instead.
inline double evolute_segment_length(const ArcCurve& ac, const std::vector<double>& r, const std::vector<double>& dr,
                                     std::size_t i, const std::vector<double>& extrema) {
  const auto s = ac.s();
  for (double e : extrema) {
    if (e > s[i] && e < s[i + 1]) {
      const double re = ac.radius_at(e);
      return std::abs(re - r[i]) + std::abs(r[i + 1] - re);
    }
  }
  const double diff = std::abs(r[i + 1] - r[i]);
  if (diff >= 1e-10 * std::max(std::abs(r[i]), std::abs(r[i + 1]))) return diff;
  const double h = s[i + 1] - s[i];
  const double trapezoid = 0.5 * h * (std::abs(dr[i]) + std::abs(dr[i + 1]));
  if (i == 0 || i + 2 >= s.size()) return trapezoid;
  const double cubic = h / 24.0 *
                       (-std::abs(dr[i - 1]) + 13.0 * std::abs(dr[i]) + 13.0 * std::abs(dr[i + 1]) - std::abs(dr[i + 2]));
  return cubic > 0.0 ? cubic : trapezoid;
}

}  // namespace detail

/// Evolute gamma + R nu of an ArcCurve; throws ZeroCurvature if any node fails
/// the curvature gate or kappa changes sign between nodes.
inline EvoluteCurve evolute(std::shared_ptr<const ArcCurve> ac, const CriticalPointOptions& opts = {}) {
  const std::size_t n = ac->size();
  EvoluteCurve ev;
  ev.parent = ac;
  ev.points.resize(n);
  ev.radius.resize(n);
  ev.dradius.resize(n);
  ev.tangent.resize(n);
  ev.s_tilde.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && (ac->kappa()[i] > 0) != (ac->kappa()[i - 1] > 0)) {
      fail(ErrorCode::ZeroCurvature, "kappa changes sign between s=" + std::to_string(ac->s()[i - 1]) + " and s=" +
                                         std::to_string(ac->s()[i]));
    }
    ev.radius[i] = ac->radius_at_node(i);
    ev.dradius[i] = ac->dradius_at_node(i);
    const Vec2 nu = ac->normal_at_node(i);
    ev.points[i] = ac->points()[i] + ev.radius[i] * nu;
    ev.tangent[i] = ev.dradius[i] == 0.0 ? Vec2{} : (ev.dradius[i] > 0 ? nu : -nu);
  }
  ev.critical = critical_points_of_R(*ac, opts);
  ev.singular_set = ev.critical.points();
  ev.s_tilde[0] = ev.radius[0];
  ev.segment_length.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    ev.segment_length[i] = detail::evolute_segment_length(*ac, ev.radius, ev.dradius, i, ev.critical.extrema);
    ev.s_tilde[i + 1] = ev.s_tilde[i] + ev.segment_length[i];
  }
  return ev;
}

inline EvoluteCurve evolute(const ArcCurve& ac, const CriticalPointOptions& opts = {}) {
  return evolute(std::make_shared<const ArcCurve>(ac), opts);
}

/// The evolute between parent arclengths s_lo and s_hi as an ArcCurve in its
/// own arclength s_tilde = sigma R (sigma = sign of R' on the stretch). Its
/// source parameter is the parent arclength. R must be strictly monotone on
/// the selected nodes.
inline ArcCurve evolute_arc(const EvoluteCurve& ev, double s_lo, double s_hi) {
  const ArcCurve& ac = *ev.parent;
  const auto s = ac.s();
  std::size_t lo = 0;
  while (lo < s.size() && s[lo] < s_lo) ++lo;
  std::size_t hi = s.size() - 1;
  while (hi > lo && s[hi] > s_hi) --hi;
  if (hi < lo + 4) fail(ErrorCode::InvalidCurve, "evolute stretch holds fewer than five nodes");
  const double sigma = ev.dradius[lo] > 0 ? 1.0 : -1.0;
  ArcNodes nodes;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (!(sigma * ev.dradius[i] > 0.0)) {
      fail(ErrorCode::NonMonotonePrecondition, "R is not strictly monotone at s=" + std::to_string(s[i]));
    }
    const double abs_dr = std::abs(ev.dradius[i]);
    nodes.s.push_back(sigma * ev.radius[i]);
    nodes.points.push_back(ev.points[i]);
    nodes.phi.push_back(ac.phi()[i] + 0.5 * std::numbers::pi + (sigma < 0 ? std::numbers::pi : 0.0));
    nodes.kappa.push_back(ac.kappa()[i] / abs_dr);
    nodes.param.push_back(s[i]);
    nodes.dparam.push_back(1.0 / abs_dr);
  }
  nodes.dkappa.resize(nodes.s.size());
  for (std::size_t k = 0; k < nodes.s.size(); ++k) {
    nodes.dkappa[k] = local_polynomial_derivative(nodes.s, nodes.kappa, k);
  }
  return ArcCurve(std::move(nodes), ac.kappa_min());
}

struct InvoluteParams {
  double c = 0.0;        ///< string-length constant; must lie outside the arclength range
  int orientation = 1;   ///< +1 traverses s_tilde upward, -1 downward
  int sample_density = 128;
};

/// The same curve traversed backwards: s -> -s.
inline ArcCurve reversed(const ArcCurve& ac) {
  ArcNodes in = ac.nodes();
  ArcNodes out;
  const std::size_t n = in.s.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = n - 1 - k;
    out.s.push_back(-in.s[i]);
    out.points.push_back(in.points[i]);
    out.phi.push_back(in.phi[i] + std::numbers::pi);
    out.kappa.push_back(-in.kappa[i]);
    out.dkappa.push_back(in.dkappa[i]);
    if (!in.param.empty()) {
      out.param.push_back(in.param[i]);
      out.dparam.push_back(-in.dparam[i]);
    }
  }
  return ArcCurve(std::move(out), ac.kappa_min());
}

/// gamma(s) + (c - s) gamma'(s) for the curve parametrized by arclength s.
inline Vec2 involute_point(const ArcCurve& ac, double c, double s) {
  const Frame f = eval_frame(ac, s);
  return f.point + (c - s) * f.tangent;
}

/// Involute s -> gamma(s) + (c - s) gamma'(s), resampled by its own arclength.
/// The result's source parameter is the arclength of `ac`.
inline ArcCurve involute(const ArcCurve& input, const InvoluteParams& params) {
  const ArcCurve ac = params.orientation < 0 ? reversed(input) : input;
  const double c = params.c;
  if (c >= ac.s_begin() && c <= ac.s_end()) {
    fail(ErrorCode::SingularInvolute, "c lies inside the arclength interval; involute singular at s=" +
                                          std::to_string(c));
  }
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (std::abs(c - ac.s()[i]) * std::abs(ac.kappa()[i]) < 1e-9) {
      fail(ErrorCode::SingularInvolute, "|gamma_1'| < 1e-9 at s=" + std::to_string(ac.s()[i]));
    }
  }
  auto shared = std::make_shared<const ArcCurve>(ac);
  CurveSpec spec;
  spec.name = "involute";
  spec.params = {{"c", c}};
  spec.a = ac.s_begin();
  spec.b = ac.s_end();
  spec.sample_density = params.sample_density;
  spec.position = [shared, c](double s) { return involute_point(*shared, c, s); };
  spec.derivatives[0] = [shared, c](double s) {
    const Jet<double> a = shared->angle(s);
    return (c - s) * a.d1 * perp(unit_from_angle(a.value));
  };
  spec.derivatives[1] = [shared, c](double s) {
    const Jet<double> a = shared->angle(s);
    const Vec2 t = unit_from_angle(a.value);
    const double w = c - s;
    return (w * a.d2 - a.d1) * perp(t) - w * a.d1 * a.d1 * t;
  };
  spec.derivatives[2] = [shared, c](double s) {
    const Jet<double> a = shared->angle(s);
    const Vec2 t = unit_from_angle(a.value);
    const double w = c - s, k = a.d1, k1 = a.d2, k2 = a.d3;
    return (-2.0 * k1 + w * k2 - w * k * k * k) * perp(t) + (2.0 * k * k - 3.0 * w * k * k1) * t;
  };
  return reparametrize_by_arclength(spec, ReparamOptions{ac.kappa_min(), params.sample_density});
}

/// Curvature of the evolute, -kappa^3 / kappa', oriented by increasing R.
inline double evolute_curvature(const ArcCurve& ac, double s) {
  const Jet<double> a = ac.angle(s);
  if (!(std::abs(a.d1) >= ac.kappa_min())) {
    fail(ErrorCode::ZeroCurvature, "|kappa| below gate at s=" + std::to_string(s));
  }
  if (!(std::abs(a.d2) >= 1e-9)) {
    fail(ErrorCode::VanishingKappaPrime, "kappa' vanishes at s=" + std::to_string(s) +
                                             "; the evolute has no curvature there");
  }
  return -a.d1 * a.d1 * a.d1 / a.d2;
}

/// Norm of the difference between the two sides of
///   E(s2) - E(s1) = int_{s1}^{s2} (R(s) - R(s2)) / R(s) gamma'(s) ds + (R(s2) - R(s1)) nu(s1),
/// with E the evolute; the integral is evaluated by adaptive Simpson.
inline double verify_increvol_identity(const ArcCurve& ac, double s1, double s2) {
  if (!(s1 < s2)) fail(ErrorCode::OutOfRange, "need s1 < s2");
  if (!ac.contains(s1) || !ac.contains(s2)) fail(ErrorCode::OutOfRange, "s1, s2 outside the curve");
  const auto s = ac.s();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= s1 && s[i] <= s2) (void)ac.radius_at_node(i);
  }
  const Frame f1 = eval_frame(ac, s1);
  const Frame f2 = eval_frame(ac, s2);
  const double r1 = f1.radius(), r2 = f2.radius();
  const Vec2 lhs = (f2.point + r2 * f2.normal) - (f1.point + r1 * f1.normal);
  const Vec2 integral = adaptive_simpson(
      [&](double u) {
        const Jet<double> a = ac.angle(u);
        return (1.0 - r2 * a.d1) * unit_from_angle(a.value);
      },
      s1, s2, 1e-10, 16);
  const Vec2 rhs = integral + (r2 - r1) * f1.normal;
  return norm(lhs - rhs);
}

}  // namespace evokit
