#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "arc_curve.hpp"
#include "curve_spec.hpp"
#include "error.hpp"
#include "quadrature.hpp"
#include "vec2.hpp"

namespace evokit {

struct ReparamOptions {
  double kappa_min = kDefaultKappaMin;
  std::optional<int> sample_density;  // overrides the curve's own density
};

namespace detail {

/// Curve with derivative evaluators of order 1..3; specs given only by a
/// position evaluator are densely sampled and spline-interpolated first.
inline CurveSpec with_derivatives(const CurveSpec& spec) {
  if (spec.has_derivatives()) return spec;
  if (!spec.position) fail(ErrorCode::InvalidCurve, "missing position evaluator");
  const int count = std::max(64, static_cast<int>(std::ceil(64.0 * spec.sample_density * (spec.b - spec.a))));
  std::vector<double> t(count + 1);
  std::vector<Vec2> pts(count + 1);
  for (int i = 0; i <= count; ++i) {
    t[i] = spec.a + (spec.b - spec.a) * i / count;
    pts[i] = spec.position(t[i]);
  }
  CurveSpec out = sampled_curve(t, pts, spec.sample_density);
  out.name = spec.name;
  out.params = spec.params;
  out.arclength_origin = spec.arclength_origin;
  return out;
}

inline double checked_speed(const CurveSpec& spec, double t) {
  const Vec2 d = spec.derivatives[0](t);
  if (!is_finite(d)) fail(ErrorCode::NonFiniteDerivative, "|gamma'| is not finite at t=" + std::to_string(t));
  const double v = norm(d);
  if (v < 1e-12) fail(ErrorCode::DegenerateCurve, "|gamma'| vanishes at t=" + std::to_string(t));
  return v;
}

/// Wraps an angle difference into (-pi, pi].
inline double wrap_angle(double d) { return std::remainder(d, 2.0 * std::numbers::pi); }

}  // namespace detail

/// Arclength from t0 to t: integral of |gamma'| by adaptive Simpson to absolute
/// tolerance 1e-9 * (1 + |t - t0|). Antisymmetric in (t0, t).
inline double arc_length(const CurveSpec& curve, double t0, double t) {
  const CurveSpec spec = detail::with_derivatives(curve);
  const double slack = 1e-12 * (1.0 + std::abs(spec.a) + std::abs(spec.b));
  if (t0 < spec.a - slack || t0 > spec.b + slack || t < spec.a - slack || t > spec.b + slack) {
    fail(ErrorCode::OutOfRange, "arc_length endpoints outside the parameter interval");
  }
  const double tol = 1e-9 * (1.0 + std::abs(t - t0));
  return adaptive_simpson([&](double u) { return detail::checked_speed(spec, u); }, t0, t, tol, 16);
}

/// Resamples a curve at uniform arclength spacing (sample_density nodes per
/// unit length) and computes the lifted tangent angle, curvature and its
/// arclength derivative at every node from the derivative evaluators.
inline ArcCurve reparametrize_by_arclength(const CurveSpec& curve, const ReparamOptions& opts = {}) {
  validate(curve);
  const CurveSpec spec = detail::with_derivatives(curve);
  const int density = opts.sample_density.value_or(spec.sample_density);
  if (density <= 0) fail(ErrorCode::InvalidCurve, "sample density must be positive");

  // Cumulative arclength over parameter cells.
  const int cells = std::max(64, static_cast<int>(std::ceil(2.0 * density * (spec.b - spec.a))));
  std::vector<double> tc(cells + 1), cum(cells + 1, 0.0);
  auto speed = [&](double u) { return detail::checked_speed(spec, u); };
  for (int k = 0; k <= cells; ++k) tc[k] = spec.a + (spec.b - spec.a) * k / cells;
  tc[cells] = spec.b;
  for (int k = 0; k < cells; ++k) {
    cum[k + 1] = cum[k] + adaptive_simpson(speed, tc[k], tc[k + 1], 1e-14 * (tc[k + 1] - tc[k]) + 1e-15, 2);
  }
  const double total = cum[cells];
  const int intervals = std::max(8, static_cast<int>(std::ceil(density * total)));
  const double h = total / intervals;

  ArcNodes nodes;
  const std::size_t count = static_cast<std::size_t>(intervals) + 1;
  nodes.s.resize(count);
  nodes.points.resize(count);
  nodes.phi.resize(count);
  nodes.kappa.resize(count);
  nodes.dkappa.resize(count);
  nodes.param.resize(count);
  nodes.dparam.resize(count);

  double previous_angle = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double target = (i + 1 == count) ? total : h * static_cast<double>(i);
    // Parameter at which the cumulative length reaches target.
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    const int k = std::clamp(static_cast<int>(it - cum.begin()) - 1, 0, cells - 1);
    double lo = tc[k], hi = tc[k + 1];
    double t = lo + (hi - lo) * std::clamp((target - cum[k]) / std::max(cum[k + 1] - cum[k], 1e-300), 0.0, 1.0);
    for (int iter = 0; iter < 50; ++iter) {
      const double f = cum[k] + adaptive_simpson(speed, tc[k], t, 1e-15 * (1.0 + total), 1) - target;
      if (std::abs(f) <= 1e-15 * (1.0 + total)) break;
      if (f > 0) hi = t; else lo = t;
      double next = t - f / speed(t);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const bool done = std::abs(next - t) <= 1e-15 * (1.0 + std::abs(t));
      t = next;
      if (done) break;
    }
    if (i == 0) t = spec.a;
    if (i + 1 == count) t = spec.b;

    const Vec2 d1 = spec.derivatives[0](t);
    const Vec2 d2 = spec.derivatives[1](t);
    const Vec2 d3 = spec.derivatives[2](t);
    if (!is_finite(d1) || !is_finite(d2) || !is_finite(d3)) {
      fail(ErrorCode::NonFiniteDerivative, "derivative evaluator not finite at t=" + std::to_string(t));
    }
    const double v = norm(d1);
    if (v < 1e-9) fail(ErrorCode::DegenerateCurve, "|gamma'| below 1e-9 at t=" + std::to_string(t));
    const double v2 = v * v;
    const double c12 = cross(d1, d2);
    const double kappa = c12 / (v2 * v);
    const double dkappa_dt = (cross(d1, d3) * v2 - 3.0 * c12 * dot(d1, d2)) / (v2 * v2 * v);
    const double angle = std::atan2(d1.y, d1.x);
    if (i == 0) {
      nodes.phi[i] = angle;
    } else {
      const double step = detail::wrap_angle(angle - previous_angle);
      if (std::abs(step) >= std::numbers::pi - 0.1) {
        fail(ErrorCode::LiftFailure, "tangent turns by " + std::to_string(step) +
                                         " rad between neighbouring nodes; raise the sample density");
      }
      nodes.phi[i] = nodes.phi[i - 1] + step;
    }
    previous_angle = angle;
    nodes.s[i] = spec.arclength_origin + target;
    nodes.points[i] = spec.position(t);
    nodes.kappa[i] = kappa;
    nodes.dkappa[i] = dkappa_dt / v;
    nodes.param[i] = t;
    nodes.dparam[i] = 1.0 / v;
    if (!std::isfinite(kappa) || !std::isfinite(nodes.dkappa[i])) {
      fail(ErrorCode::NonFiniteCurvature, "curvature not finite at t=" + std::to_string(t));
    }
  }
  return ArcCurve(std::move(nodes), opts.kappa_min);
}

struct IntrinsicOptions {
  int sample_density = 512;
  double kappa_min = kDefaultKappaMin;
  ScalarMap dkappa;  // exact d kappa / ds if known
};

/// Integrates phi' = kappa, gamma' = (cos phi, sin phi) with classical RK4 at a
/// fixed step no larger than 1e-3 of the interval length, recording nodes at
/// uniform arclength spacing.
inline ArcCurve curve_from_curvature(const ScalarMap& kappa, double s_a, double s_b, Vec2 initial_point,
                                     double initial_angle, const IntrinsicOptions& opts = {}) {
  if (!(s_a < s_b)) fail(ErrorCode::InvalidCurve, "interval must satisfy s_a < s_b");
  const double span = s_b - s_a;
  const int intervals = std::max(8, static_cast<int>(std::ceil(opts.sample_density * span)));
  const double h = span / intervals;
  const int substeps = std::max(1, static_cast<int>(std::ceil(h / (1e-3 * span))));
  const double dt = h / substeps;

  auto curvature = [&](double s) {
    const double k = kappa(s);
    if (!std::isfinite(k)) fail(ErrorCode::NonFiniteCurvature, "kappa not finite at s=" + std::to_string(s));
    return k;
  };

  struct State {
    double phi;
    Vec2 p;
  };
  auto rhs = [&](double s, const State& y) { return State{curvature(s), unit_from_angle(y.phi)}; };
  auto advance = [](const State& y, const State& k, double w) { return State{y.phi + w * k.phi, y.p + w * k.p}; };

  const std::size_t count = static_cast<std::size_t>(intervals) + 1;
  ArcNodes nodes;
  nodes.s.resize(count);
  nodes.points.resize(count);
  nodes.phi.resize(count);
  nodes.kappa.resize(count);
  nodes.dkappa.resize(count);
  nodes.dphi.resize(count - 1);

  State y{initial_angle, initial_point};
  for (std::size_t i = 0; i < count; ++i) {
    const double s = (i + 1 == count) ? s_b : s_a + h * static_cast<double>(i);
    nodes.s[i] = s;
    nodes.points[i] = y.p;
    nodes.phi[i] = y.phi;
    nodes.kappa[i] = curvature(s);
    if (i + 1 == count) break;
    double turned = 0.0;
    for (int k = 0; k < substeps; ++k) {
      const double s0 = s + dt * k;
      const State k1 = rhs(s0, y);
      const State k2 = rhs(s0 + 0.5 * dt, advance(y, k1, 0.5 * dt));
      const State k3 = rhs(s0 + 0.5 * dt, advance(y, k2, 0.5 * dt));
      const State k4 = rhs(s0 + dt, advance(y, k3, dt));
      const double step = dt / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
      turned += step;
      y.phi += step;
      y.p += dt / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    }
    nodes.dphi[i] = turned;
  }
  for (std::size_t i = 0; i < count; ++i) {
    nodes.dkappa[i] = opts.dkappa ? opts.dkappa(nodes.s[i]) : local_polynomial_derivative(nodes.s, nodes.kappa, i);
  }
  return ArcCurve(std::move(nodes), opts.kappa_min);
}

/// Builds the arclength form of any curve source.
inline ArcCurve build_arc_curve(const CurveSource& source, const ReparamOptions& opts = {}) {
  if (const auto* spec = std::get_if<CurveSpec>(&source)) return reparametrize_by_arclength(*spec, opts);
  const auto& in = std::get<IntrinsicSpec>(source);
  IntrinsicOptions io;
  io.sample_density = opts.sample_density.value_or(in.sample_density);
  io.kappa_min = opts.kappa_min;
  io.dkappa = in.dkappa;
  return curve_from_curvature(in.kappa, in.s_a, in.s_b, in.initial_point, in.initial_angle, io);
}

}  // namespace evokit
