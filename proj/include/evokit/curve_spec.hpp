#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "interpolation.hpp"
#include "vec2.hpp"

namespace evokit {

using PlaneMap = std::function<Vec2(double)>;
using ScalarMap = std::function<double(double)>;

/// A parametric plane curve t -> R^2 over [a, b], either given by evaluators
/// (catalog curves, optionally with analytic derivatives of order 1..3) or by
/// samples, which are interpolated by natural cubic splines.
struct CurveSpec {
  std::string name;
  std::map<std::string, double> params;
  double a = 0.0;
  double b = 1.0;
  PlaneMap position;
  std::array<PlaneMap, 3> derivatives;  // empty entries mean "not available"
  int sample_density = 128;             // nodes per unit arclength after reparametrization
  double arclength_origin = 0.0;        // arclength assigned to t = a

  bool has_derivatives() const { return derivatives[0] && derivatives[1] && derivatives[2]; }
};

/// A curve given by its intrinsic equation kappa(s) over [s_a, s_b].
struct IntrinsicSpec {
  std::string name;
  std::map<std::string, double> params;
  double s_a = 0.0;
  double s_b = 1.0;
  ScalarMap kappa;
  ScalarMap dkappa;  // optional exact derivative d kappa / ds
  Vec2 initial_point{};
  double initial_angle = 0.0;
  int sample_density = 512;
};

using CurveSource = std::variant<CurveSpec, IntrinsicSpec>;

/// Builds a sampled CurveSpec from strictly increasing parameters and points.
/// Position and derivatives come from natural cubic splines through the samples.
inline CurveSpec sampled_curve(const std::vector<double>& t, const std::vector<Vec2>& pts, int sample_density = 128) {
  if (t.size() != pts.size()) fail(ErrorCode::InvalidCurve, "parameter and point counts differ");
  if (t.size() < 8) fail(ErrorCode::InvalidCurve, "a sampled curve needs at least 8 points");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) fail(ErrorCode::InvalidCurve, "sample parameters must be strictly increasing");
  }
  for (const Vec2& p : pts) {
    if (!is_finite(p)) fail(ErrorCode::InvalidCurve, "non-finite sample point");
  }
  std::vector<double> xs(pts.size()), ys(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xs[i] = pts[i].x;
    ys[i] = pts[i].y;
  }
  auto sx = std::make_shared<CubicSpline>(t, xs);
  auto sy = std::make_shared<CubicSpline>(t, ys);
  CurveSpec spec;
  spec.name = "sampled";
  spec.a = t.front();
  spec.b = t.back();
  spec.sample_density = sample_density;
  spec.position = [sx, sy](double u) { return Vec2{(*sx)(u).value, (*sy)(u).value}; };
  spec.derivatives[0] = [sx, sy](double u) { return Vec2{(*sx)(u).d1, (*sy)(u).d1}; };
  spec.derivatives[1] = [sx, sy](double u) { return Vec2{(*sx)(u).d2, (*sy)(u).d2}; };
  spec.derivatives[2] = [sx, sy](double u) { return Vec2{(*sx)(u).d3, (*sy)(u).d3}; };
  return spec;
}

/// Checks the CurveSpec invariants: finite positions over the interval and, when
/// derivative evaluators are present, agreement of the first derivative with
/// central differences at 16 interior probes (relative error <= 1e-6).
inline void validate(const CurveSpec& spec) {
  if (!(spec.a < spec.b)) fail(ErrorCode::InvalidCurve, "parameter interval must satisfy a < b");
  if (!spec.position) fail(ErrorCode::InvalidCurve, "missing position evaluator");
  if (spec.sample_density <= 0) fail(ErrorCode::InvalidCurve, "sample density must be positive");
  const double width = spec.b - spec.a;
  const double step = 1e-5 * width;
  for (int k = 0; k < 16; ++k) {
    const double t = spec.a + width * (k + 0.5) / 16.0;
    const Vec2 p = spec.position(t);
    if (!is_finite(p)) fail(ErrorCode::InvalidCurve, "position evaluator is not finite at t=" + std::to_string(t));
    if (!spec.derivatives[0]) continue;
    const Vec2 fd = (spec.position(t + step) - spec.position(t - step)) / (2.0 * step);
    const Vec2 d1 = spec.derivatives[0](t);
    if (!is_finite(d1)) fail(ErrorCode::NonFiniteDerivative, "first derivative is not finite at t=" + std::to_string(t));
    if (norm(fd - d1) > 1e-6 * std::max(norm(d1), 1.0)) {
      fail(ErrorCode::InvalidCurve, "first-derivative evaluator disagrees with central differences at t=" +
                                        std::to_string(t));
    }
  }
}

}  // namespace evokit
