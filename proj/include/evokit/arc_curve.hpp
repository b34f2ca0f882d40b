#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "interpolation.hpp"
#include "vec2.hpp"

namespace evokit {

inline constexpr double kDefaultKappaMin = 1e-8;

/// Node data of an arclength-parametrized curve.
///
/// `phi` is the lifted tangent angle, `kappa` = d phi / ds and `dkappa` =
/// d kappa / ds. `param`/`dparam` optionally carry the original curve
/// parameter t(s) and dt/ds at each node.
struct ArcNodes {
  std::vector<double> s;
  std::vector<Vec2> points;
  std::vector<double> phi;
  std::vector<double> kappa;
  std::vector<double> dkappa;
  std::vector<double> param;
  std::vector<double> dparam;
  /// Optional phi[i+1] - phi[i], kept separately when known to full relative
  /// precision; filled from `phi` otherwise.
  std::vector<double> dphi;
};

/// Point, Frenet frame and curvature at one arclength value.
struct Frame {
  Vec2 point;
  Vec2 tangent;
  Vec2 normal;
  double kappa = 0.0;
  double kappa_min = kDefaultKappaMin;

  /// Signed radius of curvature; throws ZeroCurvature below the curvature gate.
  double radius() const {
    if (!(std::abs(kappa) >= kappa_min)) {
      fail(ErrorCode::ZeroCurvature, "radius requested where |kappa| = " + std::to_string(std::abs(kappa)));
    }
    return 1.0 / kappa;
  }
};

/// Arclength-parametrized plane curve.
///
/// Stores node sequences and evaluates a C2 interpolant between them: positions
/// by quintic Hermite from (point, tangent, kappa * normal), the tangent angle
/// by quintic Hermite from (phi, kappa, dkappa). Curvature and its derivative
/// between nodes are derivatives of the angle interpolant, so that the normal
/// satisfies nu' = -kappa * tangent exactly along the interpolant.
class ArcCurve {
 public:
  explicit ArcCurve(ArcNodes nodes, double kappa_min = kDefaultKappaMin) : n_(std::move(nodes)), kappa_min_(kappa_min) {
    const std::size_t count = n_.s.size();
    if (count < 2) fail(ErrorCode::InvalidCurve, "an ArcCurve needs at least two nodes");
    if (n_.points.size() != count || n_.phi.size() != count || n_.kappa.size() != count || n_.dkappa.size() != count) {
      fail(ErrorCode::InvalidCurve, "node sequences have inconsistent lengths");
    }
    if (!n_.param.empty() && (n_.param.size() != count || n_.dparam.size() != count)) {
      fail(ErrorCode::InvalidCurve, "parameter sequences have inconsistent lengths");
    }
    if (n_.dphi.empty()) {
      n_.dphi.resize(count - 1);
      for (std::size_t i = 0; i + 1 < count; ++i) n_.dphi[i] = n_.phi[i + 1] - n_.phi[i];
    } else if (n_.dphi.size() != count - 1) {
      fail(ErrorCode::InvalidCurve, "angle increments have inconsistent length");
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (i > 0 && !(n_.s[i] > n_.s[i - 1])) fail(ErrorCode::InvalidCurve, "arclength nodes must strictly increase");
      if (i > 0 && !(std::abs(n_.phi[i] - n_.phi[i - 1]) < std::numbers::pi)) {
        fail(ErrorCode::LiftFailure, "tangent angle jumps by pi or more between nodes");
      }
      if (!std::isfinite(n_.kappa[i]) || !std::isfinite(n_.dkappa[i])) {
        fail(ErrorCode::NonFiniteCurvature, "non-finite curvature at node " + std::to_string(i));
      }
    }
  }

  std::size_t size() const { return n_.s.size(); }
  double s_begin() const { return n_.s.front(); }
  double s_end() const { return n_.s.back(); }
  double length() const { return s_end() - s_begin(); }
  double kappa_min() const { return kappa_min_; }
  bool has_param() const { return !n_.param.empty(); }

  std::span<const double> s() const { return n_.s; }
  std::span<const Vec2> points() const { return n_.points; }
  std::span<const double> phi() const { return n_.phi; }
  std::span<const double> kappa() const { return n_.kappa; }
  std::span<const double> dkappa() const { return n_.dkappa; }
  std::span<const double> param() const { return n_.param; }
  const ArcNodes& nodes() const { return n_; }

  Vec2 tangent_at_node(std::size_t i) const { return unit_from_angle(n_.phi[i]); }
  Vec2 normal_at_node(std::size_t i) const { return perp(tangent_at_node(i)); }

  /// Signed radius 1/kappa at node i; throws ZeroCurvature below the gate.
  double radius_at_node(std::size_t i) const {
    if (!(std::abs(n_.kappa[i]) >= kappa_min_)) {
      fail(ErrorCode::ZeroCurvature, "|kappa| below gate at node " + std::to_string(i));
    }
    return 1.0 / n_.kappa[i];
  }

  /// d R / ds = -kappa' / kappa^2 at node i.
  double dradius_at_node(std::size_t i) const {
    const double r = radius_at_node(i);
    return -n_.dkappa[i] * r * r;
  }

  bool contains(double s) const { return s >= s_begin() && s <= s_end(); }

  /// Position interpolant and its derivatives up to order three.
  Jet<Vec2> position(double s) const {
    check_range(s);
    const std::size_t i = locate_segment(n_.s, s);
    const double h = n_.s[i + 1] - n_.s[i];
    const double u = (s - n_.s[i]) / h;
    const Vec2 t0 = tangent_at_node(i), t1 = tangent_at_node(i + 1);
    return quintic_hermite<Vec2>(h, u, n_.points[i], t0, n_.kappa[i] * perp(t0), n_.points[i + 1], t1,
                                 n_.kappa[i + 1] * perp(t1));
  }

  /// Tangent-angle interpolant: value phi, d1 = kappa, d2 = kappa', d3 = kappa''.
  Jet<double> angle(double s) const {
    check_range(s);
    const std::size_t i = locate_segment(n_.s, s);
    const double h = n_.s[i + 1] - n_.s[i];
    const double u = (s - n_.s[i]) / h;
    // Interpolating the increment keeps kappa free of the rounding in phi.
    Jet<double> j = quintic_hermite<double>(h, u, 0.0, n_.kappa[i], n_.dkappa[i], n_.dphi[i], n_.kappa[i + 1],
                                            n_.dkappa[i + 1]);
    j.value += n_.phi[i];
    return j;
  }

  Vec2 point(double s) const { return position(s).value; }
  double kappa_at(double s) const { return angle(s).d1; }

  double radius_at(double s) const {
    const double k = kappa_at(s);
    if (!(std::abs(k) >= kappa_min_)) {
      fail(ErrorCode::ZeroCurvature, "|kappa| below gate at s=" + std::to_string(s));
    }
    return 1.0 / k;
  }

  /// d R / ds from the angle interpolant.
  double dradius_at(double s) const {
    const Jet<double> a = angle(s);
    if (!(std::abs(a.d1) >= kappa_min_)) {
      fail(ErrorCode::ZeroCurvature, "|kappa| below gate at s=" + std::to_string(s));
    }
    return -a.d2 / (a.d1 * a.d1);
  }

  /// Original curve parameter t(s), when the curve was built from a CurveSpec.
  double param_at(double s) const {
    if (!has_param()) fail(ErrorCode::InvalidCurve, "curve carries no source parameter");
    check_range(s);
    const std::size_t i = locate_segment(n_.s, s);
    const double h = n_.s[i + 1] - n_.s[i];
    return cubic_hermite(h, (s - n_.s[i]) / h, n_.param[i], n_.dparam[i], n_.param[i + 1], n_.dparam[i + 1])[0];
  }

  /// Arclength at which the source parameter equals t (Newton on the cubic
  /// Hermite interpolant of t(s); the parameter is monotone in s).
  double s_of_param(double t) const {
    if (!has_param()) fail(ErrorCode::InvalidCurve, "curve carries no source parameter");
    const bool increasing = n_.param.back() > n_.param.front();
    std::size_t i = 0;
    const std::size_t last = size() - 1;
    auto before = [&](std::size_t k) { return increasing ? n_.param[k] <= t : n_.param[k] >= t; };
    if (!before(0) || (increasing ? t > n_.param[last] : t < n_.param[last])) {
      fail(ErrorCode::OutOfRange, "parameter " + std::to_string(t) + " outside curve range");
    }
    std::size_t lo = 0, hi = last;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (before(mid) ? lo : hi) = mid;
    }
    i = lo;
    double s = n_.s[i] + (t - n_.param[i]) / n_.dparam[i];
    s = std::clamp(s, n_.s[i], n_.s[i + 1]);
    for (int it = 0; it < 30; ++it) {
      const double h = n_.s[i + 1] - n_.s[i];
      const auto v = cubic_hermite(h, (s - n_.s[i]) / h, n_.param[i], n_.dparam[i], n_.param[i + 1], n_.dparam[i + 1]);
      const double step = (v[0] - t) / v[1];
      s = std::clamp(s - step, n_.s[i], n_.s[i + 1]);
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(s))) break;
    }
    return s;
  }

  /// Node closest to s.
  std::size_t nearest_node(double s) const {
    const std::size_t i = locate_segment(n_.s, s);
    return (s - n_.s[i] <= n_.s[i + 1] - s) ? i : i + 1;
  }

  /// Throws OutOfRange unless s lies on the curve (up to rounding).
  void check_range(double s) const {
    const double slack = 1e-12 * (1.0 + std::abs(s_end()) + std::abs(s_begin()));
    if (!(s >= s_begin() - slack && s <= s_end() + slack)) {
      fail(ErrorCode::OutOfRange, "arclength " + std::to_string(s) + " outside [" + std::to_string(s_begin()) + ", " +
                                      std::to_string(s_end()) + "]");
    }
  }

 private:
  ArcNodes n_;
  double kappa_min_;
};

/// Frame at arclength s: tangent (cos phi, sin phi), normal rotated by +pi/2.
inline Frame eval_frame(const ArcCurve& ac, double s) {
  const Jet<double> a = ac.angle(s);
  Frame f;
  f.point = ac.point(s);
  f.tangent = unit_from_angle(a.value);
  f.normal = perp(f.tangent);
  f.kappa = a.d1;
  f.kappa_min = ac.kappa_min();
  return f;
}

}  // namespace evokit
