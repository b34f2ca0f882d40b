#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "curve_spec.hpp"
#include "error.hpp"
#include "vec2.hpp"

namespace evokit::catalog {

using std::numbers::pi;

inline CurveSpec circle(double r = 1.0, double t0 = 0.0, double t1 = 2.0 * pi) {
  CurveSpec c;
  c.name = "circle";
  c.params = {{"r", r}};
  c.a = t0;
  c.b = t1;
  c.position = [r](double t) { return Vec2{r * std::cos(t), r * std::sin(t)}; };
  c.derivatives[0] = [r](double t) { return Vec2{-r * std::sin(t), r * std::cos(t)}; };
  c.derivatives[1] = [r](double t) { return Vec2{-r * std::cos(t), -r * std::sin(t)}; };
  c.derivatives[2] = [r](double t) { return Vec2{r * std::sin(t), -r * std::cos(t)}; };
  return c;
}

/// (a cos t, b sin t). The default window starts at -pi/4 so that all four
/// vertices t = 0, pi/2, pi, 3pi/2 are interior.
inline CurveSpec ellipse(double a = 2.0, double b = 1.0, double t0 = -0.25 * pi, double t1 = 1.75 * pi) {
  CurveSpec c;
  c.name = "ellipse";
  c.params = {{"a", a}, {"b", b}};
  c.a = t0;
  c.b = t1;
  c.position = [a, b](double t) { return Vec2{a * std::cos(t), b * std::sin(t)}; };
  c.derivatives[0] = [a, b](double t) { return Vec2{-a * std::sin(t), b * std::cos(t)}; };
  c.derivatives[1] = [a, b](double t) { return Vec2{-a * std::cos(t), -b * std::sin(t)}; };
  c.derivatives[2] = [a, b](double t) { return Vec2{a * std::sin(t), -b * std::cos(t)}; };
  return c;
}

/// (t, t^2).
inline CurveSpec parabola(double t0 = -1.0, double t1 = 1.0) {
  CurveSpec c;
  c.name = "parabola";
  c.a = t0;
  c.b = t1;
  c.position = [](double t) { return Vec2{t, t * t}; };
  c.derivatives[0] = [](double t) { return Vec2{1.0, 2.0 * t}; };
  c.derivatives[1] = [](double) { return Vec2{0.0, 2.0}; };
  c.derivatives[2] = [](double) { return Vec2{0.0, 0.0}; };
  return c;
}

/// r = exp(k theta) in polar form, parametrized by theta.
inline CurveSpec logarithmic_spiral(double k = 1.0, double t0 = -1.0, double t1 = 2.0) {
  CurveSpec c;
  c.name = "logarithmic_spiral";
  c.params = {{"k", k}};
  c.a = t0;
  c.b = t1;
  // d/dt [e^{kt}(cos t, sin t)] = e^{kt} M (cos t, sin t) with M = [[k,-1],[1,k]].
  auto apply = [k](Vec2 v) { return Vec2{k * v.x - v.y, v.x + k * v.y}; };
  c.position = [k](double t) { return std::exp(k * t) * Vec2{std::cos(t), std::sin(t)}; };
  c.derivatives[0] = [k, apply](double t) { return std::exp(k * t) * apply({std::cos(t), std::sin(t)}); };
  c.derivatives[1] = [k, apply](double t) { return std::exp(k * t) * apply(apply({std::cos(t), std::sin(t)})); };
  c.derivatives[2] = [k, apply](double t) {
    return std::exp(k * t) * apply(apply(apply({std::cos(t), std::sin(t)})));
  };
  return c;
}

/// (t - sin t, 1 - cos t), one arch kept away from its cusps.
inline CurveSpec cycloid(double t0 = 0.5, double t1 = 2.0 * pi - 0.5) {
  CurveSpec c;
  c.name = "cycloid";
  c.a = t0;
  c.b = t1;
  c.position = [](double t) { return Vec2{t - std::sin(t), 1.0 - std::cos(t)}; };
  c.derivatives[0] = [](double t) { return Vec2{1.0 - std::cos(t), std::sin(t)}; };
  c.derivatives[1] = [](double t) { return Vec2{std::sin(t), std::cos(t)}; };
  c.derivatives[2] = [](double t) { return Vec2{std::cos(t), -std::sin(t)}; };
  return c;
}

/// Polar r(theta) = 1 + 2 cos theta over (-3pi/4, 3pi/4); double point at the
/// origin for theta = +-2pi/3.
inline CurveSpec limacon(double t0 = -0.75 * pi, double t1 = 0.75 * pi) {
  CurveSpec c;
  c.name = "limacon";
  c.a = t0;
  c.b = t1;
  c.position = [](double t) {
    const double r = 1.0 + 2.0 * std::cos(t);
    return Vec2{r * std::cos(t), r * std::sin(t)};
  };
  c.derivatives[0] = [](double t) {
    const double co = std::cos(t), si = std::sin(t);
    const double r = 1.0 + 2.0 * co, r1 = -2.0 * si;
    return Vec2{r1 * co - r * si, r1 * si + r * co};
  };
  c.derivatives[1] = [](double t) {
    const double co = std::cos(t), si = std::sin(t);
    const double r = 1.0 + 2.0 * co, r1 = -2.0 * si, r2 = -2.0 * co;
    return Vec2{r2 * co - 2.0 * r1 * si - r * co, r2 * si + 2.0 * r1 * co - r * si};
  };
  c.derivatives[2] = [](double t) {
    const double co = std::cos(t), si = std::sin(t);
    const double r = 1.0 + 2.0 * co, r1 = -2.0 * si, r2 = -2.0 * co, r3 = 2.0 * si;
    return Vec2{r3 * co - 3.0 * r2 * si - 3.0 * r1 * co + r * si, r3 * si + 3.0 * r2 * co - 3.0 * r1 * si - r * co};
  };
  return c;
}

/// Curve whose radius of curvature is R(s) = R0 + c s^m, m a positive integer.
inline IntrinsicSpec radius_profile(int m = 2, double c = 1.0, double r0 = 1.0, double s0 = -0.5, double s1 = 0.5) {
  if (m < 1) fail(ErrorCode::InvalidCurve, "radius_profile needs an integer order m >= 1");
  auto radius = [=](double s) { return r0 + c * std::pow(s, m); };
  for (double s : {s0, s1, 0.0}) {
    if (s >= s0 && s <= s1 && !(std::abs(radius(s)) > 1e-8)) {
      fail(ErrorCode::InvalidCurve, "radius_profile radius vanishes on the interval");
    }
  }
  if (radius(s0) * radius(s1) <= 0 || radius(s0) * r0 <= 0) {
    fail(ErrorCode::InvalidCurve, "radius_profile radius changes sign on the interval");
  }
  IntrinsicSpec in;
  in.name = "radius_profile";
  in.params = {{"m", static_cast<double>(m)}, {"c", c}, {"R0", r0}};
  in.s_a = s0;
  in.s_b = s1;
  in.kappa = [radius](double s) { return 1.0 / radius(s); };
  in.dkappa = [=](double s) {
    const double r = radius(s);
    const double dr = m == 1 ? c : c * m * std::pow(s, m - 1);
    return -dr / (r * r);
  };
  return in;
}

/// R(s) = R0 + sign(s) exp(-1/s^2): every derivative of R vanishes at s = 0.
inline IntrinsicSpec flat_profile(double r0 = 1.0, double s0 = -0.5, double s1 = 0.5) {
  auto bump = [](double s) { return s == 0.0 ? 0.0 : std::copysign(std::exp(-1.0 / (s * s)), s); };
  auto radius = [=](double s) { return r0 + bump(s); };
  if (!(std::abs(r0) > std::exp(-1.0 / (std::max(s0 * s0, s1 * s1))))) {
    fail(ErrorCode::InvalidCurve, "flat_profile radius vanishes on the interval");
  }
  IntrinsicSpec in;
  in.name = "flat_profile";
  in.params = {{"R0", r0}};
  in.s_a = s0;
  in.s_b = s1;
  in.kappa = [radius](double s) { return 1.0 / radius(s); };
  in.dkappa = [radius](double s) {
    if (s == 0.0) return 0.0;
    const double as = std::abs(s);
    const double dr = 2.0 / (as * as * as) * std::exp(-1.0 / (s * s));
    const double r = radius(s);
    return -dr / (r * r);
  };
  return in;
}

/// Parsed `name[:key=value[,key=value]*]`.
struct Descriptor {
  std::string name;
  std::map<std::string, double> values;
};

inline Descriptor parse_descriptor(std::string_view text) {
  Descriptor d;
  const auto colon = text.find(':');
  d.name = std::string(text.substr(0, colon));
  if (d.name.empty()) fail(ErrorCode::ParseError, "empty curve name");
  if (colon == std::string_view::npos) return d;
  std::string_view rest = text.substr(colon + 1);
  if (rest.empty()) fail(ErrorCode::ParseError, "expected key=value after ':'");
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      fail(ErrorCode::ParseError, "malformed key=value pair '" + std::string(item) + "'");
    }
    const std::string key(item.substr(0, eq));
    const std::string_view raw = item.substr(eq + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc{} || ptr != raw.data() + raw.size() || !std::isfinite(value)) {
      fail(ErrorCode::ParseError, "value of '" + key + "' is not a finite number");
    }
    if (!d.values.emplace(key, value).second) fail(ErrorCode::ParseError, "duplicate key '" + key + "'");
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
    if (rest.empty()) fail(ErrorCode::ParseError, "trailing ','");
  }
  return d;
}

namespace detail {

class Keys {
 public:
  explicit Keys(const Descriptor& d) : d_(d) {}
  double get(const std::string& key, double fallback) {
    used_.push_back(key);
    const auto it = d_.values.find(key);
    return it == d_.values.end() ? fallback : it->second;
  }
  void finish() const {
    for (const auto& [key, value] : d_.values) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        fail(ErrorCode::ParseError, "unknown key '" + key + "' for curve '" + d_.name + "'");
      }
    }
  }

 private:
  const Descriptor& d_;
  std::vector<std::string> used_;
};

inline int integer_key(double v, const std::string& key, double max = 64) {
  if (v != std::round(v) || v < 1 || v > max) {
    fail(ErrorCode::ParseError, key + " must be an integer in [1, " + std::to_string(static_cast<long>(max)) + "]");
  }
  return static_cast<int>(v);
}

}  // namespace detail

/// Catalog curve named by a descriptor such as `ellipse:a=2,b=1`. Every curve
/// accepts `density`; parametric curves accept `t0`, `t1` and `origin` (the
/// arclength assigned to t0); intrinsic ones accept `s0`, `s1`.
inline CurveSource make_curve(std::string_view text) {
  const Descriptor d = parse_descriptor(text);
  detail::Keys keys(d);
  auto finish_spec = [&](CurveSpec spec) -> CurveSource {
    spec.sample_density = detail::integer_key(keys.get("density", 128), "density", 1 << 16);
    spec.arclength_origin = keys.get("origin", 0.0);
    keys.finish();
    return spec;
  };
  auto finish_intrinsic = [&](IntrinsicSpec in) -> CurveSource {
    in.sample_density = detail::integer_key(keys.get("density", 512), "density", 1 << 16);
    keys.finish();
    return in;
  };
  try {
    if (d.name == "circle") {
      const double r = keys.get("r", 1.0);
      return finish_spec(circle(r, keys.get("t0", 0.0), keys.get("t1", 2.0 * pi)));
    }
    if (d.name == "ellipse") {
      const double a = keys.get("a", 2.0), b = keys.get("b", 1.0);
      return finish_spec(ellipse(a, b, keys.get("t0", -0.25 * pi), keys.get("t1", 1.75 * pi)));
    }
    if (d.name == "parabola") return finish_spec(parabola(keys.get("t0", -1.0), keys.get("t1", 1.0)));
    if (d.name == "logarithmic_spiral") {
      const double k = keys.get("k", 1.0);
      return finish_spec(logarithmic_spiral(k, keys.get("t0", -1.0), keys.get("t1", 2.0)));
    }
    if (d.name == "cycloid") return finish_spec(cycloid(keys.get("t0", 0.5), keys.get("t1", 2.0 * pi - 0.5)));
    if (d.name == "limacon") return finish_spec(limacon(keys.get("t0", -0.75 * pi), keys.get("t1", 0.75 * pi)));
    if (d.name == "radius_profile") {
      const int m = detail::integer_key(keys.get("m", 2), "m");
      const double c = keys.get("c", 1.0), r0 = keys.get("R0", 1.0);
      return finish_intrinsic(radius_profile(m, c, r0, keys.get("s0", -0.5), keys.get("s1", 0.5)));
    }
    if (d.name == "flat_profile") {
      const double r0 = keys.get("R0", 1.0);
      return finish_intrinsic(flat_profile(r0, keys.get("s0", -0.5), keys.get("s1", 0.5)));
    }
  } catch (const GeometryError& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    fail(ErrorCode::ParseError, e.what());
  }
  fail(ErrorCode::ParseError, "unknown curve '" + d.name + "'");
}

/// Reads a sampled curve from CSV with header `t,x,y`.
inline CurveSpec read_curve_csv(std::istream& in, int sample_density = 128) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::ParseError, "empty CSV input");
  if (!line.empty() && line.back() == '\r') fail(ErrorCode::ParseError, "CSV must use LF line endings");
  if (line != "t,x,y") fail(ErrorCode::ParseError, "CSV header must be exactly 't,x,y'");
  std::vector<double> ts;
  std::vector<Vec2> pts;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double v[3];
    std::string_view rest(line);
    for (int k = 0; k < 3; ++k) {
      const auto comma = rest.find(',');
      if ((k < 2) == (comma == std::string_view::npos)) {
        fail(ErrorCode::ParseError, "row " + std::to_string(row) + " must have three fields");
      }
      const std::string_view field = rest.substr(0, comma);
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[k]);
      if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v[k])) {
        fail(ErrorCode::ParseError, "row " + std::to_string(row) + " has a non-numeric field");
      }
      if (comma != std::string_view::npos) rest = rest.substr(comma + 1);
    }
    ts.push_back(v[0]);
    pts.push_back({v[1], v[2]});
  }
  try {
    return sampled_curve(ts, pts, sample_density);
  } catch (const GeometryError& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

}  // namespace evokit::catalog
