#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "vec2.hpp"

namespace evokit {

struct Polyline {
  std::vector<Vec2> points;
  std::string stroke = "#000000";
  double width = 1.5;
  std::string dash;  ///< SVG stroke-dasharray, empty for solid
  std::string label;
};

enum class MarkerKind { cusp, double_point, point };

struct Marker {
  Vec2 at;
  MarkerKind kind = MarkerKind::point;
  std::string label;
};

struct Viewport {
  Vec2 lo;
  Vec2 hi;
};

/// Curves and markers drawn into a fixed 1000x1000 canvas with equal aspect
/// ratio and a 2% margin on every side.
struct FigureSpec {
  std::string title;
  std::vector<Polyline> curves;
  std::vector<Marker> markers;
  static constexpr double kSize = 1000.0;
  static constexpr double kMargin = 0.02;

  /// Square data window centred on the drawn content.
  Viewport viewport() const {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi = -1.0 * lo;
    auto grow = [&](Vec2 p) {
      if (!is_finite(p)) fail(ErrorCode::InvalidArgument, "figure contains a non-finite point");
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    };
    for (const auto& c : curves) std::for_each(c.points.begin(), c.points.end(), grow);
    for (const auto& m : markers) grow(m.at);
    if (!(lo.x <= hi.x)) fail(ErrorCode::InvalidArgument, "figure is empty");
    const Vec2 mid = 0.5 * (lo + hi);
    double half = 0.5 * std::max(hi.x - lo.x, hi.y - lo.y);
    if (half == 0.0) half = 1.0;
    half /= (1.0 - 2.0 * kMargin);
    return {mid - Vec2{half, half}, mid + Vec2{half, half}};
  }
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  return s == "-0.000" ? "0.000" : s;
}

inline std::string escape_xml(const std::string& in) {
  std::string out;
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_svg(const FigureSpec& fig) {
  const Viewport vp = fig.viewport();
  const double scale = FigureSpec::kSize / (vp.hi.x - vp.lo.x);
  auto px = [&](Vec2 p) {
    return Vec2{(p.x - vp.lo.x) * scale, FigureSpec::kSize - (p.y - vp.lo.y) * scale};
  };
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
         "viewBox=\"0 0 1000 1000\">\n";
  if (!fig.title.empty()) out += "  <title>" + detail::escape_xml(fig.title) + "</title>\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n";
  for (const auto& c : fig.curves) {
    if (c.points.empty()) continue;
    out += "  <polyline fill=\"none\" stroke=\"" + c.stroke + "\" stroke-width=\"" + detail::fmt(c.width) + "\"";
    if (!c.dash.empty()) out += " stroke-dasharray=\"" + c.dash + "\"";
    if (!c.label.empty()) out += " data-label=\"" + detail::escape_xml(c.label) + "\"";
    out += " points=\"";
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const Vec2 q = px(c.points[i]);
      if (i > 0) out += ' ';
      out += detail::fmt(q.x) + "," + detail::fmt(q.y);
    }
    out += "\"/>\n";
  }
  for (const auto& m : fig.markers) {
    const Vec2 q = px(m.at);
    const std::string x = detail::fmt(q.x), y = detail::fmt(q.y);
    const std::string label = m.label.empty() ? "" : " data-label=\"" + detail::escape_xml(m.label) + "\"";
    switch (m.kind) {
      case MarkerKind::cusp:
        out += "  <circle class=\"cusp\" cx=\"" + x + "\" cy=\"" + y + "\" r=\"6\" fill=\"#d62728\"" + label + "/>\n";
        break;
      case MarkerKind::double_point:
        out += "  <rect class=\"double-point\" x=\"" + detail::fmt(q.x - 6) + "\" y=\"" + detail::fmt(q.y - 6) +
               "\" width=\"12\" height=\"12\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2.000\"" + label + "/>\n";
        break;
      case MarkerKind::point:
        out += "  <circle class=\"point\" cx=\"" + x + "\" cy=\"" + y + "\" r=\"4\" fill=\"#000000\"" + label + "/>\n";
        break;
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace evokit
