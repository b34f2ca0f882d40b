#pragma once

#include <vector>

#include "evokit/evokit.hpp"
#include "oracles.hpp"

inline oracle::P op(evokit::Vec2 v) { return {v.x, v.y}; }

template <class Range>
std::vector<oracle::P> ops(const Range& pts) {
  std::vector<oracle::P> out;
  for (const auto& v : pts) out.push_back(op(v));
  return out;
}

inline evokit::ArcCurve arc(const evokit::CurveSource& src, evokit::ReparamOptions opts = {}) {
  return evokit::build_arc_curve(src, opts);
}
