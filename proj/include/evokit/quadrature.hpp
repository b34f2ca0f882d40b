#pragma once

#include <cmath>
#include <type_traits>
#include <utility>

#include "error.hpp"
#include "vec2.hpp"

namespace evokit {

namespace detail {

template <class F, class T>
T simpson_recurse(const F& f, double a, double b, T fa, T fm, T fb, T whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  const double h = b - a;
  const T left = (h / 12.0) * (fa + 4.0 * flm + fm);
  const T right = (h / 12.0) * (fm + 4.0 * frm + fb);
  const T delta = left + right - whole;
  // The last clause stops refinement once the estimate is at rounding level.
  if (depth <= 0 || magnitude(delta) <= 15.0 * tol || !(m > a && m < b) ||
      magnitude(delta) <= 1e-14 * magnitude(left + right)) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of a scalar or Vec2 valued integrand.
///
/// Returns the signed integral from a to b (b < a is allowed). The tolerance is
/// absolute. The interval is pre-split into `initial_panels` panels so that
/// integrands with features narrower than the interval are not sampled only at
/// three points.
template <class F>
auto adaptive_simpson(const F& f, double a, double b, double abs_tol, int initial_panels = 8, int max_depth = 48) {
  using T = std::decay_t<decltype(f(a))>;
  if (a == b) return T{} * 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, abs_tol, initial_panels, max_depth);
  T total = T{} * 0.0;
  const double width = (b - a) / initial_panels;
  const double panel_tol = abs_tol / initial_panels;
  for (int p = 0; p < initial_panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == initial_panels) ? b : a + (p + 1) * width;
    const T flo = f(lo);
    const T fhi = f(hi);
    const T fmid = f(0.5 * (lo + hi));
    const T whole = ((hi - lo) / 6.0) * (flo + 4.0 * fmid + fhi);
    total += detail::simpson_recurse(f, lo, hi, flo, fmid, fhi, whole, panel_tol, max_depth);
  }
  return total;
}

}  // namespace evokit
