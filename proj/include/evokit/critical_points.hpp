#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "arc_curve.hpp"

namespace evokit {

/// Zeros of R' located on an ArcCurve.
struct CriticalPoints {
  std::vector<double> extrema;      ///< sign changes of R' (vertices; cusps of the evolute)
  std::vector<double> inflections;  ///< isolated zeros of R' without sign change
  std::vector<std::pair<double, double>> plateaus;  ///< runs where |R'| stays below the zero threshold

  /// Sorted union of extrema and inflections.
  std::vector<double> points() const {
    std::vector<double> all = extrema;
    all.insert(all.end(), inflections.begin(), inflections.end());
    std::sort(all.begin(), all.end());
    return all;
  }

  /// R strictly monotone on the whole curve.
  bool monotone() const { return extrema.empty() && plateaus.empty(); }
  bool empty() const { return extrema.empty() && inflections.empty() && plateaus.empty(); }
  bool operator==(const CriticalPoints&) const = default;
};

struct CriticalPointOptions {
  double zero_threshold = 1e-10;  ///< |R'| at or below this counts as zero
  double tolerance = 1e-10;       ///< bisection width in s
  int plateau_nodes = 4;          ///< zero runs spanning more grid steps are plateaus
};

namespace detail {

inline double bisect_sign_change(const ArcCurve& ac, double lo, double hi, double f_lo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = ac.dradius_at(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section minimisation of |R'| on [lo, hi].
inline std::pair<double, double> minimise_abs_dradius(const ArcCurve& ac, double lo, double hi, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = std::abs(ac.dradius_at(x1)), f2 = std::abs(ac.dradius_at(x2));
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = std::abs(ac.dradius_at(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = std::abs(ac.dradius_at(x2));
    }
  }
  return f1 < f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace detail

/// Finds where R' vanishes. Sign changes between nodes are refined by bisection
/// on the interpolant; node runs with |R'| below the zero threshold are either
/// isolated zeros (at most `plateau_nodes` grid steps wide) or plateaus.
/// Throws ZeroCurvature if the curvature gate fails at any node.
inline CriticalPoints critical_points_of_R(const ArcCurve& ac, const CriticalPointOptions& opts = {}) {
  const std::size_t n = ac.size();
  std::vector<double> dr(n);
  std::vector<int> sign(n);
  for (std::size_t i = 0; i < n; ++i) {
    dr[i] = ac.dradius_at_node(i);
    sign[i] = std::abs(dr[i]) <= opts.zero_threshold ? 0 : (dr[i] > 0 ? 1 : -1);
  }
  const auto s = ac.s();
  CriticalPoints out;

  std::size_t i = 0;
  while (i < n) {
    if (sign[i] != 0) {
      // Sign change strictly between two nodes.
      if (i + 1 < n && sign[i + 1] != 0 && sign[i + 1] != sign[i]) {
        out.extrema.push_back(detail::bisect_sign_change(ac, s[i], s[i + 1], dr[i], opts.tolerance));
      } else if (i > 0 && i + 1 < n && sign[i - 1] == sign[i] && sign[i + 1] == sign[i] &&
                 std::abs(dr[i]) < std::abs(dr[i - 1]) && std::abs(dr[i]) < std::abs(dr[i + 1])) {
        // Local minimum of |R'|: R' may touch zero between nodes.
        const auto [where, value] = detail::minimise_abs_dradius(ac, s[i - 1], s[i + 1], opts.tolerance);
        if (value <= opts.zero_threshold) out.inflections.push_back(where);
      }
      ++i;
      continue;
    }
    std::size_t q = i;
    while (q + 1 < n && sign[q + 1] == 0) ++q;
    if (static_cast<int>(q - i) > opts.plateau_nodes) {
      out.plateaus.emplace_back(s[i], s[q]);
    } else if (i > 0 && q + 1 < n) {
      std::size_t best = i;
      for (std::size_t k = i; k <= q; ++k) {
        if (std::abs(dr[k]) < std::abs(dr[best]) ||
            (std::abs(dr[k]) == std::abs(dr[best]) && 2 * k <= i + q)) {
          best = k;
        }
      }
      (sign[i - 1] != sign[q + 1] ? out.extrema : out.inflections).push_back(s[best]);
    }
    i = q + 1;
  }
  std::sort(out.extrema.begin(), out.extrema.end());
  std::sort(out.inflections.begin(), out.inflections.end());
  return out;
}

}  // namespace evokit
