#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "vec2.hpp"

namespace evokit {

/// Value and first three derivatives of an interpolant at one abscissa.
template <class T>
struct Jet {
  T value{};
  T d1{};
  T d2{};
  T d3{};
};

/// Quintic Hermite interpolation on [x0, x0 + h] from value, first and second
/// derivative at both ends. Joining segments this way gives a C2 interpolant.
template <class T>
Jet<T> quintic_hermite(double h, double u, const T& p0, const T& v0, const T& a0, const T& p1, const T& v1,
                       const T& a1) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  // Basis polynomials and their u-derivatives.
  const std::array<double, 6> b{1 - 10 * u3 + 15 * u4 - 6 * u5, u - 6 * u3 + 8 * u4 - 3 * u5,
                                0.5 * (u2 - 3 * u3 + 3 * u4 - u5), 10 * u3 - 15 * u4 + 6 * u5,
                                -4 * u3 + 7 * u4 - 3 * u5,           0.5 * (u3 - 2 * u4 + u5)};
  const std::array<double, 6> b1{-30 * u2 + 60 * u3 - 30 * u4, 1 - 18 * u2 + 32 * u3 - 15 * u4,
                                 0.5 * (2 * u - 9 * u2 + 12 * u3 - 5 * u4), 30 * u2 - 60 * u3 + 30 * u4,
                                 -12 * u2 + 28 * u3 - 15 * u4,             0.5 * (3 * u2 - 8 * u3 + 5 * u4)};
  const std::array<double, 6> b2{-60 * u + 180 * u2 - 120 * u3, -36 * u + 96 * u2 - 60 * u3,
                                 0.5 * (2 - 18 * u + 36 * u2 - 20 * u3), 60 * u - 180 * u2 + 120 * u3,
                                 -24 * u + 84 * u2 - 60 * u3,           0.5 * (6 * u - 24 * u2 + 20 * u3)};
  const std::array<double, 6> b3{-60 + 360 * u - 360 * u2, -36 + 192 * u - 180 * u2, 0.5 * (-18 + 72 * u - 60 * u2),
                                 60 - 360 * u + 360 * u2,  -24 + 168 * u - 180 * u2, 0.5 * (6 - 48 * u + 60 * u2)};
  const T q0 = p0, q1 = h * v0, q2 = (h * h) * a0, q3 = p1, q4 = h * v1, q5 = (h * h) * a1;
  auto combine = [&](const std::array<double, 6>& w) {
    return w[0] * q0 + w[1] * q1 + w[2] * q2 + w[3] * q3 + w[4] * q4 + w[5] * q5;
  };
  return {combine(b), combine(b1) / h, combine(b2) / (h * h), combine(b3) / (h * h * h)};
}

/// Cubic Hermite interpolation on [x0, x0 + h]; returns value and first derivative.
inline std::array<double, 2> cubic_hermite(double h, double u, double p0, double v0, double p1, double v1) {
  const double u2 = u * u, u3 = u2 * u;
  const double value = (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * h * v0 + (-2 * u3 + 3 * u2) * p1 +
                       (u3 - u2) * h * v1;
  const double slope =
      ((6 * u2 - 6 * u) * p0 + (3 * u2 - 4 * u + 1) * h * v0 + (-6 * u2 + 6 * u) * p1 + (3 * u2 - 2 * u) * h * v1) / h;
  return {value, slope};
}

/// Index i of the segment [xs[i], xs[i+1]] containing x, clamped to the ends.
inline std::size_t locate_segment(std::span<const double> xs, double x) {
  if (xs.size() < 2) return 0;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - xs.begin()) - 1));
  return std::min(i, xs.size() - 2);
}

/// Not-a-knot cubic spline through (xs[i], ys[i]) with strictly increasing xs;
/// natural ends when there are only three nodes.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    m_.assign(n, 0.0);
    if (n < 3) return;
    // Second-derivative system for m[1..n-2]. With four or more nodes the end
    // values follow from not-a-knot conditions (m linear across the first and
    // last interior knot), folded into the first and last rows.
    const std::size_t k = n - 2;
    std::vector<double> sub(k), diag(k), sup(k), rhs(k);
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t i = r + 1;
      const double h0 = xs_[i] - xs_[i - 1];
      const double h1 = xs_[i + 1] - xs_[i];
      sub[r] = h0;
      diag[r] = 2.0 * (h0 + h1);
      sup[r] = h1;
      rhs[r] = 6.0 * ((ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0);
    }
    if (n >= 4) {
      const double h0 = xs_[1] - xs_[0], h1 = xs_[2] - xs_[1];
      diag[0] += h0 + h0 * h0 / h1;
      sup[0] -= h0 * h0 / h1;
      const double g0 = xs_[n - 1] - xs_[n - 2], g1 = xs_[n - 2] - xs_[n - 3];
      diag[k - 1] += g0 + g0 * g0 / g1;
      sub[k - 1] -= g0 * g0 / g1;
    }
    for (std::size_t r = 1; r < k; ++r) {
      const double w = sub[r] / diag[r - 1];
      diag[r] -= w * sup[r - 1];
      rhs[r] -= w * rhs[r - 1];
    }
    m_[k] = rhs[k - 1] / diag[k - 1];
    for (std::size_t r = k - 1; r-- > 0;) m_[r + 1] = (rhs[r] - sup[r] * m_[r + 2]) / diag[r];
    if (n >= 4) {
      const double h0 = xs_[1] - xs_[0], h1 = xs_[2] - xs_[1];
      m_[0] = m_[1] + (m_[1] - m_[2]) * h0 / h1;
      const double g0 = xs_[n - 1] - xs_[n - 2], g1 = xs_[n - 2] - xs_[n - 3];
      m_[n - 1] = m_[n - 2] + (m_[n - 2] - m_[n - 3]) * g0 / g1;
    }
  }

  Jet<double> operator()(double x) const {
    const std::size_t i = locate_segment(xs_, x);
    const double h = xs_[i + 1] - xs_[i];
    const double a = (xs_[i + 1] - x) / h;
    const double b = (x - xs_[i]) / h;
    const double m0 = m_[i], m1 = m_[i + 1];
    Jet<double> j;
    j.value = a * ys_[i] + b * ys_[i + 1] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
    j.d1 = (ys_[i + 1] - ys_[i]) / h - (3 * a * a - 1) * h * m0 / 6.0 + (3 * b * b - 1) * h * m1 / 6.0;
    j.d2 = a * m0 + b * m1;
    j.d3 = (m1 - m0) / h;
    return j;
  }

 private:
  std::vector<double> xs_, ys_, m_;
};

/// Derivative at xs[j] of the local polynomial through up to `width` nodes
/// centred on j (shifted inward at the ends). Nodes may be non-uniform.
inline double local_polynomial_derivative(std::span<const double> xs, std::span<const double> ys, std::size_t j,
                                          std::size_t width = 5) {
  const std::size_t n = xs.size();
  width = std::min(width, n);
  std::size_t lo = j >= width / 2 ? j - width / 2 : 0;
  if (lo + width > n) lo = n - width;
  double result = 0.0;
  for (std::size_t k = lo; k < lo + width; ++k) {
    double weight;
    if (k == j) {
      weight = 0.0;
      for (std::size_t m = lo; m < lo + width; ++m) {
        if (m != j) weight += 1.0 / (xs[j] - xs[m]);
      }
    } else {
      weight = 1.0 / (xs[k] - xs[j]);
      for (std::size_t m = lo; m < lo + width; ++m) {
        if (m != j && m != k) weight *= (xs[j] - xs[m]) / (xs[k] - xs[m]);
      }
    }
    result += weight * ys[k];
  }
  return result;
}

}  // namespace evokit
