#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "divdiv/types.hpp"

namespace divdiv {

struct QuadPoint1D {
  double x;
  double w;
};

struct QuadPoint2D {
  Vec2 x;
  double w;
};

namespace detail {

// Gauss-Legendre nodes on [0,1] via Newton iteration on P_n.
inline std::vector<QuadPoint1D> compute_gauss_legendre(int n) {
  std::vector<QuadPoint1D> pts(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? z : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (z * pn - pnm1) / (z * z - 1.0);
      const double dz = pn / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at converged node
    double p0 = 1.0, p1 = z;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    const double pn = (n == 1) ? z : p1;
    const double pnm1 = (n == 1) ? 1.0 : p0;
    dp = n * (z * pn - pnm1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    pts[n - 1 - i] = {0.5 * (z + 1.0), 0.5 * w};
  }
  return pts;
}

}  // namespace detail

/// Gauss-Legendre rule on [0,1] exact for polynomials of degree <= `degree`.
inline const std::vector<QuadPoint1D>& gauss_legendre_01(int degree) {
  static std::mutex mtx;
  static std::map<int, std::vector<QuadPoint1D>> cache;
  const int n = std::max(1, (degree + 2) / 2);
  std::lock_guard lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

/// Rule on the reference triangle {x,y >= 0, x+y <= 1} exact to `degree`,
/// built from Gauss-Legendre through the collapsed-square map.
inline const std::vector<QuadPoint2D>& reference_triangle_rule(int degree) {
  static std::mutex mtx;
  static std::map<int, std::vector<QuadPoint2D>> cache;
  degree = std::max(degree, 0);
  {
    std::lock_guard lock(mtx);
    if (auto it = cache.find(degree); it != cache.end()) return it->second;
  }
  // The collapse Jacobian (1-u) adds one degree in u.
  const auto& gu = gauss_legendre_01(degree + 1);
  const auto& gv = gauss_legendre_01(degree);
  std::vector<QuadPoint2D> rule;
  rule.reserve(gu.size() * gv.size());
  for (const auto& a : gu)
    for (const auto& b : gv) rule.push_back({Vec2(a.x, b.x * (1.0 - a.x)), a.w * b.w * (1.0 - a.x)});
  std::lock_guard lock(mtx);
  return cache.emplace(degree, std::move(rule)).first->second;
}

/// Physical quadrature points on triangle `t` exact to `degree`.
inline std::vector<QuadPoint2D> triangle_rule(const Triangle& t, int degree) {
  const auto& ref = reference_triangle_rule(degree);
  const Vec2 e1 = t.v[1] - t.v[0];
  const Vec2 e2 = t.v[2] - t.v[0];
  const double jac = 2.0 * t.area();
  std::vector<QuadPoint2D> out;
  out.reserve(ref.size());
  for (const auto& q : ref) out.push_back({t.v[0] + q.x.x() * e1 + q.x.y() * e2, q.w * jac});
  return out;
}

template <class F>
double integrate_on_triangle(const Triangle& t, int degree, F&& f) {
  double s = 0.0;
  for (const auto& q : triangle_rule(t, degree)) s += q.w * f(q.x);
  return s;
}

/// Integral over the segment a->b (arclength measure) exact to `degree`.
template <class F>
double integrate_on_segment(const Vec2& a, const Vec2& b, int degree, F&& f) {
  const double len = (b - a).norm();
  double s = 0.0;
  for (const auto& q : gauss_legendre_01(degree)) s += q.w * f(Vec2(a + q.x * (b - a)));
  return s * len;
}

/// Legendre polynomial P_j at z in [-1,1].
inline double legendre(int j, double z) {
  if (j == 0) return 1.0;
  double p0 = 1.0, p1 = z;
  for (int i = 2; i <= j; ++i) {
    const double p2 = ((2.0 * i - 1.0) * z * p1 - (i - 1.0) * p0) / i;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace divdiv
