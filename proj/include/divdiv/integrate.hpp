#pragma once

#include "divdiv/poly.hpp"
#include "divdiv/quadrature.hpp"

namespace divdiv {

inline double integrate_triangle(const Poly2D& p, const Triangle& k) {
  return integrate_on_triangle(k, p.degree(), [&](const Vec2& x) { return p(x); });
}

/// Integral over the segment a->b with respect to arclength.
inline double integrate_edge(const Poly2D& p, const Vec2& a, const Vec2& b) {
  return integrate_on_segment(a, b, p.degree(), [&](const Vec2& x) { return p(x); });
}

inline double inner_triangle(const Poly2D& p, const Poly2D& q, const Triangle& k) {
  return integrate_on_triangle(k, p.degree() + q.degree(), [&](const Vec2& x) { return p(x) * q(x); });
}

/// Frobenius L2 inner product on a triangle.
inline double inner_triangle(const SymTensorPoly2D& s, const SymTensorPoly2D& t, const Triangle& k) {
  return integrate_on_triangle(k, s.degree() + t.degree(), [&](const Vec2& x) { return s(x).dot(t(x)); });
}

inline double inner_triangle(const VectorPoly2D& v, const VectorPoly2D& w, const Triangle& k) {
  return integrate_on_triangle(k, v.degree() + w.degree(), [&](const Vec2& x) { return v(x).dot(w(x)); });
}

/// Integral over [0,1] of a univariate polynomial.
inline double integrate_unit(const Poly1D& p) {
  double s = 0.0;
  for (const auto& q : gauss_legendre_01(p.degree())) s += q.w * p(q.x);
  return s;
}

/// Moments int_0^1 p(u) P_j(2u-1) du for j = 0..count-1.
inline Eigen::VectorXd legendre_moments(const Poly1D& p, int count) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(std::max(count, 0));
  if (count <= 0) return m;
  for (const auto& q : gauss_legendre_01(p.degree() + count - 1)) {
    const double v = q.w * p(q.x);
    for (int j = 0; j < count; ++j) m[j] += v * legendre(j, 2.0 * q.x - 1.0);
  }
  return m;
}

/// Gram matrix of a tensor family under the L2(K) inner product.
template <class T>
Eigen::MatrixXd gram_matrix(const std::vector<T>& basis, const Triangle& k) {
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = inner_triangle(basis[i], basis[j], k);
  return g;
}

}  // namespace divdiv
