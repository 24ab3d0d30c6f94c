#pragma once

#include "divdiv/diff_ops.hpp"

namespace divdiv {

// Koszul-type multiplication operators. The variable x is the physical offset
// from the frame center.

/// q -> x x^T q.
inline SymTensorPoly2D xxT_mul(const Poly2D& q) {
  const Frame& f = q.frame();
  const Poly2D x1 = Poly2D::coordinate(f, 0), x2 = Poly2D::coordinate(f, 1);
  return {x1 * x1 * q, x1 * x2 * q, x2 * x2 * q};
}

/// q -> x^perp (x^perp)^T q.
inline SymTensorPoly2D xperp_xperpT_mul(const Poly2D& q) {
  const Frame& f = q.frame();
  const Poly2D x1 = Poly2D::coordinate(f, 0), x2 = Poly2D::coordinate(f, 1);
  return {x2 * x2 * q, -1.0 * (x1 * x2 * q), x1 * x1 * q};
}

/// tau -> tau x^perp, with x^perp = (x2, -x1).
inline VectorPoly2D xperp_mul(const SymTensorPoly2D& t) {
  const Frame& f = t.frame();
  const Poly2D x1 = Poly2D::coordinate(f, 0), x2 = Poly2D::coordinate(f, 1);
  return {t.xx * x2 - t.xy * x1, t.xy * x2 - t.yy * x1};
}

/// v -> sym(x^perp (x) v) = (x^perp v^T + v (x^perp)^T) / 2.
inline SymTensorPoly2D sym_xperp_outer(const VectorPoly2D& v) {
  const Frame& f = v.frame();
  const Poly2D x1 = Poly2D::coordinate(f, 0), x2 = Poly2D::coordinate(f, 1);
  return {x2 * v.x, 0.5 * (x2 * v.y - x1 * v.x), -1.0 * (x1 * v.y)};
}

/// v -> sym(x (x) v).
inline SymTensorPoly2D sym_x_outer(const VectorPoly2D& v) {
  const Frame& f = v.frame();
  const Poly2D x1 = Poly2D::coordinate(f, 0), x2 = Poly2D::coordinate(f, 1);
  return {x1 * v.x, 0.5 * (x1 * v.y + x2 * v.x), x2 * v.y};
}

/// tau -> x^T tau x.
inline Poly2D xtx_sandwich(const SymTensorPoly2D& t) {
  const Frame& f = t.frame();
  const Poly2D x1 = Poly2D::coordinate(f, 0), x2 = Poly2D::coordinate(f, 1);
  return x1 * x1 * t.xx + 2.0 * (x1 * x2 * t.xy) + x2 * x2 * t.yy;
}

/// v -> v(0) + (div v)(0) x / 2, evaluated at the frame center.
inline VectorPoly2D pi_RT(const VectorPoly2D& v) {
  const Frame& f = v.frame();
  const Vec2 v0 = v(f.center);
  const double d0 = div(v)(f.center);
  const Poly2D x1 = Poly2D::coordinate(f, 0), x2 = Poly2D::coordinate(f, 1);
  return {Poly2D::constant(f, v0.x()) + (0.5 * d0) * x1, Poly2D::constant(f, v0.y()) + (0.5 * d0) * x2};
}

/// v -> v(0) + x^T grad v(0).
inline Poly2D pi_1(const Poly2D& p) {
  const Frame& f = p.frame();
  const Poly2D x1 = Poly2D::coordinate(f, 0), x2 = Poly2D::coordinate(f, 1);
  return Poly2D::constant(f, p(f.center)) + p.dx()(f.center) * x1 + p.dy()(f.center) * x2;
}

}  // namespace divdiv
