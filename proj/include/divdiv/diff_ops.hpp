#pragma once

#include "divdiv/poly.hpp"

namespace divdiv {

// Exact differential operators on polynomial fields. Output degree is the
// input degree minus the operator order; first-order operators on degree-0
// input return the zero polynomial of degree 0.

inline VectorPoly2D grad(const Poly2D& p) { return {p.dx(), p.dy()}; }

inline SymTensorPoly2D hess(const Poly2D& p) {
  const Poly2D px = p.dx();
  return {px.dx(), px.dy(), p.dy().dy()};
}

/// curl phi = (d2 phi, -d1 phi).
inline VectorPoly2D curl_scalar(const Poly2D& p) { return {p.dy(), -1.0 * p.dx()}; }

/// Row-wise curl of v, symmetrized.
inline SymTensorPoly2D sym_curl(const VectorPoly2D& v) {
  // curl v = [[d2 v1, -d1 v1], [d2 v2, -d1 v2]]
  return {v.x.dy(), 0.5 * (v.y.dy() - v.x.dx()), -1.0 * v.y.dx()};
}

/// Symmetric gradient.
inline SymTensorPoly2D def(const VectorPoly2D& v) { return {v.x.dx(), 0.5 * (v.x.dy() + v.y.dx()), v.y.dy()}; }

inline Poly2D div(const VectorPoly2D& v) { return v.x.dx() + v.y.dy(); }

/// rot v = d1 v2 - d2 v1.
inline Poly2D rot(const VectorPoly2D& v) { return v.y.dx() - v.x.dy(); }

/// Row-wise divergence.
inline VectorPoly2D div(const SymTensorPoly2D& t) { return {t.xx.dx() + t.xy.dy(), t.xy.dx() + t.yy.dy()}; }

inline Poly2D divdiv(const SymTensorPoly2D& t) {
  return t.xx.dx().dx() + 2.0 * t.xy.dx().dy() + t.yy.dy().dy();
}

/// Row-wise rot.
inline VectorPoly2D rot(const SymTensorPoly2D& t) { return {t.xy.dx() - t.xx.dy(), t.yy.dx() - t.xy.dy()}; }

inline Poly2D rotrot(const SymTensorPoly2D& t) { return rot(rot(t)); }

/// curl curl v = A^T hess(v) A.
inline SymTensorPoly2D curlcurl(const Poly2D& p) {
  const SymTensorPoly2D h = hess(p);
  return {h.yy, -1.0 * h.xy, h.xx};
}

/// Entrywise A^T tau A.
inline SymTensorPoly2D conjugate_A(const SymTensorPoly2D& t) { return {t.yy, -1.0 * t.xy, t.xx}; }

/// A v.
inline VectorPoly2D rotate_A(const VectorPoly2D& v) { return {-1.0 * v.y, v.x}; }
/// A^T v.
inline VectorPoly2D rotate_AT(const VectorPoly2D& v) { return {v.y, -1.0 * v.x}; }

/// Directional derivative along a constant vector.
inline Poly2D directional(const Poly2D& p, const Vec2& d) { return d.x() * p.dx() + d.y() * p.dy(); }

/// n^T tau n (normal bending moment).
inline Poly2D normal_normal(const SymTensorPoly2D& t, const Vec2& n) { return t.sandwich(n, n); }

/// d_t(t^T tau n) + n^T div tau (effective transverse shear), with t = A n.
inline Poly2D effective_shear(const SymTensorPoly2D& t, const Vec2& n) {
  const Vec2 tn = rotate_A(n);
  return directional(t.sandwich(tn, n), tn) + div(t).dot(n);
}

}  // namespace divdiv
