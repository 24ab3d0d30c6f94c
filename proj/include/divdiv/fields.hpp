#pragma once

#include <array>
#include <functional>
#include <stdexcept>

#include "divdiv/diff_ops.hpp"

namespace divdiv {

/// Smooth symmetric tensor field with optional first derivatives.
struct SymTensorField {
  std::function<Sym2(const Vec2&)> value;
  std::function<Sym2(const Vec2&)> dx;
  std::function<Sym2(const Vec2&)> dy;

  bool has_derivatives() const { return static_cast<bool>(dx) && static_cast<bool>(dy); }
};

/// Smooth vector field with Jacobian (J(i,j) = d_j v_i) and per-component Hessians.
struct VectorField {
  std::function<Vec2(const Vec2&)> value;
  std::function<Mat2(const Vec2&)> jacobian;
  std::function<std::array<Mat2, 2>(const Vec2&)> hessian;
};

/// Smooth scalar field with derivatives through order two.
struct ScalarField {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;
  std::function<Mat2(const Vec2&)> hessian;
};

inline SymTensorField as_field(const SymTensorPoly2D& t) {
  const SymTensorPoly2D tx{t.xx.dx(), t.xy.dx(), t.yy.dx()};
  const SymTensorPoly2D ty{t.xx.dy(), t.xy.dy(), t.yy.dy()};
  return {[t](const Vec2& x) { return t(x); }, [tx](const Vec2& x) { return tx(x); },
          [ty](const Vec2& x) { return ty(x); }};
}

inline VectorField as_field(const VectorPoly2D& v) {
  const VectorPoly2D vx{v.x.dx(), v.y.dx()}, vy{v.x.dy(), v.y.dy()};
  const SymTensorPoly2D h1 = hess(v.x), h2 = hess(v.y);
  return {[v](const Vec2& x) { return v(x); },
          [vx, vy](const Vec2& x) {
            Mat2 j;
            j.col(0) = vx(x);
            j.col(1) = vy(x);
            return j;
          },
          [h1, h2](const Vec2& x) { return std::array<Mat2, 2>{h1(x).matrix(), h2(x).matrix()}; }};
}

inline ScalarField as_field(const Poly2D& p) {
  const VectorPoly2D g = grad(p);
  const SymTensorPoly2D h = hess(p);
  return {[p](const Vec2& x) { return p(x); }, [g](const Vec2& x) { return g(x); },
          [h](const Vec2& x) { return h(x).matrix(); }};
}

/// sym curl of a smooth vector field; needs the Hessian for derivatives.
inline SymTensorField sym_curl(const VectorField& v) {
  SymTensorField out;
  out.value = [v](const Vec2& x) {
    const Mat2 j = v.jacobian(x);
    return Sym2(j(0, 1), 0.5 * (j(1, 1) - j(0, 0)), -j(1, 0));
  };
  if (v.hessian) {
    auto d = [v](int dir) {
      return [v, dir](const Vec2& x) {
        const auto h = v.hessian(x);
        // d_dir of (d2 v1, (d2 v2 - d1 v1)/2, -d1 v2)
        return Sym2(h[0](1, dir), 0.5 * (h[1](1, dir) - h[0](0, dir)), -h[1](0, dir));
      };
    };
    out.dx = d(0);
    out.dy = d(1);
  }
  return out;
}

/// A^T tau A of a smooth field.
inline SymTensorField conjugate_A(const SymTensorField& t) {
  SymTensorField out;
  out.value = [t](const Vec2& x) { return conjugate_A(t.value(x)); };
  if (t.dx) out.dx = [t](const Vec2& x) { return conjugate_A(t.dx(x)); };
  if (t.dy) out.dy = [t](const Vec2& x) { return conjugate_A(t.dy(x)); };
  return out;
}

}  // namespace divdiv
