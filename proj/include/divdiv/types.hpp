#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace divdiv {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Symmetric 2x2 tensor stored as (xx, xy, yy).
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  Sym2() = default;
  Sym2(double a, double b, double c) : xx(a), xy(b), yy(c) {}

  static Sym2 from_matrix(const Mat2& m) { return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)}; }

  Mat2 matrix() const {
    Mat2 m;
    m << xx, xy, xy, yy;
    return m;
  }

  double operator[](int i) const { return i == 0 ? xx : (i == 1 ? xy : yy); }
  double& operator[](int i) { return i == 0 ? xx : (i == 1 ? xy : yy); }

  Sym2& operator+=(const Sym2& o) {
    xx += o.xx;
    xy += o.xy;
    yy += o.yy;
    return *this;
  }
  Sym2& operator-=(const Sym2& o) {
    xx -= o.xx;
    xy -= o.xy;
    yy -= o.yy;
    return *this;
  }
  friend Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
  friend Sym2 operator-(Sym2 a, const Sym2& b) { return a -= b; }
  friend Sym2 operator*(double s, const Sym2& a) { return {s * a.xx, s * a.xy, s * a.yy}; }

  /// Frobenius inner product.
  double dot(const Sym2& o) const { return xx * o.xx + 2.0 * xy * o.xy + yy * o.yy; }
  double norm2() const { return dot(*this); }

  /// a^T tau b
  double sandwich(const Vec2& a, const Vec2& b) const {
    return a.x() * (xx * b.x() + xy * b.y()) + a.y() * (xy * b.x() + yy * b.y());
  }
};

/// The quarter-turn A = [[0,-1],[1,0]]; t = A n.
inline Mat2 rotation_A() {
  Mat2 a;
  a << 0.0, -1.0, 1.0, 0.0;
  return a;
}

inline Vec2 rotate_A(const Vec2& n) { return {-n.y(), n.x()}; }
inline Vec2 rotate_AT(const Vec2& t) { return {t.y(), -t.x()}; }

/// x^perp = (x2, -x1) = A^T x.
inline Vec2 perp(const Vec2& x) { return rotate_AT(x); }

/// A^T tau A. For symmetric tau this swaps xx/yy and negates xy; it is an involution.
inline Sym2 conjugate_A(const Sym2& t) { return {t.yy, -t.xy, t.xx}; }

struct Triangle {
  std::array<Vec2, 3> v;

  double signed_area() const {
    const Vec2 a = v[1] - v[0];
    const Vec2 b = v[2] - v[0];
    return 0.5 * (a.x() * b.y() - a.y() * b.x());
  }
  double area() const { return std::abs(signed_area()); }
  Vec2 centroid() const { return (v[0] + v[1] + v[2]) / 3.0; }
  double diameter() const {
    return std::max({(v[1] - v[0]).norm(), (v[2] - v[1]).norm(), (v[0] - v[2]).norm()});
  }
  /// Local edge i joins v[(i+1)%3] -> v[(i+2)%3]; counterclockwise for positive area.
  std::array<Vec2, 2> edge(int i) const { return {v[(i + 1) % 3], v[(i + 2) % 3]}; }
};

/// Error raised when a numerical certificate (rank, duality, residual) fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace divdiv
