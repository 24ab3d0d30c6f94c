#pragma once

#include <algorithm>
#include <cassert>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "divdiv/types.hpp"

namespace divdiv {

/// Number of monomials of total degree <= m in two variables.
constexpr int dim_P(int m) { return m < 0 ? 0 : (m + 1) * (m + 2) / 2; }

/// Graded lexicographic index of xi^a eta^b.
constexpr int mono_index(int a, int b) { return dim_P(a + b - 1) + b; }

/// Frame of a centered, scaled monomial basis: xi = (x - center) / scale.
struct Frame {
  Vec2 center = Vec2::Zero();
  double scale = 1.0;

  Vec2 local(const Vec2& x) const { return (x - center) / scale; }
  bool operator==(const Frame& o) const { return center == o.center && scale == o.scale; }
};

inline Frame frame_of(const Triangle& t) { return {t.centroid(), t.diameter()}; }

/// Univariate polynomial in u in [0,1], monomial coefficients.
class Poly1D {
 public:
  Poly1D() : c_(Eigen::VectorXd::Zero(1)) {}
  explicit Poly1D(Eigen::VectorXd c) : c_(std::move(c)) {
    if (c_.size() == 0) c_ = Eigen::VectorXd::Zero(1);
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Eigen::VectorXd& coeffs() const { return c_; }

  double operator()(double u) const {
    double r = 0.0;
    for (int i = degree(); i >= 0; --i) r = r * u + c_[i];
    return r;
  }

  Poly1D derivative() const {
    if (degree() == 0) return Poly1D();
    Eigen::VectorXd d(degree());
    for (int i = 1; i <= degree(); ++i) d[i - 1] = i * c_[i];
    return Poly1D(d);
  }

  friend Poly1D operator+(const Poly1D& a, const Poly1D& b) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(std::max(a.c_.size(), b.c_.size()));
    c.head(a.c_.size()) += a.c_;
    c.head(b.c_.size()) += b.c_;
    return Poly1D(c);
  }
  friend Poly1D operator*(double s, const Poly1D& a) { return Poly1D(s * a.c_); }
  friend Poly1D operator*(const Poly1D& a, const Poly1D& b) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(a.c_.size() + b.c_.size() - 1);
    for (int i = 0; i < a.c_.size(); ++i)
      for (int j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly1D(c);
  }

  /// Coefficients in the shifted Legendre basis P_j(2u-1), j = 0..degree.
  Eigen::VectorXd legendre_coeffs() const;

 private:
  Eigen::VectorXd c_;
};

/// Scalar bivariate polynomial over a centered, scaled monomial basis.
class Poly2D {
 public:
  Poly2D() : Poly2D(Frame{}, 0) {}
  Poly2D(Frame f, int degree) : frame_(std::move(f)), deg_(degree), c_(Eigen::VectorXd::Zero(dim_P(degree))) {
    assert(degree >= 0);
  }
  Poly2D(Frame f, int degree, Eigen::VectorXd c) : frame_(std::move(f)), deg_(degree), c_(std::move(c)) {
    if (c_.size() != dim_P(deg_)) throw std::invalid_argument("Poly2D: coefficient length does not match degree");
  }

  static Poly2D constant(const Frame& f, double v) {
    Poly2D p(f, 0);
    p.c_[0] = v;
    return p;
  }
  static Poly2D monomial(const Frame& f, int a, int b, double coef = 1.0) {
    Poly2D p(f, a + b);
    p.c_[mono_index(a, b)] = coef;
    return p;
  }
  /// The physical coordinate x_i - center_i (= scale * xi_i) as a degree-1 polynomial.
  static Poly2D coordinate(const Frame& f, int i) {
    return i == 0 ? monomial(f, 1, 0, f.scale) : monomial(f, 0, 1, f.scale);
  }

  const Frame& frame() const { return frame_; }
  int degree() const { return deg_; }
  const Eigen::VectorXd& coeffs() const { return c_; }
  Eigen::VectorXd& coeffs() { return c_; }
  double coeff(int a, int b) const { return (a + b <= deg_) ? c_[mono_index(a, b)] : 0.0; }

  double operator()(const Vec2& x) const {
    const Vec2 z = frame_.local(x);
    double r = 0.0;
    // Horner in eta within each degree block is overkill; degrees here are small.
    double xa = 1.0;
    std::vector<double> yp(deg_ + 1, 1.0);
    for (int b = 1; b <= deg_; ++b) yp[b] = yp[b - 1] * z.y();
    for (int a = 0; a <= deg_; ++a) {
      for (int b = 0; a + b <= deg_; ++b) r += c_[mono_index(a, b)] * xa * yp[b];
      xa *= z.x();
    }
    return r;
  }

  /// Same polynomial, padded with zero coefficients up to degree m >= degree().
  Poly2D raised(int m) const {
    if (m < deg_) throw std::invalid_argument("Poly2D::raised: target degree below current degree");
    Poly2D p(frame_, m);
    p.c_.head(c_.size()) = c_;
    return p;
  }

  /// Physical partial derivative d/dx_i; degree drops by one (zero polynomial of degree 0 if constant).
  Poly2D derivative(int i) const {
    if (deg_ == 0) return Poly2D(frame_, 0);
    Poly2D d(frame_, deg_ - 1);
    for (int a = 0; a <= deg_; ++a)
      for (int b = 0; a + b <= deg_; ++b) {
        const double v = c_[mono_index(a, b)];
        if (i == 0 && a > 0) d.c_[mono_index(a - 1, b)] += a * v / frame_.scale;
        if (i == 1 && b > 0) d.c_[mono_index(a, b - 1)] += b * v / frame_.scale;
      }
    return d;
  }
  Poly2D dx() const { return derivative(0); }
  Poly2D dy() const { return derivative(1); }

  /// Restriction to the segment x(u) = a + u (b - a), u in [0,1].
  Poly1D restrict_to(const Vec2& a, const Vec2& b) const {
    const Vec2 za = frame_.local(a);
    const Vec2 dz = (b - a) / frame_.scale;
    const Poly1D xi(Eigen::Vector2d(za.x(), dz.x()));
    const Poly1D eta(Eigen::Vector2d(za.y(), dz.y()));
    std::vector<Poly1D> xp(deg_ + 1), yp(deg_ + 1);
    xp[0] = Poly1D(Eigen::VectorXd::Ones(1));
    yp[0] = xp[0];
    for (int j = 1; j <= deg_; ++j) {
      xp[j] = xp[j - 1] * xi;
      yp[j] = yp[j - 1] * eta;
    }
    Poly1D r(Eigen::VectorXd::Zero(deg_ + 1));
    for (int a_ = 0; a_ <= deg_; ++a_)
      for (int b_ = 0; a_ + b_ <= deg_; ++b_) {
        const double v = c_[mono_index(a_, b_)];
        if (v != 0.0) r = r + v * (xp[a_] * yp[b_]);
      }
    return r;
  }

  Poly2D& operator+=(const Poly2D& o) {
    check_frame(o);
    if (o.deg_ > deg_) *this = raised(o.deg_);
    c_.head(o.c_.size()) += o.c_;
    return *this;
  }
  Poly2D& operator-=(const Poly2D& o) { return *this += (-1.0) * o; }
  Poly2D& operator*=(double s) {
    c_ *= s;
    return *this;
  }
  friend Poly2D operator+(Poly2D a, const Poly2D& b) { return a += b; }
  friend Poly2D operator-(Poly2D a, const Poly2D& b) { return a -= b; }
  friend Poly2D operator*(double s, Poly2D a) { return a *= s; }
  friend Poly2D operator*(const Poly2D& p, const Poly2D& q) {
    p.check_frame(q);
    Poly2D r(p.frame_, p.deg_ + q.deg_);
    for (int a = 0; a <= p.deg_; ++a)
      for (int b = 0; a + b <= p.deg_; ++b) {
        const double v = p.c_[mono_index(a, b)];
        if (v == 0.0) continue;
        for (int c = 0; c <= q.deg_; ++c)
          for (int d = 0; c + d <= q.deg_; ++d) r.c_[mono_index(a + c, b + d)] += v * q.c_[mono_index(c, d)];
      }
    return r;
  }

  double max_abs_coeff() const { return c_.size() ? c_.cwiseAbs().maxCoeff() : 0.0; }

  /// Re-express in another frame (exact change of basis).
  Poly2D in_frame(const Frame& f) const {
    // xi_old = (x - c_old)/s_old = (s_new * xi_new + c_new - c_old) / s_old
    const Vec2 shift = (f.center - frame_.center) / frame_.scale;
    const double ratio = f.scale / frame_.scale;
    Poly2D xi_old(f, 1), eta_old(f, 1);
    xi_old.c_ << shift.x(), ratio, 0.0;
    eta_old.c_ << shift.y(), 0.0, ratio;
    std::vector<Poly2D> xp(deg_ + 1, constant(f, 1.0)), yp(deg_ + 1, constant(f, 1.0));
    for (int j = 1; j <= deg_; ++j) {
      xp[j] = xp[j - 1] * xi_old;
      yp[j] = yp[j - 1] * eta_old;
    }
    Poly2D r(f, deg_);
    for (int a = 0; a <= deg_; ++a)
      for (int b = 0; a + b <= deg_; ++b) {
        const double v = c_[mono_index(a, b)];
        if (v != 0.0) r += v * (xp[a] * yp[b]);
      }
    return r;
  }

  void check_frame(const Poly2D& o) const {
    if (!(frame_ == o.frame_)) throw std::invalid_argument("Poly2D: operands use different frames");
  }

 private:
  Frame frame_;
  int deg_;
  Eigen::VectorXd c_;
};

/// R^2-valued polynomial; both components share one frame.
struct VectorPoly2D {
  Poly2D x, y;

  VectorPoly2D() = default;
  VectorPoly2D(Poly2D a, Poly2D b) : x(std::move(a)), y(std::move(b)) {
    x.check_frame(y);
    const int m = std::max(x.degree(), y.degree());
    x = x.raised(m);
    y = y.raised(m);
  }
  VectorPoly2D(const Frame& f, int degree) : x(f, degree), y(f, degree) {}

  const Frame& frame() const { return x.frame(); }
  int degree() const { return x.degree(); }
  const Poly2D& operator[](int i) const { return i == 0 ? x : y; }
  Poly2D& operator[](int i) { return i == 0 ? x : y; }
  Vec2 operator()(const Vec2& p) const { return {x(p), y(p)}; }

  VectorPoly2D raised(int m) const { return {x.raised(m), y.raised(m)}; }
  friend VectorPoly2D operator+(const VectorPoly2D& a, const VectorPoly2D& b) { return {a.x + b.x, a.y + b.y}; }
  friend VectorPoly2D operator-(const VectorPoly2D& a, const VectorPoly2D& b) { return {a.x - b.x, a.y - b.y}; }
  friend VectorPoly2D operator*(double s, const VectorPoly2D& a) { return {s * a.x, s * a.y}; }

  /// Component dot product with a constant vector.
  Poly2D dot(const Vec2& n) const { return n.x() * x + n.y() * y; }
  double max_abs_coeff() const { return std::max(x.max_abs_coeff(), y.max_abs_coeff()); }
};

/// Symmetric-tensor-valued polynomial (xx, xy, yy); symmetry is structural.
struct SymTensorPoly2D {
  Poly2D xx, xy, yy;

  SymTensorPoly2D() = default;
  SymTensorPoly2D(Poly2D a, Poly2D b, Poly2D c) : xx(std::move(a)), xy(std::move(b)), yy(std::move(c)) {
    xx.check_frame(xy);
    xx.check_frame(yy);
    const int m = std::max({xx.degree(), xy.degree(), yy.degree()});
    xx = xx.raised(m);
    xy = xy.raised(m);
    yy = yy.raised(m);
  }
  SymTensorPoly2D(const Frame& f, int degree) : xx(f, degree), xy(f, degree), yy(f, degree) {}

  const Frame& frame() const { return xx.frame(); }
  int degree() const { return xx.degree(); }
  const Poly2D& operator[](int i) const { return i == 0 ? xx : (i == 1 ? xy : yy); }
  Poly2D& operator[](int i) { return i == 0 ? xx : (i == 1 ? xy : yy); }
  Sym2 operator()(const Vec2& p) const { return {xx(p), xy(p), yy(p)}; }

  SymTensorPoly2D raised(int m) const { return {xx.raised(m), xy.raised(m), yy.raised(m)}; }
  friend SymTensorPoly2D operator+(const SymTensorPoly2D& a, const SymTensorPoly2D& b) {
    return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy};
  }
  friend SymTensorPoly2D operator-(const SymTensorPoly2D& a, const SymTensorPoly2D& b) {
    return {a.xx - b.xx, a.xy - b.xy, a.yy - b.yy};
  }
  friend SymTensorPoly2D operator*(double s, const SymTensorPoly2D& a) { return {s * a.xx, s * a.xy, s * a.yy}; }

  /// a^T tau b as a scalar polynomial, for constant vectors a, b.
  Poly2D sandwich(const Vec2& a, const Vec2& b) const {
    return (a.x() * b.x()) * xx + (a.x() * b.y() + a.y() * b.x()) * xy + (a.y() * b.y()) * yy;
  }
  /// tau b (matrix-vector product with a constant vector).
  VectorPoly2D apply(const Vec2& b) const { return {b.x() * xx + b.y() * xy, b.x() * xy + b.y() * yy}; }

  double max_abs_coeff() const { return std::max({xx.max_abs_coeff(), xy.max_abs_coeff(), yy.max_abs_coeff()}); }
};

inline VectorPoly2D in_frame(const VectorPoly2D& v, const Frame& f) { return {v.x.in_frame(f), v.y.in_frame(f)}; }
inline SymTensorPoly2D in_frame(const SymTensorPoly2D& t, const Frame& f) {
  return {t.xx.in_frame(f), t.xy.in_frame(f), t.yy.in_frame(f)};
}

/// Flattened coefficients of a tensor polynomial raised to degree m: [xx; xy; yy].
inline Eigen::VectorXd flatten(const SymTensorPoly2D& t, int m) {
  const int n = dim_P(m);
  Eigen::VectorXd v(3 * n);
  for (int i = 0; i < 3; ++i) v.segment(i * n, n) = t[i].raised(m).coeffs();
  return v;
}
inline Eigen::VectorXd flatten(const VectorPoly2D& t, int m) {
  const int n = dim_P(m);
  Eigen::VectorXd v(2 * n);
  for (int i = 0; i < 2; ++i) v.segment(i * n, n) = t[i].raised(m).coeffs();
  return v;
}
inline SymTensorPoly2D unflatten_tensor(const Frame& f, int m, const Eigen::VectorXd& v) {
  const int n = dim_P(m);
  return {Poly2D(f, m, v.segment(0, n)), Poly2D(f, m, v.segment(n, n)), Poly2D(f, m, v.segment(2 * n, n))};
}
inline VectorPoly2D unflatten_vector(const Frame& f, int m, const Eigen::VectorXd& v) {
  const int n = dim_P(m);
  return {Poly2D(f, m, v.segment(0, n)), Poly2D(f, m, v.segment(n, n))};
}

/// All scaled monomials of degree <= m, graded lexicographic.
inline std::vector<Poly2D> monomial_basis(const Frame& f, int m) {
  std::vector<Poly2D> out;
  for (int d = 0; d <= m; ++d)
    for (int b = 0; b <= d; ++b) out.push_back(Poly2D::monomial(f, d - b, b));
  return out;
}

/// Homogeneous scaled monomials of exact degree d.
inline std::vector<Poly2D> homogeneous_basis(const Frame& f, int d) {
  std::vector<Poly2D> out;
  for (int b = 0; b <= d; ++b) out.push_back(Poly2D::monomial(f, d - b, b));
  return out;
}

/// Vector basis of P_m(R^2): first-component monomials, then second-component.
inline std::vector<VectorPoly2D> vector_monomial_basis(const Frame& f, int m) {
  std::vector<VectorPoly2D> out;
  const Poly2D zero(f, std::max(m, 0));
  for (const auto& p : monomial_basis(f, m)) out.push_back({p, zero});
  for (const auto& p : monomial_basis(f, m)) out.push_back({zero, p});
  return out;
}

/// Tensor basis of P_m(S): xx monomials, then xy, then yy.
inline std::vector<SymTensorPoly2D> tensor_monomial_basis(const Frame& f, int m) {
  std::vector<SymTensorPoly2D> out;
  for (int c = 0; c < 3; ++c)
    for (const auto& p : monomial_basis(f, m)) {
      SymTensorPoly2D t(f, m);
      t[c] = p.raised(m);
      out.push_back(t);
    }
  return out;
}

inline Eigen::VectorXd Poly1D::legendre_coeffs() const {
  // Solve the small triangular change of basis by sampling at Gauss points.
  const int n = degree() + 1;
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (1.0 - std::cos(std::numbers::pi * (i + 0.5) / n));
    rhs[i] = (*this)(u);
    double p0 = 1.0, p1 = 2.0 * u - 1.0;
    const double z = 2.0 * u - 1.0;
    V(i, 0) = 1.0;
    if (n > 1) V(i, 1) = z;
    for (int j = 2; j < n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      V(i, j) = p2;
      p0 = p1;
      p1 = p2;
    }
  }
  return V.fullPivLu().solve(rhs);
}

}  // namespace divdiv
