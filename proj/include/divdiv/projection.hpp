#pragma once

#include <vector>

#include "divdiv/integrate.hpp"

namespace divdiv {

/// L2(K)-orthonormal basis of P_m(K), obtained from the scaled monomials by Cholesky.
class OrthonormalBasis {
 public:
  OrthonormalBasis() = default;
  OrthonormalBasis(const Triangle& k, int m) : tri_(k), frame_(frame_of(k)), deg_(m) {
    const auto mono = monomial_basis(frame_, m);
    const int n = static_cast<int>(mono.size());
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = inner_triangle(mono[i], mono[j], k);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw NumericalError("OrthonormalBasis: monomial Gram not SPD");
    // phi = mono * L^{-T}
    const Eigen::MatrixXd linv_t = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n)).transpose();
    for (int j = 0; j < n; ++j) {
      Poly2D p(frame_, m);
      for (int i = 0; i < n; ++i) p += linv_t(i, j) * mono[i];
      basis_.push_back(p);
    }
  }

  int degree() const { return deg_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const Poly2D& operator[](int i) const { return basis_[i]; }
  const std::vector<Poly2D>& functions() const { return basis_; }
  const Triangle& triangle() const { return tri_; }

  /// Coefficients of the L2 projection of f, using a rule exact to `quad_degree` + degree().
  template <class F>
  Eigen::VectorXd project_coeffs(F&& f, int quad_degree) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(size());
    for (const auto& q : triangle_rule(tri_, quad_degree + deg_)) {
      const double v = q.w * f(q.x);
      for (int i = 0; i < size(); ++i) c[i] += v * basis_[i](q.x);
    }
    return c;
  }
  Eigen::VectorXd project_coeffs(const Poly2D& p) const {
    return project_coeffs([&](const Vec2& x) { return p(x); }, p.degree());
  }

  Poly2D combine(const Eigen::VectorXd& c) const {
    Poly2D p(frame_, deg_);
    for (int i = 0; i < size(); ++i) p += c[i] * basis_[i];
    return p;
  }
  Poly2D project(const Poly2D& p) const { return combine(project_coeffs(p.in_frame(frame_))); }

 private:
  Triangle tri_{};
  Frame frame_;
  int deg_ = 0;
  std::vector<Poly2D> basis_;
};

}  // namespace divdiv
