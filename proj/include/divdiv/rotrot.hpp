#pragma once

#include "divdiv/commuting.hpp"

namespace divdiv {

/// Rot-rot conforming element obtained from the div-div element by
/// tau -> A^T tau A. Shapes span E_l(K;S) + x^perp x^perp^T P_{k-2}.
class RotRotElement {
 public:
  explicit RotRotElement(const DivDivElement& base) : base_(&base) {
    for (const auto& s : base.shape_functions()) shapes_.push_back(conjugate_A(s));
    const Frame& f = base.frame();
    for (const auto& t : basis_of_space(SpaceTag::CurlCurl, base.k() - 2, f)) tests_.push_back(t);
    for (const auto& t : basis_of_space(SpaceTag::SymX, base.l() - 2, f)) tests_.push_back(t);
  }

  const DivDivElement& base() const { return *base_; }
  int dimension() const { return base_->dimension(); }
  const std::vector<SymTensorPoly2D>& shape_functions() const { return shapes_; }

  /// Conjugated functionals: dof_i(A^T tau A) of the div-div element.
  Eigen::VectorXd eval_dofs(const SymTensorPoly2D& tau) const { return base_->eval_dofs(conjugate_A(tau)); }

  /// Functionals stated directly on tau: vertex values, (t^T tau t, P_j)_e / |e|,
  /// (-d_t(n^T tau t) + t^T rot tau, P_j)_e, and interior moments against
  /// curl curl P_{k-2} + sym(x (x) P_{l-2}(R^2)).
  Eigen::VectorXd eval_direct_dofs(const SymTensorPoly2D& tau) const {
    const DivDivElement& b = *base_;
    const Triangle& tri = b.triangle();
    Eigen::VectorXd d(dimension());
    for (int v = 0; v < 3; ++v) {
      const Sym2 s = tau(tri.v[v]);
      for (int c = 0; c < 3; ++c) d[b.vertex_dof(v, c)] = s[c];
    }
    const VectorPoly2D r = rot(tau);
    for (int e = 0; e < 3; ++e) {
      const auto [p, q] = tri.edge(e);
      const double len = (q - p).norm();
      const Vec2 t = (q - p) / len;
      const Vec2 n = rotate_AT(t);
      const Eigen::VectorXd mtt = legendre_moments(tau.sandwich(t, t).restrict_to(p, q), b.l() - 1);
      for (int j = 0; j < b.l() - 1; ++j) d[b.edge_nn_dof(e, j)] = mtt[j];
      const Poly1D shear = -1.0 * tau.sandwich(n, t).restrict_to(p, q).derivative() + len * r.dot(t).restrict_to(p, q);
      const Eigen::VectorXd msh = legendre_moments(shear, b.l());
      for (int j = 0; j < b.l(); ++j) d[b.edge_shear_dof(e, j)] = msh[j];
    }
    const int off = b.first_interior_dof();
    for (std::size_t i = 0; i < tests_.size(); ++i) d[off + i] = inner_triangle(tau, tests_[i], tri) / tri.area();
    return d;
  }

  SymTensorPoly2D combine(const Eigen::VectorXd& c) const { return conjugate_A(base_->combine(c)); }

  /// Pi_K^perp tau = A Pi_K(A^T tau A) A^T.
  SymTensorPoly2D interpolate(const SymTensorPoly2D& tau) const { return conjugate_A(base_->interpolate(conjugate_A(tau))); }
  SymTensorPoly2D interpolate(const SymTensorField& tau, int quad_degree) const {
    return conjugate_A(base_->interpolate(conjugate_A(tau), quad_degree));
  }

 private:
  const DivDivElement* base_;
  std::vector<SymTensorPoly2D> shapes_;
  std::vector<SymTensorPoly2D> tests_;
};

/// I_K^perp v = A I_K(A^T v).
inline VectorPoly2D interpolate_IK_perp(const HermiteElement& he, const DivDivElement& de, const VectorPoly2D& v) {
  return rotate_A(interpolate_IK(he, de, rotate_AT(v)));
}

}  // namespace divdiv
