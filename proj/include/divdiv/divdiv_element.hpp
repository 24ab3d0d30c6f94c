#pragma once

#include <vector>

#include "divdiv/dof.hpp"
#include "divdiv/fields.hpp"
#include "divdiv/integrate.hpp"
#include "divdiv/spaces.hpp"

namespace divdiv {

/// Local div-div conforming element on one physical triangle.
///
/// Shape space C_l(K;S) + x x^T P_{k-2}(K) with x measured from the centroid.
/// Degrees of freedom, in local order:
///   vertex values (3 x {xx,xy,yy}), normal-normal moments against P_{l-2}(e),
///   shear moments against P_{l-1}(e), then interior moments against
///   hess P_{k-2}(K) and sym(x^perp (x) P_{l-2}(K;R^2)).
/// The shape basis is dual to these functionals.
class DivDivElement {
 public:
  DivDivElement(const Triangle& tri, int l, int k) : tri_(tri), frame_(frame_of(tri)), l_(l), k_(k) {
    if (k < 3) throw std::invalid_argument("DivDivElement: k >= 3 required");
    if (l < k - 1) throw std::invalid_argument("DivDivElement: l >= k-1 required");
    if (tri.signed_area() <= 0) throw std::invalid_argument("DivDivElement: triangle must be counterclockwise");
    build_dofs();
    build_basis();
  }

  static int dimension(int l, int k) { return l * l + 5 * l + 3 + k * (k - 1) / 2; }
  static int num_interior(int l, int k) { return k * (k - 1) / 2 - 3 + l * (l - 1); }

  int l() const { return l_; }
  int k() const { return k_; }
  int degree() const { return std::max(l_, k_); }
  int dimension() const { return static_cast<int>(dofs_.size()); }
  const Triangle& triangle() const { return tri_; }
  const Frame& frame() const { return frame_; }
  const std::vector<DofFunctional>& dofs() const { return dofs_; }
  const std::vector<SymTensorPoly2D>& shape_functions() const { return shapes_; }
  const SymTensorPoly2D& shape(int i) const { return shapes_[i]; }
  const std::vector<SymTensorPoly2D>& space_basis() const { return space_; }
  const std::vector<SymTensorPoly2D>& interior_tests() const { return tests_; }
  double condition_number() const { return cond_; }

  int vertex_dof(int v, int comp) const { return 3 * v + comp; }
  int edge_nn_dof(int e, int j) const { return 9 + e * (l_ - 1) + j; }
  int edge_shear_dof(int e, int j) const { return 9 + 3 * (l_ - 1) + e * l_ + j; }
  int first_interior_dof() const { return 9 + 3 * (l_ - 1) + 3 * l_; }

  /// All functionals applied to a polynomial tensor. Edge traces are built as
  /// univariate polynomials in the edge parameter and differentiated exactly.
  Eigen::VectorXd eval_dofs(const SymTensorPoly2D& tau) const {
    Eigen::VectorXd d(dimension());
    for (int v = 0; v < 3; ++v) {
      const Sym2 s = tau(tri_.v[v]);
      for (int c = 0; c < 3; ++c) d[vertex_dof(v, c)] = s[c];
    }
    const VectorPoly2D dv = div(tau);
    for (int e = 0; e < 3; ++e) {
      const auto [a, b] = tri_.edge(e);
      const double len = (b - a).norm();
      const Vec2 t = (b - a) / len;
      const Vec2 n = rotate_AT(t);
      const Poly1D nn = tau.sandwich(n, n).restrict_to(a, b);
      const Eigen::VectorXd mnn = legendre_moments(nn, l_ - 1);
      for (int j = 0; j < l_ - 1; ++j) d[edge_nn_dof(e, j)] = mnn[j];
      const Poly1D tn = tau.sandwich(t, n).restrict_to(a, b);
      const Poly1D shear = tn.derivative() + len * dv.dot(n).restrict_to(a, b);
      const Eigen::VectorXd msh = legendre_moments(shear, l_);
      for (int j = 0; j < l_; ++j) d[edge_shear_dof(e, j)] = msh[j];
    }
    interior_moments(tau, d);
    return d;
  }

  /// Functionals applied to a smooth field, edge and interior moments by
  /// quadrature exact to `quad_degree`.
  Eigen::VectorXd eval_dofs(const SymTensorField& tau, int quad_degree) const {
    if (!tau.has_derivatives()) throw std::invalid_argument("eval_dofs: shear functionals need dx/dy of the field");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dimension());
    for (int v = 0; v < 3; ++v) {
      const Sym2 s = tau.value(tri_.v[v]);
      for (int c = 0; c < 3; ++c) d[vertex_dof(v, c)] = s[c];
    }
    for (int e = 0; e < 3; ++e) {
      const auto [a, b] = tri_.edge(e);
      const double len = (b - a).norm();
      const Vec2 t = (b - a) / len;
      const Vec2 n = rotate_AT(t);
      for (const auto& q : gauss_legendre_01(quad_degree + l_)) {
        const Vec2 x = a + q.x * (b - a);
        const Sym2 s = tau.value(x), sx = tau.dx(x), sy = tau.dy(x);
        const Sym2 st = t.x() * sx + t.y() * sy;
        const Vec2 dv(sx.xx + sy.xy, sx.xy + sy.yy);
        const double nn = s.sandwich(n, n);
        const double shear = st.sandwich(t, n) + n.dot(dv);
        const double z = 2.0 * q.x - 1.0;
        for (int j = 0; j < l_ - 1; ++j) d[edge_nn_dof(e, j)] += q.w * nn * legendre(j, z);
        for (int j = 0; j < l_; ++j) d[edge_shear_dof(e, j)] += q.w * len * shear * legendre(j, z);
      }
    }
    const double inv_area = 1.0 / tri_.area();
    const int off = first_interior_dof();
    for (const auto& q : triangle_rule(tri_, quad_degree + degree())) {
      const Sym2 s = tau.value(q.x);
      for (std::size_t i = 0; i < tests_.size(); ++i) d[off + i] += q.w * inv_area * s.dot(tests_[i](q.x));
    }
    return d;
  }

  /// Sum of dof_values[i] * shape_i.
  SymTensorPoly2D combine(const Eigen::VectorXd& dof_values) const {
    SymTensorPoly2D r(frame_, degree());
    for (int i = 0; i < dimension(); ++i)
      if (dof_values[i] != 0.0) r = r + dof_values[i] * shapes_[i];
    return r;
  }

  /// Canonical interpolation Pi_K.
  SymTensorPoly2D interpolate(const SymTensorPoly2D& tau) const { return combine(eval_dofs(tau)); }
  SymTensorPoly2D interpolate(const SymTensorField& tau, int quad_degree) const {
    return combine(eval_dofs(tau, quad_degree));
  }

  /// Matrix (dof_i(shape_j)); the identity up to round-off.
  Eigen::MatrixXd duality_matrix() const {
    Eigen::MatrixXd m(dimension(), dimension());
    for (int j = 0; j < dimension(); ++j) m.col(j) = eval_dofs(shapes_[j]);
    return m;
  }

  double duality_error() const {
    return (duality_matrix() - Eigen::MatrixXd::Identity(dimension(), dimension())).cwiseAbs().maxCoeff();
  }

 private:
  void interior_moments(const SymTensorPoly2D& tau, Eigen::VectorXd& d) const {
    const double inv_area = 1.0 / tri_.area();
    const int off = first_interior_dof();
    const auto& rule = triangle_rule(tri_, tau.degree() + degree());
    std::vector<Sym2> vals(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) vals[q] = tau(rule[q].x);
    for (std::size_t i = 0; i < tests_.size(); ++i) {
      double s = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) s += rule[q].w * vals[q].dot(tests_[i](rule[q].x));
      d[off + i] = inv_area * s;
    }
  }

  void build_dofs() {
    for (int v = 0; v < 3; ++v)
      for (int c = 0; c < 3; ++c) dofs_.push_back({DofKind::VertexValue, v, 0, c});
    for (int e = 0; e < 3; ++e)
      for (int j = 0; j < l_ - 1; ++j) dofs_.push_back({DofKind::EdgeNN, e, j});
    for (int e = 0; e < 3; ++e)
      for (int j = 0; j < l_; ++j) dofs_.push_back({DofKind::EdgeShear, e, j});
    const auto th = orthogonalized(basis_of_space(SpaceTag::Hess, k_ - 2, frame_));
    const auto tx = orthogonalized(basis_of_space(SpaceTag::SymXperp, l_ - 2, frame_));
    for (std::size_t i = 0; i < th.size(); ++i) {
      dofs_.push_back({DofKind::InteriorHess, -1, static_cast<int>(tests_.size())});
      tests_.push_back(th[i]);
    }
    for (std::size_t i = 0; i < tx.size(); ++i) {
      dofs_.push_back({DofKind::InteriorXperp, -1, static_cast<int>(tests_.size())});
      tests_.push_back(tx[i]);
    }
    if (dimension() != dimension(l_, k_)) throw NumericalError("DivDivElement: DOF count mismatch");
  }

  // L2(K)-orthogonal basis of the same span, each with (t, t)_K = |K|
  std::vector<SymTensorPoly2D> orthogonalized(const std::vector<SymTensorPoly2D>& b) const {
    if (b.empty()) return b;
    const Eigen::LLT<Eigen::MatrixXd> llt(gram_matrix(b, tri_));
    if (llt.info() != Eigen::Success) throw NumericalError("DivDivElement: interior test family is dependent");
    const int n = static_cast<int>(b.size());
    const Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n)) * std::sqrt(tri_.area());
    std::vector<SymTensorPoly2D> out;
    for (int i = 0; i < n; ++i) {
      SymTensorPoly2D t(frame_, b[0].degree());
      for (int j = 0; j <= i; ++j) t = t + linv(i, j) * b[j];
      out.push_back(t);
    }
    return out;
  }

  void build_basis() {
    const int m = degree();
    for (const auto& b : basis_of_space(SpaceTag::C, l_, frame_)) space_.push_back(b.raised(m));
    for (const auto& b : basis_of_space(SpaceTag::COplus, k_, frame_)) space_.push_back(b.raised(m));
    const int n = dimension();
    if (static_cast<int>(space_.size()) != n) throw NumericalError("DivDivElement: shape space dimension mismatch");
    Eigen::MatrixXd dm(n, n);
    for (int j = 0; j < n; ++j) dm.col(j) = eval_dofs(space_[j]);
    const EquilibratedInverse inv = equilibrated_inverse(dm);
    cond_ = inv.condition;
    if (!(cond_ < 1e12)) throw NumericalError("DivDivElement: singular DOF matrix, condition number " + std::to_string(cond_));
    // one step of iterative refinement: X <- X + X (I - D X)
    Eigen::MatrixXd x = inv.inverse;
    x += x * (Eigen::MatrixXd::Identity(n, n) - dm * x);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd flat = Eigen::VectorXd::Zero(3 * dim_P(m));
      for (int i = 0; i < n; ++i) flat += x(i, j) * flatten(space_[i], m);
      shapes_.push_back(unflatten_tensor(frame_, m, flat));
    }
  }

  Triangle tri_;
  Frame frame_;
  int l_, k_;
  std::vector<DofFunctional> dofs_;
  std::vector<SymTensorPoly2D> tests_;
  std::vector<SymTensorPoly2D> space_;
  std::vector<SymTensorPoly2D> shapes_;
  double cond_ = 0.0;
};

}  // namespace divdiv
