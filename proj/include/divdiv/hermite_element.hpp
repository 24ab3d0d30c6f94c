#pragma once

#include <vector>

#include "divdiv/dof.hpp"
#include "divdiv/fields.hpp"
#include "divdiv/integrate.hpp"
#include "divdiv/linalg.hpp"

namespace divdiv {

/// Vector Hermite element P_{l+1}(K;R^2): vertex values and gradients,
/// edge moments against P_{l-3}(e;R^2), interior moments against P_{l-2}(K;R^2).
///
/// Local order per vertex: v1, v2, h dx v1, h dy v1, h dx v2, h dy v2 (h = diam K).
/// Then, per edge, component 0 moments followed by component 1; then interior,
/// component 0 then component 1 against an L2(K)-orthogonal basis of P_{l-2}.
class HermiteElement {
 public:
  HermiteElement(const Triangle& tri, int l) : tri_(tri), frame_(frame_of(tri)), l_(l) {
    if (l < 2) throw std::invalid_argument("HermiteElement: l >= 2 required");
    if (tri.signed_area() <= 0) throw std::invalid_argument("HermiteElement: triangle must be counterclockwise");
    build();
  }

  static int dimension(int l) { return (l + 2) * (l + 3); }
  static int per_edge(int l) { return 2 * std::max(l - 2, 0); }
  static int num_interior(int l) { return 2 * dim_P(l - 2); }

  int l() const { return l_; }
  int degree() const { return l_ + 1; }
  int dimension() const { return static_cast<int>(dofs_.size()); }
  const Triangle& triangle() const { return tri_; }
  const Frame& frame() const { return frame_; }
  double h() const { return frame_.scale; }
  const std::vector<DofFunctional>& dofs() const { return dofs_; }
  const std::vector<VectorPoly2D>& shape_functions() const { return shapes_; }
  const VectorPoly2D& shape(int i) const { return shapes_[i]; }
  double condition_number() const { return cond_; }

  int vertex_dof(int v, int slot) const { return 6 * v + slot; }
  int edge_dof(int e, int comp, int j) const { return 18 + e * per_edge(l_) + comp * (l_ - 2) + j; }
  int first_interior_dof() const { return 18 + 3 * per_edge(l_); }

  /// Shapes dual to the interior functionals; they span the bubble space.
  std::vector<VectorPoly2D> bubble_functions() const {
    return {shapes_.begin() + first_interior_dof(), shapes_.end()};
  }

  Eigen::VectorXd eval_dofs(const VectorPoly2D& v) const {
    const VectorPoly2D gx{v.x.dx(), v.y.dx()}, gy{v.x.dy(), v.y.dy()};
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dimension());
    for (int i = 0; i < 3; ++i) {
      const Vec2 p = tri_.v[i];
      const Vec2 val = v(p), dx = gx(p), dy = gy(p);
      d.segment(6 * i, 6) << val.x(), val.y(), h() * dx.x(), h() * dy.x(), h() * dx.y(), h() * dy.y();
    }
    for (int e = 0; e < 3; ++e) {
      const auto [a, b] = tri_.edge(e);
      for (int c = 0; c < 2; ++c) {
        const Eigen::VectorXd m = legendre_moments(v[c].restrict_to(a, b), l_ - 2);
        for (int j = 0; j < l_ - 2; ++j) d[edge_dof(e, c, j)] = m[j];
      }
    }
    interior_moments([&](const Vec2& x) { return v(x); }, v.degree(), d);
    return d;
  }

  /// Same functionals on a smooth field; moments by quadrature exact to `quad_degree`.
  Eigen::VectorXd eval_dofs(const VectorField& v, int quad_degree) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dimension());
    for (int i = 0; i < 3; ++i) {
      const Vec2 p = tri_.v[i];
      const Vec2 val = v.value(p);
      const Mat2 j = v.jacobian(p);
      d.segment(6 * i, 6) << val.x(), val.y(), h() * j(0, 0), h() * j(0, 1), h() * j(1, 0), h() * j(1, 1);
    }
    for (int e = 0; e < 3; ++e) {
      const auto [a, b] = tri_.edge(e);
      for (const auto& q : gauss_legendre_01(quad_degree + l_)) {
        const Vec2 val = v.value(a + q.x * (b - a));
        for (int j = 0; j < l_ - 2; ++j) {
          const double pj = q.w * legendre(j, 2.0 * q.x - 1.0);
          d[edge_dof(e, 0, j)] += pj * val.x();
          d[edge_dof(e, 1, j)] += pj * val.y();
        }
      }
    }
    interior_moments(v.value, quad_degree, d);
    return d;
  }

  VectorPoly2D combine(const Eigen::VectorXd& dof_values) const {
    VectorPoly2D r(frame_, degree());
    for (int i = 0; i < dimension(); ++i)
      if (dof_values[i] != 0.0) r = r + dof_values[i] * shapes_[i];
    return r;
  }

  /// Nodal interpolation (without the bubble correction).
  VectorPoly2D interpolate(const VectorPoly2D& v) const { return combine(eval_dofs(v)); }
  VectorPoly2D interpolate(const VectorField& v, int quad_degree) const { return combine(eval_dofs(v, quad_degree)); }

  double duality_error() const {
    Eigen::MatrixXd m(dimension(), dimension());
    for (int j = 0; j < dimension(); ++j) m.col(j) = eval_dofs(shapes_[j]);
    return (m - Eigen::MatrixXd::Identity(dimension(), dimension())).cwiseAbs().maxCoeff();
  }

 private:
  // Accumulates into d; interior entries must start at zero.
  template <class F>
  void interior_moments(F&& f, int deg, Eigen::VectorXd& d) const {
    const auto& mono = tests_;
    const int n = static_cast<int>(mono.size());
    const int off = first_interior_dof();
    const double inv_area = 1.0 / tri_.area();
    for (const auto& q : triangle_rule(tri_, deg + l_ - 2)) {
      const Vec2 val = f(q.x);
      for (int i = 0; i < n; ++i) {
        const double w = q.w * inv_area * mono[i](q.x);
        d[off + i] += w * val.x();
        d[off + n + i] += w * val.y();
      }
    }
  }

  void build() {
    // monomials are nearly dependent on thin cells; (q_i, q_j)_K = |K| delta_ij
    const auto mono = monomial_basis(frame_, l_ - 2);
    const Eigen::LLT<Eigen::MatrixXd> llt(gram_matrix(mono, tri_));
    if (llt.info() != Eigen::Success) throw NumericalError("HermiteElement: interior test family is dependent");
    const int ni = static_cast<int>(mono.size());
    const Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(ni, ni)) * std::sqrt(tri_.area());
    for (int i = 0; i < ni; ++i) {
      Poly2D q(frame_, l_ - 2);
      for (int j = 0; j <= i; ++j) q = q + linv(i, j) * mono[j];
      tests_.push_back(q);
    }
    for (int v = 0; v < 3; ++v) {
      dofs_.push_back({DofKind::HermiteVertexValue, v, 0, 0});
      dofs_.push_back({DofKind::HermiteVertexValue, v, 0, 1});
      for (int c = 0; c < 2; ++c)
        for (int dir = 0; dir < 2; ++dir) dofs_.push_back({DofKind::HermiteVertexGrad, v, 0, c, dir, h()});
    }
    for (int e = 0; e < 3; ++e)
      for (int c = 0; c < 2; ++c)
        for (int j = 0; j < l_ - 2; ++j) dofs_.push_back({DofKind::HermiteEdge, e, j, c});
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < dim_P(l_ - 2); ++i) dofs_.push_back({DofKind::HermiteInterior, -1, i, c});
    if (dimension() != dimension(l_)) throw NumericalError("HermiteElement: DOF count mismatch");

    const auto space = vector_monomial_basis(frame_, degree());
    const int n = dimension();
    Eigen::MatrixXd dm(n, n);
    for (int j = 0; j < n; ++j) dm.col(j) = eval_dofs(space[j]);
    const EquilibratedInverse inv = equilibrated_inverse(dm);
    cond_ = inv.condition;
    if (!(cond_ < 1e12)) throw NumericalError("HermiteElement: singular DOF matrix, condition number " + std::to_string(cond_));
    Eigen::MatrixXd x = inv.inverse;
    x += x * (Eigen::MatrixXd::Identity(n, n) - dm * x);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd flat = Eigen::VectorXd::Zero(2 * dim_P(degree()));
      for (int i = 0; i < n; ++i) flat += x(i, j) * flatten(space[i], degree());
      shapes_.push_back(unflatten_vector(frame_, degree(), flat));
    }
  }

  Triangle tri_;
  Frame frame_;
  int l_;
  std::vector<DofFunctional> dofs_;
  std::vector<VectorPoly2D> shapes_;
  std::vector<Poly2D> tests_;
  double cond_ = 0.0;
};

}  // namespace divdiv
