#pragma once

#include <functional>
#include <ostream>

#include <Eigen/Sparse>

#include "divdiv/dofmap.hpp"

namespace divdiv {

using SpMat = Eigen::SparseMatrix<double>;
using ScalarFunction = std::function<double(const Vec2&)>;

/// Per-cell dense blocks shared by the mixed and hybrid assemblers.
struct LocalBlocks {
  Eigen::MatrixXd mass;    ///< (phi_j, phi_i)_K
  Eigen::MatrixXd divdiv;  ///< (divdiv phi_j, q_i)_K, q_i orthonormal in P_{k-2}(K)
};

inline LocalBlocks local_blocks(const DivDivElement& el, const OrthonormalBasis& qb) {
  const Triangle& t = el.triangle();
  const int n = el.dimension(), nq = qb.size();
  const auto rule = triangle_rule(t, 2 * el.degree());
  const auto& shapes = el.shape_functions();
  std::vector<Poly2D> dd;
  dd.reserve(n);
  for (const auto& s : shapes) dd.push_back(divdiv(s));
  Eigen::MatrixXd vals(rule.size(), 3 * n), ddv(rule.size(), n), qv(rule.size(), nq);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double sw = std::sqrt(rule[q].w);
    for (int j = 0; j < n; ++j) {
      const Sym2 s = shapes[j](rule[q].x);
      // Frobenius weights: xy counts twice
      vals(q, 3 * j) = sw * s.xx;
      vals(q, 3 * j + 1) = sw * std::sqrt(2.0) * s.xy;
      vals(q, 3 * j + 2) = sw * s.yy;
      ddv(q, j) = sw * dd[j](rule[q].x);
    }
    for (int i = 0; i < nq; ++i) qv(q, i) = sw * qb[i](rule[q].x);
  }
  LocalBlocks b;
  b.mass = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < 3; ++c) {
    Eigen::MatrixXd comp(rule.size(), n);
    for (int j = 0; j < n; ++j) comp.col(j) = vals.col(3 * j + c);
    b.mass.noalias() += comp.transpose() * comp;
  }
  b.divdiv = qv.transpose() * ddv;
  return b;
}

/// Load vector (f, q_i)_K for the orthonormal basis of Q_h.
inline Eigen::VectorXd assemble_load(const Discretization& d, const ScalarFunction& f, int quad_degree) {
  if (quad_degree < 2 * (d.l() + 1))
    throw std::invalid_argument("assemble_load: quadrature degree below 2(l+1)");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d.num_q());
  if (!f) return rhs;
  for (int c = 0; c < d.mesh().num_cells(); ++c) {
    const Eigen::VectorXd loc = d.q_basis(c).project_coeffs(f, quad_degree);
    rhs.segment(d.q_index(c, 0), d.q_local()) = loc;
  }
  return rhs;
}

/// Blocks of (sigma, tau) + (divdiv tau, u) = 0, (divdiv sigma, v) = (f, v).
struct MixedSystem {
  SpMat M;  ///< Sigma_h x Sigma_h
  SpMat B;  ///< Q_h x Sigma_h
  Eigen::VectorXd F;

  int n_sigma() const { return static_cast<int>(M.rows()); }
  int n_q() const { return static_cast<int>(B.rows()); }
  SpMat saddle() const;
  Eigen::VectorXd rhs() const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n_sigma() + n_q());
    r.tail(n_q()) = F;
    return r;
  }
};

/// Hybrid form with cell-local shear moments and a multiplier on interior edges.
struct HybridSystem {
  SpMat M;  ///< Sigma~_h x Sigma~_h
  SpMat B;  ///< Q_h x Sigma~_h
  SpMat C;  ///< Lambda_h x Sigma~_h, -(shear trace, mu)_{dK}
  Eigen::VectorXd F;

  int n_sigma() const { return static_cast<int>(M.rows()); }
  int n_q() const { return static_cast<int>(B.rows()); }
  int n_lambda() const { return static_cast<int>(C.rows()); }
  SpMat saddle() const;
  Eigen::VectorXd rhs() const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n_sigma() + n_q() + n_lambda());
    r.segment(n_sigma(), n_q()) = F;
    return r;
  }
};

namespace detail {

using Triplets = std::vector<Eigen::Triplet<double>>;

inline void append_block(Triplets& t, const SpMat& a, int r0, int c0, bool transpose) {
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it) {
      if (transpose) t.emplace_back(c0 + static_cast<int>(it.col()), r0 + static_cast<int>(it.row()), it.value());
      else t.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()), it.value());
    }
}

inline void assemble_sigma_blocks(const Discretization& d, bool hybrid, SpMat& M, SpMat& B) {
  const int ns = hybrid ? d.num_sigma_hybrid() : d.num_sigma();
  Triplets tm, tb;
  for (int c = 0; c < d.mesh().num_cells(); ++c) {
    const LocalBlocks lb = local_blocks(d.element(c), d.q_basis(c));
    const CellMap& m = hybrid ? d.sigma_hybrid_map(c) : d.sigma_map(c);
    const int n = static_cast<int>(m.index.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double v = lb.mass(i, j);
        if (v != 0.0) tm.emplace_back(m.index[i], m.index[j], m.factor[i] * m.factor[j] * v);
      }
    for (int i = 0; i < d.q_local(); ++i)
      for (int j = 0; j < n; ++j) {
        const double v = lb.divdiv(i, j);
        if (std::abs(v) > 0.0) tb.emplace_back(d.q_index(c, i), m.index[j], m.factor[j] * v);
      }
  }
  M.resize(ns, ns);
  M.setFromTriplets(tm.begin(), tm.end());
  B.resize(d.num_q(), ns);
  B.setFromTriplets(tb.begin(), tb.end());
}

}  // namespace detail

inline SpMat MixedSystem::saddle() const {
  const int ns = n_sigma(), nq = n_q();
  detail::Triplets t;
  t.reserve(M.nonZeros() + 2 * B.nonZeros());
  detail::append_block(t, M, 0, 0, false);
  detail::append_block(t, B, ns, 0, false);
  detail::append_block(t, B, ns, 0, true);
  SpMat a(ns + nq, ns + nq);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

inline SpMat HybridSystem::saddle() const {
  const int ns = n_sigma(), nq = n_q(), nl = n_lambda();
  detail::Triplets t;
  t.reserve(M.nonZeros() + 2 * B.nonZeros() + 2 * C.nonZeros());
  detail::append_block(t, M, 0, 0, false);
  detail::append_block(t, B, ns, 0, false);
  detail::append_block(t, B, ns, 0, true);
  detail::append_block(t, C, ns + nq, 0, false);
  detail::append_block(t, C, ns + nq, 0, true);
  SpMat a(ns + nq + nl, ns + nq + nl);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

inline MixedSystem assemble_mixed(const Discretization& d, const ScalarFunction& f, int quad_degree) {
  MixedSystem s;
  detail::assemble_sigma_blocks(d, false, s.M, s.B);
  s.F = assemble_load(d, f, quad_degree);
  return s;
}

inline HybridSystem assemble_hybrid(const Discretization& d, const ScalarFunction& f, int quad_degree) {
  HybridSystem s;
  detail::assemble_sigma_blocks(d, true, s.M, s.B);
  s.F = assemble_load(d, f, quad_degree);
  // The local shear coefficient is the moment (shear_K tau, P_j^K)_e in the
  // cell's own parameter; P_j in the global parameter is (+-1)^j times it.
  detail::Triplets tc;
  const TriMesh& mesh = d.mesh();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const DivDivElement& el = d.element(c);
    const CellMap& hm = d.sigma_hybrid_map(c);
    const auto& ce = mesh.cell_edges(c);
    for (int le = 0; le < 3; ++le) {
      const int e = ce[le].edge;
      if (mesh.is_boundary_edge(e)) continue;
      for (int j = 0; j < d.l(); ++j) {
        const double rho = (ce[le].sign < 0 && j % 2 == 1) ? -1.0 : 1.0;
        tc.emplace_back(d.lambda_index(e, j), hm.index[el.edge_shear_dof(le, j)], -rho);
      }
    }
  }
  s.C.resize(d.num_lambda(), d.num_sigma_hybrid());
  s.C.setFromTriplets(tc.begin(), tc.end());
  return s;
}

/// Coordinate-format dump: one "row col value" line per stored entry (0-based).
inline void write_coo(std::ostream& out, const SpMat& a) {
  out.precision(17);
  out << "% " << a.rows() << " " << a.cols() << " " << a.nonZeros() << "\n";
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it) out << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace divdiv
