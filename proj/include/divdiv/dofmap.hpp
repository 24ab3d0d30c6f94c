#pragma once

#include <memory>
#include <vector>

#include "divdiv/hermite_element.hpp"
#include "divdiv/divdiv_element.hpp"
#include "divdiv/mesh.hpp"
#include "divdiv/projection.hpp"

namespace divdiv {

/// Local-to-global map of one cell: local coefficient i equals
/// factor[i] * global coefficient index[i].
struct CellMap {
  std::vector<int> index;
  std::vector<double> factor;

  Eigen::VectorXd gather(const Eigen::VectorXd& global) const {
    Eigen::VectorXd local(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) local[i] = factor[i] * global[index[i]];
    return local;
  }
  void scatter_add(const Eigen::VectorXd& local, Eigen::VectorXd& global) const {
    for (std::size_t i = 0; i < index.size(); ++i) global[index[i]] += factor[i] * local[i];
  }
};

/// Elements and global numbering for Sigma_h, the hybrid Sigma~_h, Q_h,
/// Lambda_h and V_h on one mesh.
///
/// Shared functionals use the global edge orientation: Legendre polynomials
/// in the parameter running from the lower to the higher vertex index, and
/// the normal n_e. A cell whose counterclockwise edge runs the other way sees
/// P_j(2u-1) flipped by (-1)^j; shear moments additionally flip with n.
class Discretization {
 public:
  Discretization(TriMesh mesh, int l, int k, bool with_hermite = false)
      : mesh_(std::move(mesh)), l_(l), k_(k), hermite_(with_hermite) {
    if (k < 3) throw std::invalid_argument("Discretization: k >= 3 required");
    if (l < k - 1) throw std::invalid_argument("Discretization: l >= k-1 required");
    const int nc = mesh_.num_cells();
    elements_.reserve(nc);
    qbases_.reserve(nc);
    for (int c = 0; c < nc; ++c) {
      const Triangle t = mesh_.triangle(c);
      elements_.push_back(std::make_unique<DivDivElement>(t, l, k));
      qbases_.emplace_back(t, k - 2);
      if (hermite_) hermites_.push_back(std::make_unique<HermiteElement>(t, l));
    }
    build_sigma();
    build_lambda();
    if (hermite_) build_v();
  }

  const TriMesh& mesh() const { return mesh_; }
  int l() const { return l_; }
  int k() const { return k_; }
  bool has_hermite() const { return hermite_; }

  const DivDivElement& element(int c) const { return *elements_.at(c); }
  const OrthonormalBasis& q_basis(int c) const { return qbases_.at(c); }
  const HermiteElement& hermite(int c) const {
    if (!hermite_) throw std::logic_error("Discretization: built without the Hermite element");
    return *hermites_.at(c);
  }

  static int sigma_dimension_formula(const TriMesh& m, int l, int k) {
    return 3 * m.num_vertices() + (2 * l - 1) * m.num_edges() + (l * (l - 1) + (k + 2) * (k - 3) / 2) * m.num_cells();
  }

  int num_sigma() const { return n_sigma_; }
  int num_sigma_hybrid() const { return n_sigma_hybrid_; }
  int q_local() const { return k_ * (k_ - 1) / 2; }
  int num_q() const { return q_local() * mesh_.num_cells(); }
  int q_index(int c, int i) const { return c * q_local() + i; }
  int num_lambda() const { return n_lambda_; }
  /// Global index of the j-th Legendre mode on edge e, or -1 on the boundary.
  int lambda_index(int e, int j) const { return lambda_offset_[e] < 0 ? -1 : lambda_offset_[e] + j; }
  int num_v() const {
    return 6 * mesh_.num_vertices() + HermiteElement::per_edge(l_) * mesh_.num_edges() +
           HermiteElement::num_interior(l_) * mesh_.num_cells();
  }

  const CellMap& sigma_map(int c) const { return sigma_maps_.at(c); }
  const CellMap& sigma_hybrid_map(int c) const { return sigma_hybrid_maps_.at(c); }
  const CellMap& v_map(int c) const { return v_maps_.at(c); }

  /// Global Sigma_h index of a shared functional: edge e, NN moment j.
  int sigma_edge_nn(int e, int j) const { return edge_offset_ + e * (2 * l_ - 1) + j; }
  int sigma_edge_shear(int e, int j) const { return edge_offset_ + e * (2 * l_ - 1) + (l_ - 1) + j; }
  int sigma_vertex(int v, int comp) const { return 3 * v + comp; }
  int sigma_interior(int c, int i) const { return cell_offset_ + c * n_int_ + i; }

  /// Sigma_h is a subspace of Sigma~_h; returns the hybrid coefficients of a conforming field.
  Eigen::VectorXd inject_conforming(const Eigen::VectorXd& g) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_sigma_hybrid_);
    for (int c = 0; c < mesh_.num_cells(); ++c) {
      const Eigen::VectorXd loc = sigma_map(c).gather(g);
      const CellMap& hm = sigma_hybrid_map(c);
      for (std::size_t i = 0; i < hm.index.size(); ++i) out[hm.index[i]] = loc[i] / hm.factor[i];
    }
    return out;
  }

  /// Orientation factor (+1/-1) of local edge moment j for a cell with edge sign s.
  static double parity(int s, int j, bool odd_in_normal) {
    double f = (s < 0 && (j % 2 == 1)) ? -1.0 : 1.0;
    if (odd_in_normal) f *= s;
    return f;
  }

 private:
  void build_sigma() {
    const int nv = mesh_.num_vertices(), ne = mesh_.num_edges(), nc = mesh_.num_cells();
    n_int_ = DivDivElement::num_interior(l_, k_);
    edge_offset_ = 3 * nv;
    cell_offset_ = edge_offset_ + (2 * l_ - 1) * ne;
    n_sigma_ = cell_offset_ + n_int_ * nc;
    const int h_edge_offset = 3 * nv;
    const int h_cell_offset = h_edge_offset + (l_ - 1) * ne;
    const int h_per_cell = 3 * l_ + n_int_;
    n_sigma_hybrid_ = h_cell_offset + h_per_cell * nc;

    for (int c = 0; c < nc; ++c) {
      const DivDivElement& el = element(c);
      const auto& verts = mesh_.cell(c);
      const auto& ce = mesh_.cell_edges(c);
      CellMap m, hm;
      m.index.resize(el.dimension());
      m.factor.assign(el.dimension(), 1.0);
      hm.index.resize(el.dimension());
      hm.factor.assign(el.dimension(), 1.0);
      for (int i = 0; i < el.dimension(); ++i) {
        const DofFunctional& d = el.dofs()[i];
        switch (d.kind) {
          case DofKind::VertexValue:
            m.index[i] = hm.index[i] = sigma_vertex(verts[d.entity], d.component);
            break;
          case DofKind::EdgeNN: {
            const int e = ce[d.entity].edge;
            m.index[i] = sigma_edge_nn(e, d.index);
            hm.index[i] = h_edge_offset + e * (l_ - 1) + d.index;
            m.factor[i] = hm.factor[i] = parity(ce[d.entity].sign, d.index, false);
            break;
          }
          case DofKind::EdgeShear: {
            const int e = ce[d.entity].edge;
            m.index[i] = sigma_edge_shear(e, d.index);
            m.factor[i] = parity(ce[d.entity].sign, d.index, true);
            hm.index[i] = h_cell_offset + c * h_per_cell + d.entity * l_ + d.index;
            break;
          }
          default: {
            const int j = i - el.first_interior_dof();
            m.index[i] = sigma_interior(c, j);
            hm.index[i] = h_cell_offset + c * h_per_cell + 3 * l_ + j;
          }
        }
      }
      sigma_maps_.push_back(std::move(m));
      sigma_hybrid_maps_.push_back(std::move(hm));
    }
  }

  void build_lambda() {
    lambda_offset_.assign(mesh_.num_edges(), -1);
    n_lambda_ = 0;
    for (int e = 0; e < mesh_.num_edges(); ++e)
      if (!mesh_.is_boundary_edge(e)) {
        lambda_offset_[e] = n_lambda_;
        n_lambda_ += l_;
      }
  }

  void build_v() {
    const int nv = mesh_.num_vertices(), ne = mesh_.num_edges(), nc = mesh_.num_cells();
    const int per_edge = HermiteElement::per_edge(l_);
    const int per_cell = HermiteElement::num_interior(l_);
    const int e_off = 6 * nv, c_off = e_off + per_edge * ne;
    for (int c = 0; c < nc; ++c) {
      const HermiteElement& he = hermite(c);
      const auto& verts = mesh_.cell(c);
      const auto& ce = mesh_.cell_edges(c);
      CellMap m;
      m.index.resize(he.dimension());
      m.factor.assign(he.dimension(), 1.0);
      for (int i = 0; i < he.dimension(); ++i) {
        const DofFunctional& d = he.dofs()[i];
        switch (d.kind) {
          case DofKind::HermiteVertexValue:
            m.index[i] = 6 * verts[d.entity] + d.component;
            break;
          case DofKind::HermiteVertexGrad:
            m.index[i] = 6 * verts[d.entity] + 2 + 2 * d.component + d.direction;
            m.factor[i] = d.scale;
            break;
          case DofKind::HermiteEdge: {
            const int e = ce[d.entity].edge;
            m.index[i] = e_off + e * per_edge + d.component * (l_ - 2) + d.index;
            m.factor[i] = parity(ce[d.entity].sign, d.index, false);
            break;
          }
          default:
            m.index[i] = c_off + c * per_cell + (i - he.first_interior_dof());
        }
      }
      v_maps_.push_back(std::move(m));
    }
  }

  TriMesh mesh_;
  int l_, k_;
  bool hermite_;
  std::vector<std::unique_ptr<DivDivElement>> elements_;
  std::vector<std::unique_ptr<HermiteElement>> hermites_;
  std::vector<OrthonormalBasis> qbases_;
  std::vector<CellMap> sigma_maps_, sigma_hybrid_maps_, v_maps_;
  std::vector<int> lambda_offset_;
  int n_int_ = 0, edge_offset_ = 0, cell_offset_ = 0;
  int n_sigma_ = 0, n_sigma_hybrid_ = 0, n_lambda_ = 0;
};

}  // namespace divdiv
