#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "divdiv/types.hpp"

namespace divdiv {

/// Conforming triangulation with globally oriented edges.
///
/// Edge e = (a, b) always has a < b. Its tangent t_e points from a to b and
/// n_e = A^T t_e, so t_e = A n_e. Local edge i of a cell joins local vertices
/// (i+1)%3 -> (i+2)%3, traversed counterclockwise.
class TriMesh {
 public:
  struct CellEdge {
    int edge;
    int sign;  ///< +1 when the cell's outward normal equals n_e
  };

  TriMesh() = default;
  TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> cells) : vertices_(std::move(vertices)), cells_(std::move(cells)) {
    build();
  }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_interior_edges() const {
    return static_cast<int>(std::count_if(edge_cells_.begin(), edge_cells_.end(), [](const auto& c) { return c[1] >= 0; }));
  }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }

  const Vec2& vertex(int i) const { return vertices_.at(i); }
  const std::array<int, 3>& cell(int c) const { return cells_.at(c); }
  const std::array<int, 2>& edge(int e) const { return edges_.at(e); }
  const std::array<CellEdge, 3>& cell_edges(int c) const { return cell_edges_.at(c); }
  /// Incident cells of edge e; second entry is -1 on the boundary.
  const std::array<int, 2>& edge_cells(int e) const { return edge_cells_.at(e); }

  bool is_boundary_edge(int e) const { return edge_cells_.at(e)[1] < 0; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_.at(v); }

  Triangle triangle(int c) const {
    const auto& t = cells_.at(c);
    return {{vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]}};
  }

  Vec2 edge_tangent(int e) const { return (vertices_[edges_[e][1]] - vertices_[edges_[e][0]]).normalized(); }
  Vec2 edge_normal(int e) const { return rotate_AT(edge_tangent(e)); }
  double edge_length(int e) const { return (vertices_[edges_[e][1]] - vertices_[edges_[e][0]]).norm(); }

  /// Orientation sign of each local edge of `cell` relative to the global (n_e, t_e).
  std::array<int, 3> edge_orientation_signs(int cell) const {
    if (cell < 0 || cell >= num_cells()) throw std::out_of_range("edge_orientation_signs: cell index out of range");
    const auto& ce = cell_edges_[cell];
    return {ce[0].sign, ce[1].sign, ce[2].sign};
  }

  double max_diameter() const {
    double h = 0.0;
    for (int c = 0; c < num_cells(); ++c) h = std::max(h, triangle(c).diameter());
    return h;
  }

  /// Smallest interior angle over all cells, in radians.
  double min_angle() const {
    double m = 4.0;
    for (int c = 0; c < num_cells(); ++c) {
      const Triangle t = triangle(c);
      for (int i = 0; i < 3; ++i) {
        const Vec2 a = t.v[(i + 1) % 3] - t.v[i];
        const Vec2 b = t.v[(i + 2) % 3] - t.v[i];
        m = std::min(m, std::acos(std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0)));
      }
    }
    return m;
  }

 private:
  void build() {
    for (auto& c : cells_) {
      for (int v : c)
        if (v < 0 || v >= num_vertices()) throw std::invalid_argument("TriMesh: cell references missing vertex");
      Triangle t{{vertices_[c[0]], vertices_[c[1]], vertices_[c[2]]}};
      const double a = t.signed_area();
      if (std::abs(a) <= 1e-14 * std::max(1.0, t.diameter() * t.diameter()))
        throw std::invalid_argument("TriMesh: degenerate cell");
      if (a < 0) std::swap(c[1], c[2]);
    }
    std::map<std::pair<int, int>, int> index;
    cell_edges_.resize(cells_.size());
    for (int c = 0; c < num_cells(); ++c) {
      for (int i = 0; i < 3; ++i) {
        const int a = cells_[c][(i + 1) % 3], b = cells_[c][(i + 2) % 3];
        const auto key = std::minmax(a, b);
        auto [it, inserted] = index.try_emplace({key.first, key.second}, num_edges());
        if (inserted) {
          edges_.push_back({key.first, key.second});
          edge_cells_.push_back({c, -1});
        } else {
          auto& ec = edge_cells_[it->second];
          if (ec[1] >= 0) throw std::invalid_argument("TriMesh: edge shared by more than two cells");
          ec[1] = c;
        }
        // ccw traversal a->b: outward normal is A^T t_local; aligned with n_e iff a < b
        cell_edges_[c][i] = {it->second, a < b ? 1 : -1};
      }
    }
    boundary_vertex_.assign(vertices_.size(), false);
    for (int e = 0; e < num_edges(); ++e)
      if (is_boundary_edge(e)) boundary_vertex_[edges_[e][0]] = boundary_vertex_[edges_[e][1]] = true;
    for (int e = 0; e < num_edges(); ++e) {
      const auto& ec = edge_cells_[e];
      if (ec[1] >= 0 && sign_in(ec[0], e) == sign_in(ec[1], e))
        throw std::invalid_argument("TriMesh: inconsistent orientation across an interior edge");
    }
  }

  int sign_in(int c, int e) const {
    for (const auto& ce : cell_edges_[c])
      if (ce.edge == e) return ce.sign;
    return 0;
  }

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<CellEdge, 3>> cell_edges_;
  std::vector<std::array<int, 2>> edge_cells_;
  std::vector<bool> boundary_vertex_;
};

/// n x n squares on [0,1]^2, each cut by its positive-slope diagonal.
inline TriMesh structured_unit_square(int n) {
  if (n < 1) throw std::invalid_argument("structured_unit_square: n >= 1 required");
  std::vector<Vec2> v;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) v.emplace_back(double(i) / n, double(j) / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return TriMesh(std::move(v), std::move(cells));
}

/// Red refinement: every triangle split into four through its edge midpoints.
inline TriMesh refine_uniform(const TriMesh& m) {
  std::vector<Vec2> v = m.vertices();
  std::vector<int> mid(m.num_edges());
  for (int e = 0; e < m.num_edges(); ++e) {
    mid[e] = static_cast<int>(v.size());
    v.push_back(0.5 * (m.vertex(m.edge(e)[0]) + m.vertex(m.edge(e)[1])));
  }
  std::vector<std::array<int, 3>> cells;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& t = m.cell(c);
    const auto& ce = m.cell_edges(c);
    // midpoint opposite local vertex i
    const int m0 = mid[ce[0].edge], m1 = mid[ce[1].edge], m2 = mid[ce[2].edge];
    cells.push_back({t[0], m2, m1});
    cells.push_back({m2, t[1], m0});
    cells.push_back({m1, m0, t[2]});
    cells.push_back({m0, m1, m2});
  }
  return TriMesh(std::move(v), std::move(cells));
}

}  // namespace divdiv
