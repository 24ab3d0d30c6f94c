#include <gtest/gtest.h>

#include <random>

#include "divdiv/dofmap.hpp"
#include "divdiv/random.hpp"

using namespace divdiv;

namespace {
const Triangle kTri{{Vec2(0.1, 0.0), Vec2(1.2, 0.3), Vec2(0.4, 0.9)}};

VectorPoly2D random_vector(const Frame& f, int m, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  VectorPoly2D v(f, m);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < dim_P(m); ++i) v[c].coeffs()[i] = u(rng);
  return v;
}
}  // namespace

TEST(HermiteElement, DimensionIsFullVectorP) {
  for (int l = 2; l <= 5; ++l) {
    EXPECT_EQ(HermiteElement::dimension(l), 2 * dim_P(l + 1));
    const HermiteElement h(kTri, l);
    EXPECT_EQ(h.dimension(), 18 + 3 * HermiteElement::per_edge(l) + HermiteElement::num_interior(l));
    EXPECT_EQ(h.dimension(), HermiteElement::dimension(l));
  }
}

TEST(HermiteElement, DualityAndReproduction) {
  std::mt19937 rng(20);
  for (int i = 0; i < 4; ++i) {
    const Triangle t = random_triangle(rng);
    for (int l = 2; l <= 4; ++l) {
      const HermiteElement h(t, l);
      EXPECT_LT(h.duality_error(), 1e-8);
      const VectorPoly2D v = random_vector(h.frame(), l + 1, rng);
      // compare values on K; frame coefficients are ill-posed on thin cells
      const VectorPoly2D w = h.interpolate(v) - v;
      for (double a = 0; a <= 1.0; a += 0.125)
        for (double b = 0; a + b <= 1.0; b += 0.125) {
          const Vec2 x = t.v[0] + a * (t.v[1] - t.v[0]) + b * (t.v[2] - t.v[0]);
          EXPECT_LT(w(x).norm(), 1e-10);
        }
    }
  }
}

TEST(HermiteElement, VertexFunctionals) {
  std::mt19937 rng(21);
  const HermiteElement h(kTri, 3);
  const VectorPoly2D v = random_vector(h.frame(), 4, rng);
  const Eigen::VectorXd d = h.eval_dofs(v);
  for (int a = 0; a < 3; ++a) {
    const Vec2 x = kTri.v[a];
    EXPECT_NEAR(d[h.vertex_dof(a, 0)], v.x(x), 1e-12);
    EXPECT_NEAR(d[h.vertex_dof(a, 1)], v.y(x), 1e-12);
    EXPECT_NEAR(d[h.vertex_dof(a, 2)], h.h() * v.x.dx()(x), 1e-12);
    EXPECT_NEAR(d[h.vertex_dof(a, 3)], h.h() * v.x.dy()(x), 1e-12);
    EXPECT_NEAR(d[h.vertex_dof(a, 4)], h.h() * v.y.dx()(x), 1e-12);
    EXPECT_NEAR(d[h.vertex_dof(a, 5)], h.h() * v.y.dy()(x), 1e-12);
  }
  EXPECT_LT((d - h.eval_dofs(as_field(v), 8)).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(HermiteElement, BubblesHaveVanishingTraces) {
  // interior shapes vanish on the boundary; their gradients vanish at the vertices
  const HermiteElement h(kTri, 4);
  const auto bubbles = h.bubble_functions();
  EXPECT_EQ(static_cast<int>(bubbles.size()), HermiteElement::num_interior(4));
  for (const auto& b : bubbles) {
    const VectorPoly2D bx{b.x.dx(), b.y.dx()}, by{b.x.dy(), b.y.dy()};
    for (int e = 0; e < 3; ++e) {
      const auto [p, q] = kTri.edge(e);
      for (double s : {0.0, 0.21, 0.5, 0.87, 1.0}) EXPECT_LT(b(p + s * (q - p)).norm(), 1e-9);
    }
    for (const Vec2& x : kTri.v) EXPECT_LT(bx(x).norm() + by(x).norm(), 1e-8);
  }
}

TEST(HermiteElement, GlobalFunctionsAreConforming) {
  // random global V_h coefficients: continuous across interior edges, one gradient per vertex
  const Discretization d(structured_unit_square(2), 3, 3, true);
  std::mt19937 rng(22);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd g(d.num_v());
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = u(rng);
  std::vector<VectorPoly2D> local;
  for (int c = 0; c < d.mesh().num_cells(); ++c) local.push_back(d.hermite(c).combine(d.v_map(c).gather(g)));
  const TriMesh& m = d.mesh();
  int checked = 0;
  for (int e = 0; e < m.num_edges(); ++e) {
    if (m.is_boundary_edge(e)) continue;
    const auto [c0, c1] = m.edge_cells(e);
    const Vec2 a = m.vertex(m.edge(e)[0]), b = m.vertex(m.edge(e)[1]);
    for (double s : {0.0, 0.3, 0.5, 0.9, 1.0}) {
      const Vec2 x = a + s * (b - a);
      for (int comp = 0; comp < 2; ++comp) {
        const Poly2D& p0 = local[c0][comp];
        const Poly2D& p1 = local[c1][comp];
        EXPECT_NEAR(p0(x), p1(x), 1e-9);
        if (s == 0.0 || s == 1.0) {
          EXPECT_NEAR(p0.dx()(x), p1.dx()(x), 1e-8);
          EXPECT_NEAR(p0.dy()(x), p1.dy()(x), 1e-8);
        }
      }
    }
    ++checked;
  }
  EXPECT_EQ(checked, m.num_interior_edges());
}
