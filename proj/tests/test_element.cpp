#include <gtest/gtest.h>

#include <random>

#include "divdiv/divdiv_element.hpp"
#include "divdiv/random.hpp"

using namespace divdiv;

namespace {

SymTensorPoly2D random_tensor(const Frame& f, int m, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  SymTensorPoly2D t(f, m);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < dim_P(m); ++i) t[c].coeffs()[i] = u(rng);
  return t;
}

const Triangle kTri{{Vec2(0.1, 0.0), Vec2(1.2, 0.3), Vec2(0.4, 0.9)}};

}  // namespace

TEST(DivDivElement, DimensionAndEntityCounts) {
  struct Case {
    int l, k, dim;
  };
  // l^2 + 5l + 3 + k(k-1)/2, tabulated by hand
  for (const Case c : {Case{2, 3, 20}, Case{3, 3, 30}, Case{3, 4, 33}, Case{4, 4, 45}, Case{4, 5, 49}}) {
    EXPECT_EQ(DivDivElement::dimension(c.l, c.k), c.dim);
    const DivDivElement e(kTri, c.l, c.k);
    EXPECT_EQ(e.dimension(), c.dim);
    EXPECT_EQ(9 + 3 * (2 * c.l - 1) + DivDivElement::num_interior(c.l, c.k), c.dim);
    int nv = 0, nn = 0, sh = 0, in = 0;
    for (const auto& d : e.dofs()) {
      switch (d.kind) {
        case DofKind::VertexValue: ++nv; break;
        case DofKind::EdgeNN: ++nn; break;
        case DofKind::EdgeShear: ++sh; break;
        default: ++in;
      }
    }
    EXPECT_EQ(nv, 9);
    EXPECT_EQ(nn, 3 * (c.l - 1));
    EXPECT_EQ(sh, 3 * c.l);
    EXPECT_EQ(in, DivDivElement::num_interior(c.l, c.k));
  }
}

TEST(DivDivElement, RejectsInvalidParameters) {
  EXPECT_THROW(DivDivElement(kTri, 2, 2), std::invalid_argument);
  EXPECT_THROW(DivDivElement(kTri, 2, 4), std::invalid_argument);
  const Triangle cw{{kTri.v[0], kTri.v[2], kTri.v[1]}};
  EXPECT_THROW(DivDivElement(cw, 3, 3), std::invalid_argument);
}

TEST(DivDivElement, DualityOnRandomTriangles) {
  std::mt19937 rng(12);
  for (int i = 0; i < 5; ++i) {
    const Triangle t = random_triangle(rng);
    for (auto [l, k] : {std::pair{2, 3}, {3, 3}, {3, 4}, {4, 4}, {4, 3}}) {
      const DivDivElement e(t, l, k);
      EXPECT_LT(e.duality_error(), 1e-8) << "l " << l << " k " << k;
    }
  }
}

TEST(DivDivElement, ScaledTriangle) {
  const double s = 1e-3;
  const Triangle small{{s * kTri.v[0], s * kTri.v[1], s * kTri.v[2]}};
  const DivDivElement a(kTri, 3, 3), b(small, 3, 3);
  EXPECT_LT(b.duality_error(), 1e-8);
  // the frame removes the size dependence of the conditioning
  EXPECT_LT(b.condition_number(), 10 * a.condition_number());
}

TEST(DivDivElement, FunctionalsAgainstQuadrature) {
  // independent route: 2D effective shear evaluated at edge quadrature points
  std::mt19937 rng(13);
  const DivDivElement e(kTri, 3, 4);
  const SymTensorPoly2D tau = random_tensor(e.frame(), 5, rng);
  const Eigen::VectorXd d = e.eval_dofs(tau);
  for (int v = 0; v < 3; ++v) {
    const Sym2 s = tau(kTri.v[v]);
    EXPECT_NEAR(d[e.vertex_dof(v, 0)], s.xx, 1e-12);
    EXPECT_NEAR(d[e.vertex_dof(v, 1)], s.xy, 1e-12);
    EXPECT_NEAR(d[e.vertex_dof(v, 2)], s.yy, 1e-12);
  }
  for (int i = 0; i < 3; ++i) {
    const auto [a, b] = kTri.edge(i);
    const double len = (b - a).norm();
    const Vec2 n = rotate_AT((b - a) / len);
    const Poly2D nn = normal_normal(tau, n), sh = effective_shear(tau, n);
    for (int j = 0; j < e.l(); ++j) {
      double mnn = 0, msh = 0;
      for (const auto& q : gauss_legendre_01(20)) {
        const Vec2 x = a + q.x * (b - a);
        mnn += q.w * nn(x) * legendre(j, 2 * q.x - 1);
        msh += q.w * len * sh(x) * legendre(j, 2 * q.x - 1);
      }
      if (j < e.l() - 1) {
        EXPECT_NEAR(d[e.edge_nn_dof(i, j)], mnn, 1e-11);
      }
      EXPECT_NEAR(d[e.edge_shear_dof(i, j)], msh, 1e-10);
    }
  }
  const int off = e.first_interior_dof();
  for (std::size_t i = 0; i < e.interior_tests().size(); ++i) {
    const double m = integrate_on_triangle(kTri, 12, [&](const Vec2& x) { return tau(x).dot(e.interior_tests()[i](x)); });
    EXPECT_NEAR(d[off + i], m / kTri.area(), 1e-11);
  }
}

TEST(DivDivElement, FieldAndPolynomialRoutesAgree) {
  std::mt19937 rng(14);
  const DivDivElement e(kTri, 3, 3);
  const SymTensorPoly2D tau = random_tensor(e.frame(), 4, rng);
  EXPECT_LT((e.eval_dofs(tau) - e.eval_dofs(as_field(tau), 8)).cwiseAbs().maxCoeff(), 1e-11);
  SymTensorField no_derivs = as_field(tau);
  no_derivs.dx = nullptr;
  EXPECT_THROW(e.eval_dofs(no_derivs, 8), std::invalid_argument);
}

TEST(DivDivElement, InterpolationIsAProjection) {
  std::mt19937 rng(15);
  for (auto [l, k] : {std::pair{2, 3}, {3, 3}, {3, 4}}) {
    const DivDivElement e(kTri, l, k);
    for (const auto& s : e.space_basis()) EXPECT_LT((e.interpolate(s) - s).max_abs_coeff(), 1e-9);
    const SymTensorPoly2D tau = random_tensor(e.frame(), k + 2, rng);
    const SymTensorPoly2D p = e.interpolate(tau);
    EXPECT_LT((e.interpolate(p) - p).max_abs_coeff(), 1e-9);
    // all functionals of tau - Pi tau vanish
    EXPECT_LT((e.eval_dofs(tau) - e.eval_dofs(p)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(DivDivElement, GreensIdentity) {
  // (tau, hess v)_K = (divdiv tau, v)_K + sum_e [ (n^T tau n, d_n v)_e - (shear, v)_e ] + sum_e [t^T tau n v]_a^b
  std::mt19937 rng(16);
  const Frame f = frame_of(kTri);
  const SymTensorPoly2D tau = random_tensor(f, 3, rng);
  std::uniform_real_distribution<double> u(-1, 1);
  Poly2D v(f, 4);
  for (int i = 0; i < dim_P(4); ++i) v.coeffs()[i] = u(rng);
  const SymTensorPoly2D hv = hess(v);
  const double lhs = integrate_on_triangle(kTri, 8, [&](const Vec2& x) { return tau(x).dot(hv(x)); });
  double rhs = integrate_on_triangle(kTri, 8, [&](const Vec2& x) { return divdiv::divdiv(tau)(x) * v(x); });
  for (int i = 0; i < 3; ++i) {
    const auto [a, b] = kTri.edge(i);
    const Vec2 t = (b - a).normalized(), n = rotate_AT(t);
    const Poly2D dn = directional(v, n);
    rhs += integrate_on_segment(a, b, 10, [&](const Vec2& x) {
      return tau(x).sandwich(n, n) * dn(x) - effective_shear(tau, n)(x) * v(x);
    });
    rhs += tau(b).sandwich(t, n) * v(b) - tau(a).sandwich(t, n) * v(a);
  }
  EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST(DivDivElement, SymCurlOfPolynomialsIsReproduced) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  const DivDivElement e(kTri, 3, 3);
  VectorPoly2D w(e.frame(), 4);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < dim_P(4); ++i) w[c].coeffs()[i] = u(rng);
  const SymTensorPoly2D s = sym_curl(w);
  EXPECT_LT((e.interpolate(s) - s).max_abs_coeff(), 1e-9);
}
