#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "divdiv/biharmonic.hpp"

using namespace divdiv;

TEST(Assembly, LocalBlocksAgainstQuadrature) {
  const Triangle t{{Vec2(0.2, 0.1), Vec2(1.0, 0.0), Vec2(0.5, 0.7)}};
  const DivDivElement el(t, 3, 3);
  const OrthonormalBasis qb(t, 1);
  const LocalBlocks b = local_blocks(el, qb);
  const int n = el.dimension();
  ASSERT_EQ(b.mass.rows(), n);
  ASSERT_EQ(b.divdiv.rows(), qb.size());
  for (int i = 0; i < n; i += 5)
    for (int j = 0; j < n; j += 3) {
      const double m = integrate_on_triangle(t, 6, [&](const Vec2& x) { return el.shape(i)(x).dot(el.shape(j)(x)); });
      EXPECT_NEAR(b.mass(i, j), m, 1e-10 * std::max(1.0, std::abs(m)));
    }
  for (int i = 0; i < qb.size(); ++i)
    for (int j = 0; j < n; ++j) {
      const Poly2D dd = divdiv::divdiv(el.shape(j));
      const double m = integrate_on_triangle(t, 6, [&](const Vec2& x) { return dd(x) * qb[i](x); });
      EXPECT_NEAR(b.divdiv(i, j), m, 1e-9 * std::max(1.0, std::abs(m)));
    }
  EXPECT_LT((b.mass - b.mass.transpose()).cwiseAbs().maxCoeff(), 1e-12 * b.mass.cwiseAbs().maxCoeff());
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(b.mass).eigenvalues()[0], 0.0);
}

TEST(Assembly, GlobalSigmaIsDivDivConforming) {
  // normal-normal trace and effective shear continuous across interior edges, full tensor at vertices
  const Discretization d(structured_unit_square(2), 3, 3);
  const TriMesh& m = d.mesh();
  std::mt19937 rng(40);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd g(d.num_sigma());
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = u(rng);
  for (int e = 0; e < m.num_edges(); ++e) {
    if (m.is_boundary_edge(e)) continue;
    const auto [c0, c1] = m.edge_cells(e);
    const SymTensorPoly2D s0 = cell_sigma(d, c0, g), s1 = cell_sigma(d, c1, g);
    const Vec2 a = m.vertex(m.edge(e)[0]), b = m.vertex(m.edge(e)[1]);
    const Vec2 n = m.edge_normal(e);
    const Poly2D sh0 = effective_shear(s0, n), sh1 = effective_shear(s1, n);
    for (double s : {0.0, 0.17, 0.5, 0.8, 1.0}) {
      const Vec2 x = a + s * (b - a);
      EXPECT_NEAR(s0(x).sandwich(n, n), s1(x).sandwich(n, n), 1e-9);
      EXPECT_NEAR(sh0(x), sh1(x), 1e-8);
    }
    for (const Vec2& x : {a, b}) EXPECT_LT((s0(x).matrix() - s1(x).matrix()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Assembly, ExactSolutionSatisfiesFirstEquation) {
  // (sigma, tau_h) + (u, divdiv tau_h) = 0 for every basis function when u is clamped
  const Discretization d(structured_unit_square(4), 3, 3);
  const ManufacturedCase mc;
  const int qd = ManufacturedCase::quad_degree(3);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(d.num_sigma()), b = a;
  for (int c = 0; c < d.mesh().num_cells(); ++c) {
    const DivDivElement& el = d.element(c);
    Eigen::VectorXd la(el.dimension()), lb(el.dimension());
    const auto rule = triangle_rule(el.triangle(), qd);
    for (int j = 0; j < el.dimension(); ++j) {
      const Poly2D dd = divdiv::divdiv(el.shape(j));
      double sa = 0, sb = 0;
      for (const auto& q : rule) {
        sa += q.w * mc.sigma(q.x).dot(el.shape(j)(q.x));
        sb += q.w * mc.u(q.x) * dd(q.x);
      }
      la[j] = sa;
      lb[j] = sb;
    }
    d.sigma_map(c).scatter_add(la, a);
    d.sigma_map(c).scatter_add(lb, b);
  }
  EXPECT_LT((a + b).cwiseAbs().maxCoeff(), 1e-8 * a.cwiseAbs().maxCoeff());
}

TEST(Assembly, ManufacturedLoadIsDivDivSigma) {
  // f = divdiv sigma, second derivatives by central differences of sigma_dx, sigma_dy
  const ManufacturedCase mc;
  const double h = 1e-5;
  for (const Vec2& x : {Vec2(0.3, 0.6), Vec2(0.71, 0.2), Vec2(0.5, 0.5)}) {
    const Sym2 sxx = (0.5 / h) * (mc.sigma_dx(x + Vec2(h, 0)) - mc.sigma_dx(x - Vec2(h, 0)));
    const Sym2 syy = (0.5 / h) * (mc.sigma_dy(x + Vec2(0, h)) - mc.sigma_dy(x - Vec2(0, h)));
    const Sym2 sxy = (0.5 / h) * (mc.sigma_dx(x + Vec2(0, h)) - mc.sigma_dx(x - Vec2(0, h)));
    const double dd = sxx.xx + 2 * sxy.xy + syy.yy;
    EXPECT_NEAR(dd, mc.f(x), 1e-5 * std::max(1.0, std::abs(mc.f(x))));
    // sigma = -hess u
    EXPECT_NEAR(mc.sigma(x).xy, -mc.hess_u(x)(0, 1), 1e-12);
  }
  EXPECT_NEAR(mc.u(Vec2(0.0, 0.3)), 0.0, 1e-15);
  EXPECT_NEAR(mc.grad_u(Vec2(1.0, 0.3)).norm(), 0.0, 1e-12);
}

TEST(Assembly, GlobalSystemShapes) {
  const Discretization d(structured_unit_square(2), 3, 3);
  const MixedSystem s = assemble_mixed(d, nullptr, 8);
  EXPECT_EQ(s.n_sigma(), 155);
  EXPECT_EQ(s.n_q(), 24);
  EXPECT_EQ(s.F.size(), 24);
  EXPECT_EQ(s.F.norm(), 0.0);
  const Eigen::MatrixXd M(s.M);
  EXPECT_LT((M - M.transpose()).cwiseAbs().maxCoeff(), 1e-12 * M.cwiseAbs().maxCoeff());
  EXPECT_EQ(s.saddle().rows(), 179);
  EXPECT_THROW(assemble_mixed(d, nullptr, 7), std::invalid_argument);

  const HybridSystem h = assemble_hybrid(d, nullptr, 8);
  EXPECT_EQ(h.n_lambda(), 3 * d.mesh().num_interior_edges());
  EXPECT_EQ(h.n_sigma(), d.num_sigma_hybrid());
  // every multiplier couples exactly the two cells of its edge
  const Eigen::MatrixXd C(h.C);
  for (int r = 0; r < C.rows(); ++r) EXPECT_EQ((C.row(r).array() != 0.0).count(), 2);
}

TEST(Assembly, CoordinateExportRoundTrip) {
  const Discretization d(structured_unit_square(1), 2, 3);
  const SpMat a = assemble_mixed(d, nullptr, 6).saddle();
  std::stringstream ss;
  write_coo(ss, a);
  std::string pct;
  int rows, cols, nnz;
  ss >> pct >> rows >> cols >> nnz;
  EXPECT_EQ(pct, "%");
  EXPECT_EQ(rows, a.rows());
  EXPECT_EQ(nnz, a.nonZeros());
  Eigen::MatrixXd back = Eigen::MatrixXd::Zero(rows, cols);
  int r, c;
  double v;
  int count = 0;
  while (ss >> r >> c >> v) {
    back(r, c) += v;
    ++count;
  }
  EXPECT_EQ(count, nnz);
  EXPECT_LT((back - Eigen::MatrixXd(a)).cwiseAbs().maxCoeff(), 1e-15);
}
