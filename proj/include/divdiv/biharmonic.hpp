#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "divdiv/assembly.hpp"

namespace divdiv {

/// Clamped plate on the unit square with u = (sin(pi x) sin(pi y))^2.
/// sigma = -hess u and f = -laplace^2 u, so that divdiv sigma = f.
struct ManufacturedCase {
  // S(t) = sin^2(pi t) and its derivatives
  static double S(double t, int order) {
    constexpr double pi = std::numbers::pi;
    switch (order) {
      case 0: return std::pow(std::sin(pi * t), 2);
      case 1: return pi * std::sin(2 * pi * t);
      case 2: return 2 * pi * pi * std::cos(2 * pi * t);
      case 3: return -4 * pi * pi * pi * std::sin(2 * pi * t);
      case 4: return -8 * pi * pi * pi * pi * std::cos(2 * pi * t);
    }
    throw std::invalid_argument("ManufacturedCase::S: derivative order above 4");
  }
  static double D(const Vec2& x, int a, int b) { return S(x.x(), a) * S(x.y(), b); }

  double u(const Vec2& x) const { return D(x, 0, 0); }
  Vec2 grad_u(const Vec2& x) const { return {D(x, 1, 0), D(x, 0, 1)}; }
  Mat2 hess_u(const Vec2& x) const {
    Mat2 h;
    h << D(x, 2, 0), D(x, 1, 1), D(x, 1, 1), D(x, 0, 2);
    return h;
  }
  Sym2 sigma(const Vec2& x) const { return {-D(x, 2, 0), -D(x, 1, 1), -D(x, 0, 2)}; }
  Sym2 sigma_dx(const Vec2& x) const { return {-D(x, 3, 0), -D(x, 2, 1), -D(x, 1, 2)}; }
  Sym2 sigma_dy(const Vec2& x) const { return {-D(x, 2, 1), -D(x, 1, 2), -D(x, 0, 3)}; }
  double f(const Vec2& x) const { return -(D(x, 4, 0) + 2.0 * D(x, 2, 2) + D(x, 0, 4)); }

  SymTensorField sigma_field() const {
    return {[mc = *this](const Vec2& x) { return mc.sigma(x); }, [mc = *this](const Vec2& x) { return mc.sigma_dx(x); },
            [mc = *this](const Vec2& x) { return mc.sigma_dy(x); }};
  }
  ScalarFunction f_function() const {
    return [mc = *this](const Vec2& x) { return mc.f(x); };
  }

  /// Quadrature degree used for the trigonometric data.
  static int quad_degree(int l) { return 2 * (l + 3) + 4; }
};

struct Solution {
  Eigen::VectorXd sigma;   ///< over Sigma_h, or Sigma~_h for the hybrid solve
  Eigen::VectorXd u;       ///< over Q_h
  Eigen::VectorXd lambda;  ///< over Lambda_h (hybrid only)
  double residual = 0.0;   ///< relative residual of the saddle system
  bool hybrid = false;
};

/// Sparse LU solve with a residual check.
inline Eigen::VectorXd solve_saddle(const SpMat& a, const Eigen::VectorXd& b, double& residual, double tol = 1e-10) {
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) throw NumericalError("saddle-point factorization failed: " + lu.lastErrorMessage());
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw NumericalError("saddle-point solve failed");
  const double bn = b.norm();
  residual = (a * x - b).norm() / (bn > 0 ? bn : 1.0);
  if (!(residual <= tol)) throw NumericalError("saddle-point residual " + std::to_string(residual) + " above tolerance");
  return x;
}

inline Solution solve_mixed(const MixedSystem& s) {
  Solution out;
  const Eigen::VectorXd x = solve_saddle(s.saddle(), s.rhs(), out.residual);
  out.sigma = x.head(s.n_sigma());
  out.u = x.tail(s.n_q());
  return out;
}

inline Solution solve_hybrid(const HybridSystem& s) {
  Solution out;
  out.hybrid = true;
  const Eigen::VectorXd x = solve_saddle(s.saddle(), s.rhs(), out.residual);
  out.sigma = x.head(s.n_sigma());
  out.u = x.segment(s.n_sigma(), s.n_q());
  out.lambda = x.tail(s.n_lambda());
  return out;
}

/// sigma_h restricted to cell c.
inline SymTensorPoly2D cell_sigma(const Discretization& d, int c, const Eigen::VectorXd& g, bool hybrid = false) {
  const CellMap& m = hybrid ? d.sigma_hybrid_map(c) : d.sigma_map(c);
  return d.element(c).combine(m.gather(g));
}

inline Poly2D cell_q(const Discretization& d, int c, const Eigen::VectorXd& u) {
  return d.q_basis(c).combine(u.segment(d.q_index(c, 0), d.q_local()));
}

/// Value, gradient and Hessian of a piecewise function at a point of a cell.
struct Jet {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
};
using PiecewiseFunction = std::function<Jet(int cell, const Vec2& x)>;

/// Piecewise polynomial, one polynomial per cell.
inline PiecewiseFunction piecewise(const std::vector<Poly2D>& p) {
  struct Cell {
    Poly2D v;
    VectorPoly2D g;
    SymTensorPoly2D h;
  };
  auto cells = std::make_shared<std::vector<Cell>>();
  for (const auto& q : p) cells->push_back({q, grad(q), hess(q)});
  return [cells](int c, const Vec2& x) {
    const Cell& k = (*cells)[c];
    return Jet{k.v(x), k.g(x), k.h(x).matrix()};
  };
}

inline PiecewiseFunction difference(PiecewiseFunction a, PiecewiseFunction b) {
  return [a, b](int c, const Vec2& x) {
    const Jet p = a(c, x), q = b(c, x);
    return Jet{p.value - q.value, p.grad - q.grad, p.hess - q.hess};
  };
}

/// Jump of a piecewise function across edge e at global parameter u:
/// w(K+) - w(K-) with K+ the cell whose outward normal is n_e; on the
/// boundary the trace itself, taken with the cell's outward normal.
inline std::pair<double, double> edge_jump(const TriMesh& m, const PiecewiseFunction& v, int e, double u) {
  const auto& ab = m.edge(e);
  const Vec2 a = m.vertex(ab[0]), b = m.vertex(ab[1]);
  const Vec2 x = a + u * (b - a);
  const Vec2 n = m.edge_normal(e);
  double jv = 0.0, jn = 0.0;
  for (int c : m.edge_cells(e)) {
    if (c < 0) continue;
    int s = 0;
    for (const auto& ce : m.cell_edges(c))
      if (ce.edge == e) s = ce.sign;
    const Jet j = v(c, x);
    jv += s * j.value;
    jn += s * j.grad.dot(n);
  }
  return {jv, jn};
}

/// Mesh-dependent norm |v|_{2,h}.
inline double norm_2h(const TriMesh& m, const PiecewiseFunction& v, int quad_degree) {
  double s = 0.0;
  for (int c = 0; c < m.num_cells(); ++c)
    for (const auto& q : triangle_rule(m.triangle(c), quad_degree)) s += q.w * v(c, q.x).hess.squaredNorm();
  const auto& rule = gauss_legendre_01(quad_degree);
  for (int e = 0; e < m.num_edges(); ++e) {
    const double h = m.edge_length(e);
    double jv = 0.0, jn = 0.0;
    for (const auto& q : rule) {
      const auto [a, b] = edge_jump(m, v, e, q.x);
      jv += q.w * h * a * a;
      jn += q.w * h * b * b;
    }
    s += jv / (h * h * h) + jn / h;
  }
  return std::sqrt(s);
}

inline PiecewiseFunction q_function(const Discretization& d, const Eigen::VectorXd& u) {
  std::vector<Poly2D> p;
  for (int c = 0; c < d.mesh().num_cells(); ++c) p.push_back(cell_q(d, c, u));
  return piecewise(p);
}

/// Coefficients of Q_h g for the orthonormal basis.
inline Eigen::VectorXd project_q(const Discretization& d, const ScalarFunction& g, int quad_degree) {
  Eigen::VectorXd out(d.num_q());
  for (int c = 0; c < d.mesh().num_cells(); ++c)
    out.segment(d.q_index(c, 0), d.q_local()) = d.q_basis(c).project_coeffs(g, quad_degree);
  return out;
}

/// Local H^2 projection of -sigma_h with the P1 moments of u_h, in P_{min(l,k)+2}(K).
inline std::vector<Poly2D> postprocess_ustar(const Discretization& d, const Solution& s) {
  const int p = std::min(d.l(), d.k()) + 2;
  std::vector<Poly2D> out;
  for (int c = 0; c < d.mesh().num_cells(); ++c) {
    const Triangle t = d.mesh().triangle(c);
    const Frame f = frame_of(t);
    const auto mono = monomial_basis(f, p);
    const int n = static_cast<int>(mono.size());
    std::vector<SymTensorPoly2D> h;
    for (const auto& m : mono) h.push_back(hess(m).raised(std::max(p - 2, 0)));
    const SymTensorPoly2D sig = cell_sigma(d, c, s.sigma, s.hybrid);
    const Poly2D uh = cell_q(d, c, s.u);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 3, n + 3);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n + 3);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = inner_triangle(h[i], h[j], t);
      r[i] = -inner_triangle(sig, h[i], t);
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < n; ++j) a(n + i, j) = a(j, n + i) = inner_triangle(mono[i], mono[j], t);
      r[n + i] = inner_triangle(uh, mono[i], t);
    }
    const Eigen::VectorXd x = a.fullPivLu().solve(r);
    if ((a * x - r).norm() > 1e-8 * std::max(r.norm(), 1e-300) && r.norm() > 0)
      throw NumericalError("postprocess_ustar: local system is singular");
    Poly2D u(f, p);
    for (int i = 0; i < n; ++i) u += x[i] * mono[i];
    out.push_back(u);
  }
  return out;
}

struct ErrorRow {
  double h = 0.0;
  int dofs = 0;
  double err_sigma_L2 = 0.0;
  double err_divdiv = 0.0;
  double err_u_L2 = 0.0;
  double err_Qhu_L2 = 0.0;
  double err_Qhu_2h = 0.0;
  double err_ustar_2h = 0.0;  ///< NaN when postprocessing is off
  double err_sigma_interp = 0.0;  ///< ||sigma - Pi_h sigma||_0, for the Galerkin comparison
};

inline ErrorRow error_report(const Discretization& d, const Solution& s, const ManufacturedCase& mc,
                             const std::vector<Poly2D>* ustar = nullptr) {
  const TriMesh& m = d.mesh();
  const int qd = ManufacturedCase::quad_degree(d.l());
  ErrorRow row;
  row.h = m.max_diameter();
  row.dofs = static_cast<int>(s.sigma.size() + s.u.size() + s.lambda.size());
  const SymTensorField sf = mc.sigma_field();
  double es = 0, edd = 0, eu = 0, ei = 0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const Triangle t = m.triangle(c);
    const SymTensorPoly2D sig = cell_sigma(d, c, s.sigma, s.hybrid);
    const Poly2D dd = divdiv(sig);
    const Poly2D uh = cell_q(d, c, s.u);
    const SymTensorPoly2D pis = d.element(c).interpolate(sf, qd);
    for (const auto& q : triangle_rule(t, qd)) {
      const Sym2 ex = mc.sigma(q.x);
      es += q.w * (ex - sig(q.x)).norm2();
      ei += q.w * (ex - pis(q.x)).norm2();
      edd += q.w * std::pow(mc.f(q.x) - dd(q.x), 2);
      eu += q.w * std::pow(mc.u(q.x) - uh(q.x), 2);
    }
  }
  row.err_sigma_L2 = std::sqrt(es);
  row.err_sigma_interp = std::sqrt(ei);
  row.err_divdiv = std::sqrt(edd);
  row.err_u_L2 = std::sqrt(eu);
  const Eigen::VectorXd qu = project_q(d, [&](const Vec2& x) { return mc.u(x); }, qd);
  row.err_Qhu_L2 = (qu - s.u).norm();
  row.err_Qhu_2h = norm_2h(m, q_function(d, qu - s.u), qd);
  row.err_ustar_2h = std::nan("");
  if (ustar) {
    const PiecewiseFunction exact = [&mc](int, const Vec2& x) { return Jet{mc.u(x), mc.grad_u(x), mc.hess_u(x)}; };
    row.err_ustar_2h = norm_2h(m, difference(exact, piecewise(*ustar)), qd);
  }
  return row;
}

/// Observed rate log(e0/e1)/log(h0/h1).
inline double observed_rate(double e0, double e1, double h0, double h1) { return std::log(e0 / e1) / std::log(h0 / h1); }

/// tau_h with (divdiv tau_h, v_h) = |v_h|_{2,h}^2: zero vertex values,
/// normal-normal moments -[d_n v]/h_e, shear trace [v]/h_e^3, Hessian
/// moments of v_h in the interior and zero x^perp moments.
inline Eigen::VectorXd infsup_witness(const Discretization& d, const Eigen::VectorXd& v) {
  const TriMesh& m = d.mesh();
  const int l = d.l();
  const PiecewiseFunction vf = q_function(d, v);
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(d.num_sigma());
  const auto& rule = gauss_legendre_01(2 * (l + d.k()));
  for (int e = 0; e < m.num_edges(); ++e) {
    const double h = m.edge_length(e);
    for (const auto& q : rule) {
      const auto [jv, jn] = edge_jump(m, vf, e, q.x);
      for (int j = 0; j < l - 1; ++j) tau[d.sigma_edge_nn(e, j)] += -q.w * jn / h * legendre(j, 2 * q.x - 1);
      for (int j = 0; j < l; ++j) tau[d.sigma_edge_shear(e, j)] += q.w * h * jv / (h * h * h) * legendre(j, 2 * q.x - 1);
    }
  }
  for (int c = 0; c < m.num_cells(); ++c) {
    const DivDivElement& el = d.element(c);
    const SymTensorPoly2D hv = hess(cell_q(d, c, v));
    const int off = el.first_interior_dof();
    for (int i = off; i < el.dimension(); ++i) {
      if (el.dofs()[i].kind != DofKind::InteriorHess) continue;
      tau[d.sigma_interior(c, i - off)] = inner_triangle(hv, el.interior_tests()[i - off], el.triangle()) / el.triangle().area();
    }
  }
  return tau;
}

/// Discrete inf-sup constants of B: sqrt(lambda_min(B M^{-1} B^T)) with the
/// L2 norm on Sigma_h, and the same with the H(divdiv) norm M + B^T B.
struct StabilityConstants {
  double beta_L2 = 0.0;
  double beta_divdiv = 0.0;
};

inline StabilityConstants stability_constants(const MixedSystem& s) {
  auto lam_min = [&](const SpMat& a) {
    Eigen::SimplicialLDLT<SpMat> ldlt(a);
    if (ldlt.info() != Eigen::Success) throw NumericalError("stability_constants: factorization failed");
    const Eigen::MatrixXd bt = Eigen::MatrixXd(s.B.transpose());
    const Eigen::MatrixXd x = ldlt.solve(bt);
    const Eigen::MatrixXd schur = s.B * x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (schur + schur.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
  };
  StabilityConstants out;
  out.beta_L2 = std::sqrt(std::max(lam_min(s.M), 0.0));
  const SpMat hdd = SpMat(s.M + SpMat(s.B.transpose() * s.B));
  out.beta_divdiv = std::sqrt(std::max(lam_min(hdd), 0.0));
  return out;
}

/// L2 distance between two tensor fields given by coefficient vectors over
/// Sigma_h / Sigma~_h, cell by cell.
inline double sigma_distance(const Discretization& d, const Eigen::VectorXd& a, bool a_hybrid, const Eigen::VectorXd& b,
                             bool b_hybrid) {
  double s = 0.0;
  for (int c = 0; c < d.mesh().num_cells(); ++c) {
    const Eigen::VectorXd la = (a_hybrid ? d.sigma_hybrid_map(c) : d.sigma_map(c)).gather(a);
    const Eigen::VectorXd lb = (b_hybrid ? d.sigma_hybrid_map(c) : d.sigma_map(c)).gather(b);
    const SymTensorPoly2D diff = d.element(c).combine(la - lb);
    s += inner_triangle(diff, diff, d.element(c).triangle());
  }
  return std::sqrt(s);
}

inline double sigma_norm(const Discretization& d, const Eigen::VectorXd& a, bool hybrid) {
  return sigma_distance(d, a, hybrid, Eigen::VectorXd::Zero(a.size()), hybrid);
}

}  // namespace divdiv
