#pragma once

#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "divdiv/assembly.hpp"
#include "divdiv/commuting.hpp"

namespace divdiv {

/// Rank/dimension bookkeeping for the maps of a complex, plus residuals of
/// identities that should vanish.
struct ComplexReport {
  struct Arrow {
    std::string name;
    int domain_dim = 0;
    int rank = 0;
    int expected_rank = 0;
    int kernel_dim() const { return domain_dim - rank; }
    bool ok() const { return rank == expected_rank; }
  };
  struct Identity {
    std::string name;
    int lhs = 0;
    int rhs = 0;
    bool ok() const { return lhs == rhs; }
  };
  struct Residual {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool ok() const { return value <= tol; }
  };

  std::string title;
  std::vector<Arrow> arrows;
  std::vector<Identity> identities;
  std::vector<Residual> residuals;

  /// `reference` sets a floor for the singular-value cutoff when the matrix may be entirely round-off.
  void arrow(std::string name, const Eigen::MatrixXd& a, int expected, double reference = 0.0) {
    arrows.push_back({std::move(name), static_cast<int>(a.cols()), numerical_rank(a, kRankTolerance, reference), expected});
  }
  void identity(std::string name, int lhs, int rhs) { identities.push_back({std::move(name), lhs, rhs}); }
  void residual(std::string name, double v, double tol) { residuals.push_back({std::move(name), v, tol}); }
  const Arrow& find(const std::string& name) const {
    for (const auto& a : arrows)
      if (a.name == name) return a;
    throw std::out_of_range("ComplexReport: no arrow " + name);
  }

  bool passed() const {
    for (const auto& a : arrows)
      if (!a.ok()) return false;
    for (const auto& i : identities)
      if (!i.ok()) return false;
    for (const auto& r : residuals)
      if (!r.ok()) return false;
    return true;
  }

  void append(const ComplexReport& o) {
    arrows.insert(arrows.end(), o.arrows.begin(), o.arrows.end());
    identities.insert(identities.end(), o.identities.begin(), o.identities.end());
    residuals.insert(residuals.end(), o.residuals.begin(), o.residuals.end());
  }

  void print(std::ostream& out) const {
    out << "== " << title << "\n";
    for (const auto& a : arrows)
      out << (a.ok() ? "  ok   " : "  FAIL ") << a.name << ": dim " << a.domain_dim << ", rank " << a.rank << " (expected "
          << a.expected_rank << "), kernel " << a.kernel_dim() << "\n";
    for (const auto& i : identities)
      out << (i.ok() ? "  ok   " : "  FAIL ") << i.name << ": " << i.lhs << " vs " << i.rhs << "\n";
    for (const auto& r : residuals)
      out << (r.ok() ? "  ok   " : "  FAIL ") << r.name << ": " << r.value << " (tol " << r.tol << ")\n";
  }
};

namespace detail {

inline Eigen::VectorXd flatten_any(const SymTensorPoly2D& t, int m) { return flatten(t, m); }
inline Eigen::VectorXd flatten_any(const VectorPoly2D& t, int m) { return flatten(t, m); }
inline Eigen::VectorXd flatten_any(const Poly2D& p, int m) { return p.raised(m).coeffs(); }

template <class T>
Eigen::MatrixXd coefficient_matrix(const std::vector<T>& images, int degree) {
  if (images.empty()) return Eigen::MatrixXd(0, 0);
  const Eigen::VectorXd first = flatten_any(images[0], degree);
  Eigen::MatrixXd a(first.size(), images.size());
  for (std::size_t j = 0; j < images.size(); ++j) a.col(j) = flatten_any(images[j], degree);
  return a;
}

template <class T>
double max_coeff(const std::vector<T>& v) {
  double r = 0.0;
  for (const auto& x : v) r = std::max(r, x.max_abs_coeff());
  return r;
}

inline std::vector<Poly2D> scalar_basis(const Frame& f, int m) { return m < 0 ? std::vector<Poly2D>{} : monomial_basis(f, m); }

}  // namespace detail

/// Exactness of the polynomial div-div complex, its Koszul complex, the
/// Hessian complex and its Koszul complex, the two direct sums, and the
/// divdiv(x x^T q) identity on homogeneous q of degrees 0..4.
inline ComplexReport check_poly_complexes(int k, unsigned seed = 1) {
  if (k < 3) throw std::invalid_argument("check_poly_complexes: k >= 3 required");
  using detail::coefficient_matrix;
  const Frame f{Vec2::Zero(), 1.0};
  ComplexReport r;
  r.title = "polynomial complexes, k = " + std::to_string(k);
  const int dPk1 = dim_P(k + 1), dPk = dim_P(k), dPk2 = dim_P(k - 2), dPkm1 = dim_P(k - 1);

  // RT -> P_{k+1}(R^2) -> P_k(S) -> P_{k-2} -> 0
  const auto vk1 = vector_monomial_basis(f, k + 1);
  const auto tk = tensor_monomial_basis(f, k);
  std::vector<SymTensorPoly2D> sc;
  for (const auto& v : vk1) sc.push_back(sym_curl(v));
  std::vector<Poly2D> dd;
  for (const auto& t : tk) dd.push_back(divdiv(t));
  r.arrow("sym curl: P_{k+1}(R2) -> P_k(S)", coefficient_matrix(sc, k), 2 * dPk1 - 3);
  r.arrow("divdiv: P_k(S) -> P_{k-2}", coefficient_matrix(dd, k - 2), dPk2);
  r.identity("ker divdiv = im sym curl", 3 * dPk - dPk2, r.find("sym curl: P_{k+1}(R2) -> P_k(S)").rank);
  {
    std::vector<Poly2D> comp;
    for (const auto& s : sc) comp.push_back(divdiv(s));
    r.residual("divdiv o sym curl", detail::max_coeff(comp), 1e-12);
    const Poly2D x1 = Poly2D::coordinate(f, 0), x2 = Poly2D::coordinate(f, 1);
    const std::vector<VectorPoly2D> rt = {{Poly2D::constant(f, 1), Poly2D(f, 0)}, {Poly2D(f, 0), Poly2D::constant(f, 1)}, {x1, x2}};
    std::vector<SymTensorPoly2D> z;
    for (const auto& v : rt) z.push_back(sym_curl(v));
    r.residual("sym curl RT", detail::max_coeff(z), 1e-12);
  }

  // 0 -> P_{k-2} -> P_k(S) -> P_{k+1}(R^2) -> RT -> 0
  const auto pk2 = detail::scalar_basis(f, k - 2);
  std::vector<SymTensorPoly2D> xx;
  for (const auto& q : pk2) xx.push_back(xxT_mul(q));
  std::vector<VectorPoly2D> xp;
  for (const auto& t : tk) xp.push_back(xperp_mul(t));
  std::vector<VectorPoly2D> prt;
  for (const auto& v : vk1) prt.push_back(pi_RT(v));
  r.arrow("x x^T: P_{k-2} -> P_k(S)", coefficient_matrix(xx, k), dPk2);
  r.arrow("x^perp: P_k(S) -> P_{k+1}(R2)", coefficient_matrix(xp, k + 1), 3 * dPk - dPk2);
  r.arrow("pi_RT: P_{k+1}(R2) -> RT", coefficient_matrix(prt, 1), 3);
  r.identity("ker pi_RT = im x^perp", 2 * dPk1 - 3, r.find("x^perp: P_k(S) -> P_{k+1}(R2)").rank);
  {
    std::vector<VectorPoly2D> c1, c2;
    for (const auto& t : xx) c1.push_back(xperp_mul(t));
    for (const auto& v : xp) c2.push_back(pi_RT(v));
    r.residual("x^perp o x x^T", detail::max_coeff(c1), 1e-12);
    r.residual("pi_RT o x^perp", detail::max_coeff(c2), 1e-12);
  }

  // P_k(S) = C_k + C_k^oplus, divdiv bijective on C_k^oplus
  {
    const auto bc = basis_of_space(SpaceTag::C, k, f);
    const auto bo = basis_of_space(SpaceTag::COplus, k, f);
    std::vector<SymTensorPoly2D> both = bc;
    both.insert(both.end(), bo.begin(), bo.end());
    r.arrow("C_k + C_k^oplus spans P_k(S)", coefficient_matrix(both, k), 3 * dPk);
    r.identity("dim C_k", static_cast<int>(bc.size()), k * k + 5 * k + 3);
    r.identity("dim C_k^oplus", static_cast<int>(bo.size()), k * (k - 1) / 2);
    std::vector<Poly2D> ddo;
    for (const auto& t : bo) ddo.push_back(divdiv(t));
    r.arrow("divdiv: C_k^oplus -> P_{k-2}", coefficient_matrix(ddo, k - 2), dPk2);
  }

  // P_1 -> P_{k+1} -> P_{k-1}(S) -> P_{k-2}(R^2) -> 0
  const auto pk1 = monomial_basis(f, k + 1);
  const auto tkm1 = tensor_monomial_basis(f, k - 1);
  std::vector<SymTensorPoly2D> hs;
  for (const auto& q : pk1) hs.push_back(hess(q));
  std::vector<VectorPoly2D> rt;
  for (const auto& t : tkm1) rt.push_back(rot(t));
  r.arrow("hess: P_{k+1} -> P_{k-1}(S)", coefficient_matrix(hs, k - 1), dPk1 - 3);
  r.arrow("rot: P_{k-1}(S) -> P_{k-2}(R2)", coefficient_matrix(rt, k - 2), 2 * dPk2);
  r.identity("ker rot = im hess", 3 * dPkm1 - 2 * dPk2, r.find("hess: P_{k+1} -> P_{k-1}(S)").rank);
  {
    std::vector<VectorPoly2D> c;
    for (const auto& h : hs) c.push_back(rot(h));
    r.residual("rot o hess", detail::max_coeff(c), 1e-12);
  }

  // 0 -> P_{k-2}(R^2) -> P_{k-1}(S) -> P_{k+1} -> P_1 -> 0
  const auto vk2 = vector_monomial_basis(f, k - 2);
  std::vector<SymTensorPoly2D> sx;
  for (const auto& v : vk2) sx.push_back(sym_xperp_outer(v));
  std::vector<Poly2D> xtx;
  for (const auto& t : tkm1) xtx.push_back(xtx_sandwich(t));
  std::vector<Poly2D> p1;
  for (const auto& q : pk1) p1.push_back(pi_1(q));
  r.arrow("sym(x^perp (x) .): P_{k-2}(R2) -> P_{k-1}(S)", coefficient_matrix(sx, k - 1), 2 * dPk2);
  r.arrow("x^T . x: P_{k-1}(S) -> P_{k+1}", coefficient_matrix(xtx, k + 1), dPk1 - 3);
  r.arrow("pi_1: P_{k+1} -> P_1", coefficient_matrix(p1, 1), 3);
  r.identity("ker x^T.x = im sym(x^perp (x) .)", 3 * dPkm1 - (dPk1 - 3), r.find("sym(x^perp (x) .): P_{k-2}(R2) -> P_{k-1}(S)").rank);
  {
    std::vector<Poly2D> c1, c2;
    for (const auto& t : sx) c1.push_back(xtx_sandwich(t));
    for (const auto& q : xtx) c2.push_back(pi_1(q));
    r.residual("x^T.x o sym(x^perp (x) .)", detail::max_coeff(c1), 1e-12);
    r.residual("pi_1 o x^T.x", detail::max_coeff(c2), 1e-12);
  }

  // P_{k-1}(S) = hess P_{k+1} + sym(x^perp (x) P_{k-2}(R^2)); rot bijective on the second part
  {
    std::vector<SymTensorPoly2D> both = hs;
    both.insert(both.end(), sx.begin(), sx.end());
    r.arrow("hess P_{k+1} + sym(x^perp (x) P_{k-2}) spans P_{k-1}(S)", coefficient_matrix(both, k - 1), 3 * dPkm1);
    std::vector<VectorPoly2D> rs;
    for (const auto& t : sx) rs.push_back(rot(t));
    const Eigen::MatrixXd m = coefficient_matrix(rs, k - 2);
    r.arrow("rot: sym(x^perp (x) P_{k-2}) -> P_{k-2}(R2)", m, 2 * dPk2);
    r.identity("rot on sym(x^perp (x) .) is square", static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  }

  // divdiv(x x^T q) = (d+3)(d+2) q for homogeneous q of degree d
  {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int d = 0; d <= 4; ++d) {
      Poly2D q(f, d);
      for (const auto& m : homogeneous_basis(f, d)) q += u(rng) * m;
      const Poly2D lhs = divdiv(xxT_mul(q));
      const Poly2D diff = lhs - (d + 3.0) * (d + 2.0) * q;
      worst = std::max(worst, diff.max_abs_coeff() / std::max(q.max_abs_coeff(), 1e-300));
    }
    r.residual("divdiv(x x^T q) = (d+3)(d+2) q, d = 0..4", worst, 1e-12);
  }
  return r;
}

/// Local complexes on one triangle: V_{l+1}(K) -> Sigma_{l,k}(K) -> P_{k-2}(K)
/// and the reduced complex of bubbles.
inline ComplexReport check_local_fem_complexes(int l, int k, const Triangle& tri) {
  DivDivElement de(tri, l, k);
  HermiteElement he(tri, l);
  OrthonormalBasis qb(tri, k - 2);
  ComplexReport r;
  r.title = "local element complexes, l = " + std::to_string(l) + ", k = " + std::to_string(k);

  // sym curl in DOF coordinates of Sigma_{l,k}(K)
  const int nv = he.dimension(), ns = de.dimension();
  Eigen::MatrixXd sc(ns, nv);
  double outside = 0.0;
  for (int j = 0; j < nv; ++j) {
    const SymTensorPoly2D s = sym_curl(he.shape(j));
    sc.col(j) = de.eval_dofs(s);
    // the image must lie in the shape space: Pi_K reproduces it
    const SymTensorPoly2D back = de.combine(sc.col(j));
    outside = std::max(outside, (back - s.raised(de.degree())).max_abs_coeff() / std::max(s.max_abs_coeff(), 1e-300));
  }
  r.residual("sym curl V_{l+1}(K) inside Sigma_{l,k}(K)", outside, 1e-9);
  r.arrow("sym curl: V_{l+1}(K) -> Sigma(K)", sc, nv - 3);

  // divdiv in the orthonormal basis of P_{k-2}(K)
  Eigen::MatrixXd dd(qb.size(), ns);
  for (int j = 0; j < ns; ++j) dd.col(j) = qb.project_coeffs(divdiv(de.shape(j)));
  r.arrow("divdiv: Sigma(K) -> P_{k-2}(K)", dd, qb.size());
  r.identity("ker divdiv = im sym curl (local)", ns - r.find("divdiv: Sigma(K) -> P_{k-2}(K)").rank,
             r.find("sym curl: V_{l+1}(K) -> Sigma(K)").rank);
  r.identity("dim Sigma(K)", ns, DivDivElement::dimension(l, k));
  r.identity("dim V(K)", nv, HermiteElement::dimension(l));

  // reduced complex
  const auto bubbles = he.bubble_functions();
  const int off = de.first_interior_dof();
  const int n0 = ns - off;
  Eigen::MatrixXd sc0(n0, bubbles.size());
  double boundary = 0.0;
  for (std::size_t j = 0; j < bubbles.size(); ++j) {
    const Eigen::VectorXd dofs = de.eval_dofs(sym_curl(bubbles[j]));
    boundary = std::max(boundary, dofs.head(off).cwiseAbs().maxCoeff() / std::max(dofs.cwiseAbs().maxCoeff(), 1e-300));
    sc0.col(j) = dofs.tail(n0);
  }
  r.residual("sym curl of bubbles has vanishing boundary DOFs", boundary, 1e-9);
  r.arrow("sym curl: V0(K) -> Sigma0(K)", sc0, static_cast<int>(bubbles.size()));
  const Eigen::MatrixXd dd0 = dd.rightCols(n0);
  // the first three orthonormal functions span P_1 (Cholesky keeps the graded order)
  const double p1_component = dd0.topRows(3).cwiseAbs().maxCoeff() / std::max(dd.cwiseAbs().maxCoeff(), 1e-300);
  r.residual("divdiv Sigma0(K) orthogonal to P_1", p1_component, 1e-9);
  r.arrow("divdiv: Sigma0(K) -> P_{k-2}(K)/P_1", dd0, dim_P(k - 2) - 3, singular_values(dd)[0]);
  r.identity("dim divdiv Sigma0 = k(k-1)/2 - 3", r.find("divdiv: Sigma0(K) -> P_{k-2}(K)/P_1").rank, k * (k - 1) / 2 - 3);
  r.identity("ker divdiv|Sigma0 = sym curl V0", n0 - r.find("divdiv: Sigma0(K) -> P_{k-2}(K)/P_1").rank,
             r.find("sym curl: V0(K) -> Sigma0(K)").rank);
  return r;
}

/// Sigma_h coefficients of sym curl applied to each V_h basis function
/// (one column per V_h function). Shared functionals are computed from every
/// incident cell; `consistency` receives the largest relative disagreement.
inline Eigen::MatrixXd global_sym_curl_matrix(const Discretization& d, double* consistency = nullptr) {
  const TriMesh& m = d.mesh();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d.num_sigma(), d.num_v());
  std::vector<char> set(d.num_sigma(), 0);
  double worst = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const DivDivElement& de = d.element(c);
    const HermiteElement& he = d.hermite(c);
    const CellMap& sm = d.sigma_map(c);
    const CellMap& vm = d.v_map(c);
    Eigen::MatrixXd loc(de.dimension(), he.dimension());
    for (int j = 0; j < he.dimension(); ++j) loc.col(j) = de.eval_dofs(sym_curl(he.shape(j)));
    for (int i = 0; i < de.dimension(); ++i) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(d.num_v());
      for (int j = 0; j < he.dimension(); ++j) row[vm.index[j]] += vm.factor[j] * loc(i, j) / sm.factor[i];
      const int gi = sm.index[i];
      if (!set[gi]) {
        g.row(gi) = row;
        set[gi] = 1;
      } else {
        worst = std::max(worst, (g.row(gi) - row).cwiseAbs().maxCoeff());
      }
    }
  }
  if (consistency) *consistency = worst / std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  return g;
}

/// Global complex RT -> V_h -> Sigma_h -> Q_h -> 0 on a small mesh, by dense ranks.
inline ComplexReport check_global_fem_complex(const TriMesh& mesh, int l, int k) {
  const Discretization d(mesh, l, k, true);
  ComplexReport r;
  r.title = "global complex, l = " + std::to_string(l) + ", k = " + std::to_string(k) + ", " +
            std::to_string(mesh.num_cells()) + " cells";
  const int nV = mesh.num_vertices(), nE = mesh.num_edges(), nT = mesh.num_cells();
  r.identity("dim Sigma_h (enumerated vs counted)", d.num_sigma(), Discretization::sigma_dimension_formula(mesh, l, k));
  r.identity("dim Q_h", d.num_q(), k * (k - 1) / 2 * nT);
  r.identity("dim V_h", d.num_v(), 6 * nV + 2 * (l - 2) * nE + l * (l - 1) * nT);
  r.identity("Euler: #E + 1 = #V + #T", nE + 1, nV + nT);

  const MixedSystem s = assemble_mixed(d, nullptr, 2 * (l + 1));
  const Eigen::MatrixXd b(s.B);
  double consistency = 0.0;
  const Eigen::MatrixXd g = global_sym_curl_matrix(d, &consistency);
  r.residual("shared DOFs of sym curl V_h agree across cells", consistency, 1e-9);
  r.arrow("divdiv: Sigma_h -> Q_h", b, d.num_q());
  r.arrow("sym curl: V_h -> Sigma_h", g, d.num_v() - 3);
  const double bg = (b * g).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff() * g.cwiseAbs().maxCoeff(), 1e-300);
  r.residual("divdiv o sym curl on V_h", bg, 1e-10);
  const int rank_b = r.find("divdiv: Sigma_h -> Q_h").rank;
  const int rank_g = r.find("sym curl: V_h -> Sigma_h").rank;
  r.identity("ker divdiv = im sym curl (global)", d.num_sigma() - rank_b, rank_g);
  r.identity("alternating sum 3 - dim V_h + dim Sigma_h - dim Q_h", 3 - d.num_v() + d.num_sigma() - d.num_q(), 0);
  return r;
}

/// Random polynomial fields in the frame of the unit square.
inline SymTensorPoly2D random_tensor(int degree, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Frame f{Vec2(0.5, 0.5), 1.0};
  SymTensorPoly2D t(f, degree);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < dim_P(degree); ++i) t[c].coeffs()[i] = u(rng);
  return t;
}
inline VectorPoly2D random_vector(int degree, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Frame f{Vec2(0.5, 0.5), 1.0};
  VectorPoly2D v(f, degree);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < dim_P(degree); ++i) v[c].coeffs()[i] = u(rng);
  return v;
}

/// divdiv Pi_h tau = Q_h divdiv tau and sym curl I_h v = Pi_h sym curl v for
/// random tau in P_{k+2}(S), v in P_{k+3}(R^2); relative L2 residuals.
inline ComplexReport check_commuting_diagram(const TriMesh& mesh, int l, int k, unsigned seed = 1) {
  std::mt19937 rng(seed);
  const SymTensorPoly2D tau = random_tensor(k + 2, rng);
  const VectorPoly2D v = random_vector(k + 3, rng);
  const Poly2D ddt = divdiv(tau);
  const SymTensorPoly2D scv = sym_curl(v);
  double r1 = 0, n1 = 0, r2 = 0, n2 = 0, rt = 0;
  const Frame f = v.frame();
  const Poly2D x1 = Poly2D::coordinate(f, 0), x2 = Poly2D::coordinate(f, 1);
  const VectorPoly2D rtv{Poly2D::constant(f, 0.3) + 0.7 * x1, Poly2D::constant(f, -0.2) + 0.7 * x2};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Triangle t = mesh.triangle(c);
    const DivDivElement de(t, l, k);
    const HermiteElement he(t, l);
    const OrthonormalBasis qb(t, k - 2);
    CommutingInterpolator ci(he, de);
    const Poly2D e1 = divdiv(de.interpolate(tau)) - qb.project(ddt).in_frame(de.frame());
    r1 += inner_triangle(e1, e1, t);
    n1 += inner_triangle(ddt, ddt, t);
    const SymTensorPoly2D e2 = sym_curl(ci(v)) - de.interpolate(scv);
    r2 += inner_triangle(e2, e2, t);
    n2 += inner_triangle(scv, scv, t);
    const VectorPoly2D erv = ci(rtv) - in_frame(rtv, de.frame());
    rt += inner_triangle(erv, erv, t) + inner_triangle(de.interpolate(sym_curl(rtv)), de.interpolate(sym_curl(rtv)), t);
  }
  ComplexReport r;
  r.title = "commuting diagram, l = " + std::to_string(l) + ", k = " + std::to_string(k) + ", " +
            std::to_string(mesh.num_cells()) + " cells";
  r.residual("divdiv Pi_h tau = Q_h divdiv tau", std::sqrt(r1 / n1), 1e-9);
  r.residual("sym curl I_h v = Pi_h sym curl v", std::sqrt(r2 / n2), 1e-9);
  r.residual("I_h v = v and Pi_h sym curl v = 0 on RT", std::sqrt(rt), 1e-10);
  return r;
}

}  // namespace divdiv
