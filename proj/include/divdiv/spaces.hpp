#pragma once

#include <string>
#include <utility>
#include <vector>

#include "divdiv/koszul.hpp"
#include "divdiv/linalg.hpp"

namespace divdiv {

/// Named polynomial tensor spaces. `degree` meanings:
///   C:        sym curl P_{d+1}(R^2)       (tensor degree d)
///   COplus:   x x^T P_{d-2}               (tensor degree d, d >= 2)
///   E:        def P_{d+1}(R^2)
///   EOplus:   x^perp x^perp^T P_{d-2}
///   Hess:     hess P_d                    (tensor degree d-2)
///   SymXperp: sym(x^perp (x) P_d(R^2))    (tensor degree d+1)
///   SymX:     sym(x (x) P_d(R^2))
///   CurlCurl: curl curl P_d
enum class SpaceTag { C, COplus, E, EOplus, Hess, SymXperp, SymX, CurlCurl };

inline SpaceTag parse_space_tag(const std::string& s) {
  if (s == "C") return SpaceTag::C;
  if (s == "C+" || s == "COplus") return SpaceTag::COplus;
  if (s == "E") return SpaceTag::E;
  if (s == "E+" || s == "EOplus") return SpaceTag::EOplus;
  if (s == "hess" || s == "Hess") return SpaceTag::Hess;
  if (s == "symxperp" || s == "SymXperp") return SpaceTag::SymXperp;
  if (s == "symx" || s == "SymX") return SpaceTag::SymX;
  if (s == "curlcurl" || s == "CurlCurl") return SpaceTag::CurlCurl;
  throw std::invalid_argument("unknown space tag: " + s);
}

/// Closed-form dimensions.
inline int space_dimension(SpaceTag tag, int d) {
  switch (tag) {
    case SpaceTag::C:
    case SpaceTag::E: return d * d + 5 * d + 3;
    case SpaceTag::COplus:
    case SpaceTag::EOplus: return dim_P(d - 2);
    case SpaceTag::Hess:
    case SpaceTag::CurlCurl: return std::max(dim_P(d) - 3, 0);
    case SpaceTag::SymXperp:
    case SpaceTag::SymX: return 2 * dim_P(d);
  }
  return 0;
}

namespace detail {

// Orthonormalized coefficient basis of the span of a tensor family.
inline std::vector<SymTensorPoly2D> span_basis(const std::vector<SymTensorPoly2D>& gens, const Frame& f, int m) {
  if (gens.empty()) return {};
  Eigen::MatrixXd a(3 * dim_P(m), gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) a.col(j) = flatten(gens[j], m);
  const Eigen::MatrixXd u = column_space(a);
  std::vector<SymTensorPoly2D> out;
  for (int j = 0; j < u.cols(); ++j) out.push_back(unflatten_tensor(f, m, u.col(j)));
  return out;
}

}  // namespace detail

/// A linearly independent spanning set of the tagged space in frame `f`.
/// Koszul factors use the scaled offset xi, which spans the same space as x.
inline std::vector<SymTensorPoly2D> basis_of_space(SpaceTag tag, int d, const Frame& f) {
  std::vector<SymTensorPoly2D> out;
  switch (tag) {
    case SpaceTag::C:
    case SpaceTag::E: {
      if (d < 0) return {};
      std::vector<SymTensorPoly2D> gens;
      for (const auto& v : vector_monomial_basis(f, d + 1))
        gens.push_back((tag == SpaceTag::C ? sym_curl(v) : def(v)).raised(std::max(d, 0)));
      return detail::span_basis(gens, f, std::max(d, 0));
    }
    case SpaceTag::COplus:
    case SpaceTag::EOplus:
      if (d < 2) return {};
      for (const auto& q : monomial_basis(f, d - 2)) {
        const Poly2D qs = (1.0 / (f.scale * f.scale)) * q;
        out.push_back(tag == SpaceTag::COplus ? xxT_mul(qs) : xperp_xperpT_mul(qs));
      }
      return out;
    case SpaceTag::Hess:
    case SpaceTag::CurlCurl:
      for (int deg = 2; deg <= d; ++deg)
        for (const auto& q : homogeneous_basis(f, deg)) {
          const Poly2D qs = (f.scale * f.scale) * q;
          out.push_back(tag == SpaceTag::Hess ? hess(qs) : curlcurl(qs));
        }
      return out;
    case SpaceTag::SymXperp:
    case SpaceTag::SymX:
      if (d < 0) return {};
      for (const auto& v : vector_monomial_basis(f, d)) {
        const VectorPoly2D vs = (1.0 / f.scale) * v;
        out.push_back(tag == SpaceTag::SymXperp ? sym_xperp_outer(vs) : sym_x_outer(vs));
      }
      return out;
  }
  return out;
}

/// tau = tau_C + tau_oplus with tau_C in C_k(S) and tau_oplus in x x^T P_{k-2}.
struct SplitResult {
  SymTensorPoly2D c_part;
  SymTensorPoly2D oplus_part;
  double residual = 0.0;
};

inline SplitResult split_decomposition(const SymTensorPoly2D& tau, int k) {
  if (k < 2) throw std::invalid_argument("split_decomposition: k >= 2 required");
  if (tau.degree() > k) throw std::invalid_argument("split_decomposition: tau degree exceeds k");
  const Frame& f = tau.frame();
  const auto bc = basis_of_space(SpaceTag::C, k, f);
  const auto bo = basis_of_space(SpaceTag::COplus, k, f);
  const int n = 3 * dim_P(k);
  Eigen::MatrixXd a(n, bc.size() + bo.size());
  int j = 0;
  for (const auto& b : bc) a.col(j++) = flatten(b, k);
  for (const auto& b : bo) a.col(j++) = flatten(b, k);
  if (a.cols() != n) throw NumericalError("split_decomposition: combined basis has wrong size");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (lu.rank() != n) throw NumericalError("split_decomposition: combined basis is singular");
  const Eigen::VectorXd rhs = flatten(tau, k);
  const Eigen::VectorXd c = lu.solve(rhs);
  const int nc = static_cast<int>(bc.size());
  const Eigen::VectorXd cc = a.leftCols(nc) * c.head(nc);
  const Eigen::VectorXd co = a.rightCols(a.cols() - nc) * c.tail(a.cols() - nc);
  SplitResult r{unflatten_tensor(f, k, cc), unflatten_tensor(f, k, co), 0.0};
  r.residual = (cc + co - rhs).norm() / std::max(rhs.norm(), 1e-300);
  return r;
}

}  // namespace divdiv
