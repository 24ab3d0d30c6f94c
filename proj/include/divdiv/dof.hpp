#pragma once

#include <string>

namespace divdiv {

enum class DofKind {
  VertexValue,    ///< tau(delta), component 0/1/2 = xx/xy/yy
  EdgeNN,         ///< |e|^{-1} (n^T tau n, P_j)_e
  EdgeShear,      ///< (d_t(t^T tau n) + n^T div tau, P_j)_e
  InteriorHess,   ///< |K|^{-1} (tau, hess q)_K
  InteriorXperp,  ///< |K|^{-1} (tau, sym(x^perp (x) psi))_K
  HermiteVertexValue,
  HermiteVertexGrad,  ///< h_K d_dir v_c(delta)
  HermiteEdge,        ///< |e|^{-1} (v_c, P_j)_e
  HermiteInterior,    ///< |K|^{-1} (v_c, q)_K
};

/// One local degree of freedom. Edge moments use Legendre polynomials in the
/// counterclockwise arclength parameter of the cell; `entity` is the local
/// vertex or edge index, or -1 for cell-interior functionals.
struct DofFunctional {
  DofKind kind;
  int entity = -1;
  int index = 0;      ///< moment index j, or interior test-function index
  int component = 0;  ///< tensor/vector component
  int direction = 0;  ///< gradient direction for HermiteVertexGrad
  double scale = 1.0; ///< local value = scale * canonical (mesh-shared) value

  bool on_edge() const {
    return kind == DofKind::EdgeNN || kind == DofKind::EdgeShear || kind == DofKind::HermiteEdge;
  }
  bool on_vertex() const {
    return kind == DofKind::VertexValue || kind == DofKind::HermiteVertexValue || kind == DofKind::HermiteVertexGrad;
  }
  bool interior() const { return entity < 0; }

  /// True if the functional changes sign when the edge orientation flips:
  /// reversing the parameter flips P_j by (-1)^j, and the shear trace is odd in n.
  bool odd_under_reversal() const {
    if (!on_edge()) return false;
    const bool odd_moment = (index % 2) == 1;
    return kind == DofKind::EdgeShear ? !odd_moment : odd_moment;
  }
};

inline std::string to_string(DofKind k) {
  switch (k) {
    case DofKind::VertexValue: return "VertexValue";
    case DofKind::EdgeNN: return "EdgeNN";
    case DofKind::EdgeShear: return "EdgeShear";
    case DofKind::InteriorHess: return "InteriorHess";
    case DofKind::InteriorXperp: return "InteriorXperp";
    case DofKind::HermiteVertexValue: return "HermiteVertexValue";
    case DofKind::HermiteVertexGrad: return "HermiteVertexGrad";
    case DofKind::HermiteEdge: return "HermiteEdge";
    case DofKind::HermiteInterior: return "HermiteInterior";
  }
  return "?";
}

}  // namespace divdiv
