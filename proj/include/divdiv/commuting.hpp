#pragma once

#include <algorithm>

#include "divdiv/divdiv_element.hpp"
#include "divdiv/hermite_element.hpp"

namespace divdiv {

/// Commuting interpolation into V_{l+1}(K): the Hermite interpolant corrected
/// by a bubble so that sym curl(I_K v) = Pi_K(sym curl v).
///
/// The correction is found in DOF coordinates of the div-div element, where
/// sym curl of the bubble space is injective.
class CommutingInterpolator {
 public:
  CommutingInterpolator(const HermiteElement& he, const DivDivElement& de) : he_(&he), de_(&de) {
    if (he.l() != de.l()) throw std::invalid_argument("CommutingInterpolator: elements use different l");
    const auto bubbles = he.bubble_functions();
    bubble_dofs_.resize(de.dimension(), static_cast<Eigen::Index>(bubbles.size()));
    for (std::size_t i = 0; i < bubbles.size(); ++i) bubble_dofs_.col(i) = de.eval_dofs(sym_curl(bubbles[i]));
    qr_.compute(bubble_dofs_);
    if (qr_.rank() != bubble_dofs_.cols()) throw NumericalError("CommutingInterpolator: sym curl is not injective on bubbles");
  }

  /// Relative least-squares residual of the last correction.
  double last_residual() const { return residual_; }

  VectorPoly2D operator()(const VectorPoly2D& v) {
    const VectorPoly2D vt = he_->interpolate(v);
    return correct(vt, de_->eval_dofs(sym_curl(v)));
  }

  /// Smooth input; `v` must provide Hessians.
  VectorPoly2D operator()(const VectorField& v, int quad_degree) {
    const VectorPoly2D vt = he_->interpolate(v, quad_degree);
    return correct(vt, de_->eval_dofs(sym_curl(v), quad_degree));
  }

 private:
  VectorPoly2D correct(const VectorPoly2D& vt, const Eigen::VectorXd& target_dofs) {
    const Eigen::VectorXd have = de_->eval_dofs(sym_curl(vt));
    const Eigen::VectorXd rhs = target_dofs - have;
    const Eigen::VectorXd c = qr_.solve(rhs);
    // sym curl v may vanish (RT input); fall back to the Hermite part, then absolute
    const double ref = std::max({target_dofs.norm(), have.norm(), 1.0});
    residual_ = (bubble_dofs_ * c - rhs).norm() / ref;
    if (residual_ > 1e-8) throw NumericalError("CommutingInterpolator: bubble correction residual " + std::to_string(residual_));
    VectorPoly2D out = vt;
    const int off = he_->first_interior_dof();
    for (Eigen::Index i = 0; i < c.size(); ++i) out = out + c[i] * he_->shape(off + static_cast<int>(i));
    return out;
  }

  const HermiteElement* he_;
  const DivDivElement* de_;
  Eigen::MatrixXd bubble_dofs_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  double residual_ = 0.0;
};

inline VectorPoly2D interpolate_IK(const HermiteElement& he, const DivDivElement& de, const VectorPoly2D& v) {
  CommutingInterpolator ci(he, de);
  return ci(v);
}

}  // namespace divdiv
