#pragma once

#include <algorithm>
#include <limits>

#include <Eigen/Dense>

namespace divdiv {

/// Relative singular-value cutoff used for every rank decision.
inline constexpr double kRankTolerance = 1e-8;

inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) return Eigen::VectorXd();
  return Eigen::BDCSVD<Eigen::MatrixXd>(a).singularValues();
}

/// Numerical rank with cutoff tol * max(sigma_max, reference).
inline int numerical_rank(const Eigen::MatrixXd& a, double tol = kRankTolerance, double reference = 0.0) {
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double cut = tol * std::max(s[0], reference);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++r;
  return r;
}

/// 2-norm condition number; infinity when singular.
inline double condition_number(const Eigen::MatrixXd& a) {
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0 || s[s.size() - 1] == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / s[s.size() - 1];
}

/// Orthonormal basis of the column space of `a`.
inline Eigen::MatrixXd column_space(const Eigen::MatrixXd& a, double tol = kRankTolerance) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const int r = numerical_rank(a, tol);
  return svd.matrixU().leftCols(r);
}

/// Orthonormal basis of the null space of `a`.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double tol = kRankTolerance) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const int r = numerical_rank(a, tol);
  return svd.matrixV().rightCols(a.cols() - r);
}

/// Inverse of a square DOF matrix after row/column equilibration, with the
/// condition number of the equilibrated matrix.
struct EquilibratedInverse {
  Eigen::MatrixXd inverse;
  double condition = 0.0;
};

inline EquilibratedInverse equilibrated_inverse(const Eigen::MatrixXd& d) {
  const Eigen::Index n = d.rows();
  Eigen::VectorXd r(n), c(n);
  for (Eigen::Index i = 0; i < n; ++i) r[i] = 1.0 / std::max(d.row(i).cwiseAbs().maxCoeff(), 1e-300);
  const Eigen::MatrixXd dr = r.asDiagonal() * d;
  for (Eigen::Index j = 0; j < n; ++j) c[j] = 1.0 / std::max(dr.col(j).cwiseAbs().maxCoeff(), 1e-300);
  const Eigen::MatrixXd eq = dr * c.asDiagonal();
  EquilibratedInverse out;
  out.condition = condition_number(eq);
  // d^{-1} = C eq^{-1} R
  out.inverse = c.asDiagonal() * eq.fullPivLu().inverse() * r.asDiagonal();
  return out;
}

}  // namespace divdiv
