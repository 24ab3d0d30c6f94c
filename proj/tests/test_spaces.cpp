#include <gtest/gtest.h>

#include <random>

#include "divdiv/diff_ops.hpp"
#include "divdiv/spaces.hpp"

using namespace divdiv;

namespace {
const Frame kFrame{Vec2(0.3, 0.4), 0.8};

int rank_of(const std::vector<SymTensorPoly2D>& b, int m) {
  if (b.empty()) return 0;
  Eigen::MatrixXd a(3 * dim_P(m), b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a.col(i) = flatten(b[i], m);
  return static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(a).rank());
}
}  // namespace

TEST(Spaces, ClosedFormDimensions) {
  // C_k = sym curl P_{k+1}: dim 2 dim P_{k+1} - 3 = k^2 + 5k + 3
  for (int k = 1; k <= 6; ++k) {
    EXPECT_EQ(space_dimension(SpaceTag::C, k), 2 * dim_P(k + 1) - 3);
    EXPECT_EQ(space_dimension(SpaceTag::C, k) + space_dimension(SpaceTag::COplus, k), 3 * dim_P(k));
  }
  EXPECT_EQ(space_dimension(SpaceTag::C, 3), 27);
  EXPECT_EQ(space_dimension(SpaceTag::COplus, 3), 3);
  EXPECT_EQ(space_dimension(SpaceTag::Hess, 3), 7);
  EXPECT_EQ(space_dimension(SpaceTag::SymXperp, 1), 6);
}

TEST(Spaces, BasisSizesMatchDimensions) {
  for (SpaceTag tag : {SpaceTag::C, SpaceTag::COplus, SpaceTag::E, SpaceTag::EOplus, SpaceTag::Hess, SpaceTag::SymXperp,
                       SpaceTag::SymX, SpaceTag::CurlCurl})
    for (int d = 2; d <= 5; ++d) {
      const auto b = basis_of_space(tag, d, kFrame);
      EXPECT_EQ(static_cast<int>(b.size()), space_dimension(tag, d));
      int m = 0;
      for (const auto& t : b) m = std::max(m, t.degree());
      EXPECT_EQ(rank_of(b, m), static_cast<int>(b.size()));
    }
}

TEST(Spaces, MembershipByConstruction) {
  // C_k is divergence-divergence of degree k-2; E_k is rot-rot free up to degree k-2
  for (const auto& t : basis_of_space(SpaceTag::Hess, 4, kFrame)) EXPECT_LT(rot(t).max_abs_coeff(), 1e-10);
  for (const auto& t : basis_of_space(SpaceTag::CurlCurl, 4, kFrame)) EXPECT_LT(div(t).max_abs_coeff(), 1e-10);
  for (const auto& t : basis_of_space(SpaceTag::C, 3, kFrame)) EXPECT_LE(t.degree(), 3);
}

TEST(Spaces, SplitDecompositionReconstructs) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 2; k <= 5; ++k) {
    SymTensorPoly2D tau(kFrame, k);
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < dim_P(k); ++i) tau[c].coeffs()[i] = u(rng);
    const SplitResult s = split_decomposition(tau, k);
    EXPECT_LT(s.residual, 1e-12);
    EXPECT_LT((s.c_part + s.oplus_part - tau).max_abs_coeff(), 1e-10);
    // the x x^T part carries all of divdiv in degree >= 2 and the C part lies in the sym curl image
    const auto bc = basis_of_space(SpaceTag::C, k, kFrame);
    std::vector<SymTensorPoly2D> aug = bc;
    aug.push_back(s.c_part);
    EXPECT_EQ(rank_of(aug, k), static_cast<int>(bc.size()));
  }
}

TEST(Spaces, TagParsing) {
  EXPECT_EQ(parse_space_tag("C+"), SpaceTag::COplus);
  EXPECT_EQ(parse_space_tag("hess"), SpaceTag::Hess);
  EXPECT_THROW(parse_space_tag("bogus"), std::invalid_argument);
}
