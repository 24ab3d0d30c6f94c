#include <gtest/gtest.h>

#include <sstream>

#include "divdiv/complexes.hpp"

using namespace divdiv;

namespace {
void expect_passed(const ComplexReport& r) {
  std::ostringstream out;
  r.print(out);
  EXPECT_TRUE(r.passed()) << out.str();
}
}  // namespace

TEST(Complexes, ReportFlagsWrongRanks) {
  ComplexReport r;
  r.arrow("identity", Eigen::MatrixXd::Identity(4, 4), 4);
  EXPECT_TRUE(r.passed());
  r.arrow("rank one", Eigen::VectorXd::Ones(3) * Eigen::RowVectorXd::Ones(3), 2);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.find("rank one").rank, 1);
  EXPECT_EQ(r.find("rank one").kernel_dim(), 2);
}

TEST(Complexes, RoundoffMatrixHasRankZeroAgainstReference) {
  ComplexReport r;
  r.arrow("noise", 1e-14 * Eigen::MatrixXd::Random(3, 3), 0, 1.0);
  EXPECT_TRUE(r.passed());
}

class PolyComplexes : public ::testing::TestWithParam<int> {};
TEST_P(PolyComplexes, Exact) { expect_passed(check_poly_complexes(GetParam(), 5)); }
INSTANTIATE_TEST_SUITE_P(K, PolyComplexes, ::testing::Values(3, 4, 5));

TEST(Complexes, LocalOnSkewTriangles) {
  const Triangle t{{Vec2(0.0, 0.0), Vec2(2.0, 0.3), Vec2(1.7, 0.9)}};
  for (auto [l, k] : {std::pair{2, 3}, {3, 3}, {3, 4}, {4, 4}, {4, 3}}) expect_passed(check_local_fem_complexes(l, k, t));
}

TEST(Complexes, GlobalSquare2) {
  // hand count on 9 vertices, 16 edges, 8 cells with l = k = 3:
  // Sigma_h = 3*9 + 5*16 + 6*8 = 155, V_h = 6*9 + 2*16 + 6*8 = 134, Q_h = 3*8 = 24
  const ComplexReport r = check_global_fem_complex(structured_unit_square(2), 3, 3);
  expect_passed(r);
  EXPECT_EQ(r.find("divdiv: Sigma_h -> Q_h").domain_dim, 155);
  EXPECT_EQ(r.find("divdiv: Sigma_h -> Q_h").rank, 24);
  EXPECT_EQ(r.find("sym curl: V_h -> Sigma_h").domain_dim, 134);
  EXPECT_EQ(r.find("sym curl: V_h -> Sigma_h").rank, 131);
}

TEST(Complexes, GlobalOtherDegrees) {
  expect_passed(check_global_fem_complex(structured_unit_square(1), 2, 3));
  expect_passed(check_global_fem_complex(structured_unit_square(2), 3, 4));
}

TEST(Complexes, CommutingDiagram) {
  expect_passed(check_commuting_diagram(structured_unit_square(2), 3, 3, 2));
  expect_passed(check_commuting_diagram(structured_unit_square(2), 2, 3, 3));
}
