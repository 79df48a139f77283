#include <gtest/gtest.h>

#include "support.hpp"

using namespace trinom;
using trinom::testing::R;

namespace {

bool unimodular(const IntegerMatrix& m) {
  auto d = determinant(m);
  return d == 1 || d == -1;
}

void check_snf(const IntegerMatrix& m) {
  auto snf = smith_normal_form(m);
  ASSERT_EQ(snf.C * m * snf.F, snf.S);
  ASSERT_TRUE(snf.S.is_diagonal());
  ASSERT_TRUE(unimodular(snf.C));
  ASSERT_TRUE(unimodular(snf.F));
  auto q = snf.invariants();
  for (std::size_t i = 0; i < q.size(); ++i) {
    ASSERT_GT(q[i], 0);
    if (i + 1 < q.size()) {
      ASSERT_EQ(q[i + 1] % q[i], 0);
    }
  }
}

}  // namespace

TEST(SmithNormalForm, Identity) {
  auto snf = smith_normal_form(IntegerMatrix::identity(2));
  EXPECT_EQ(snf.S, IntegerMatrix::identity(2));
  EXPECT_EQ(snf.C, IntegerMatrix::identity(2));
  EXPECT_EQ(snf.F, IntegerMatrix::identity(2));
}

TEST(SmithNormalForm, SymmetricTwoByTwo) {
  auto m = IntegerMatrix::from_rows({{2, 1}, {1, 2}});
  check_snf(m);
  EXPECT_EQ(smith_normal_form(m).S, IntegerMatrix::diagonal({1, 3}));
}

TEST(SmithNormalForm, DiagonalFour) {
  EXPECT_EQ(smith_normal_form(IntegerMatrix::diagonal({4, 4})).S, IntegerMatrix::diagonal({4, 4}));
}

TEST(SmithNormalForm, NonDividingDiagonal) {
  auto m = IntegerMatrix::diagonal({4, 6});
  check_snf(m);
  EXPECT_EQ(smith_normal_form(m).S, IntegerMatrix::diagonal({2, 12}));
}

TEST(SmithNormalForm, SingularThrows) {
  EXPECT_THROW(smith_normal_form(IntegerMatrix::from_rows({{1, 2}, {2, 4}})), SingularMatrix);
}

TEST(RationalInverse, Examples) {
  EXPECT_EQ(rational_inverse(IntegerMatrix::diagonal({4, 4})),
            RationalMatrix::from_rows({{R(1, 4), R(0)}, {R(0), R(1, 4)}}));
  EXPECT_EQ(rational_inverse(IntegerMatrix::from_rows({{2, 1}, {1, 2}})),
            RationalMatrix::from_rows({{R(2, 3), R(-1, 3)}, {R(-1, 3), R(2, 3)}}));
  EXPECT_EQ(rational_inverse(IntegerMatrix::from_rows({{2, 0}, {1, 4}})),
            RationalMatrix::from_rows({{R(1, 2), R(0)}, {R(-1, 8), R(1, 4)}}));
}

TEST(RationalInverse, AgreesWithAdjugate) {
  auto m = IntegerMatrix::from_rows({{3, 1, 0}, {1, 4, 2}, {0, 2, 5}});
  EXPECT_EQ(rational_inverse(m), adjugate_inverse(m));
}

TEST(Determinant, IntegerAndRationalAgree) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    auto m = trinom::testing::random_matrix(rng, 1 + t % 4, -6, 6);
    EXPECT_EQ(Rational(determinant(m)), determinant(to_rational(m)));
  }
}

TEST(SmithNormalForm, RandomMatrices) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + t % 4;
    auto m = trinom::testing::random_nonsingular(rng, n, -9, 9);
    check_snf(m);
    auto inv = rational_inverse(m);
    EXPECT_EQ(inv * to_rational(m), RationalMatrix::identity(n));
    EXPECT_EQ(to_rational(m) * inv, RationalMatrix::identity(n));
  }
}

TEST(Solve, ExactSystem) {
  auto a = RationalMatrix::from_rows({{R(2), R(1)}, {R(1), R(3)}});
  RationalVector b{R(1), R(2)};
  auto x = solve(a, b);
  EXPECT_EQ(a * x, b);
  EXPECT_EQ(x, (RationalVector{R(1, 5), R(3, 5)}));
}
