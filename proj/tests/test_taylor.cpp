#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace trinom;
using trinom::testing::R;

namespace {

Reduction identity_reduction(const TrinomialSystem& sys) {
  return build_reduction(sys, uniform_selection(sys.n(), PairTag::W0));
}

// Closed form for the two-equation example with d = (1,1).
Rational example_closed_form(std::int64_t k1, std::int64_t k2) {
  Rational a1 = R(1, 4) + R(1, 2) * k1 + R(1, 4) * k2, b1 = R(5, 4) - R(1, 2) * k1 + R(1, 4) * k2;
  Rational a2 = R(1, 4) + R(1, 4) * k1 + R(1, 2) * k2, b2 = R(5, 4) + R(1, 4) * k1 - R(1, 2) * k2;
  Rational v = *gamma_ratio(a1, b1).exact * *gamma_ratio(a2, b2).exact * (1 + k1 + k2) / 16;
  v /= Rational(factorial(k1) * factorial(k2));
  return (k1 + k2) % 2 ? Rational(-v) : v;
}

}  // namespace

TEST(QDeterminant, Examples) {
  auto sys = trinom::testing::example_system();
  auto w0 = identity_reduction(sys);
  auto s0 = build_reduction(sys, parse_selection("s0,s0"));
  RationalVector d{1, 1};
  for (auto& k : indices_up_to(2, 6)) {
    EXPECT_EQ(q_determinant(w0, d, k), Rational(1 + k[0] + k[1], 16));
    EXPECT_EQ(q_determinant(s0, d, k), Rational(1 - 4 * k[0] - 4 * k[1], 9));
  }
  RationalVector d2{R(3, 2), R(5)};
  EXPECT_EQ(q_determinant(w0, d2, MultiIndex(2)), R(3, 8) * R(5, 4));
}

TEST(TaylorCoefficient, QuadraticExact) {
  auto red = identity_reduction(trinom::testing::quadratic_system());
  RationalVector d{1};
  std::vector<Rational> expected{R(1), R(-1, 2), R(1, 8), R(0), R(-1, 128)};
  for (std::int64_t k = 0; k < 5; ++k) EXPECT_EQ(taylor_coefficient(red, d, MultiIndex({k})), expected[k]);
}

TEST(TaylorCoefficient, MatchesLagrangeInversion) {
  for (auto [w, s] : {std::pair{2, 1}, {3, 2}, {3, 1}, {5, 2}, {4, 7}}) {
    TrinomialSystem sys(IntegerMatrix::diagonal({w}), IntegerMatrix::diagonal({s}));
    auto red = identity_reduction(sys);
    for (Rational d : {R(1), R(1, 2), R(7, 3)})
      for (std::int64_t k = 0; k <= 12; ++k)
        EXPECT_EQ(taylor_coefficient(red, {d}, MultiIndex({k})), oracle::lagrange_coefficient(sys, d, k))
            << "w=" << w << " s=" << s << " d=" << to_string(d) << " k=" << k;
  }
}

TEST(TaylorCoefficient, ExampleClosedForm) {
  auto red = identity_reduction(trinom::testing::example_system());
  RationalVector d{1, 1};
  EXPECT_EQ(taylor_coefficient(red, d, MultiIndex({1, 0})), R(-1, 4));
  EXPECT_EQ(taylor_coefficient(red, d, MultiIndex({1, 1})), R(3, 16));
  for (auto& k : indices_up_to(2, 10)) EXPECT_EQ(taylor_coefficient(red, d, k), example_closed_form(k[0], k[1]));
}

TEST(TaylorCoefficient, GammaAndFloatPathsAgree) {
  auto sys = trinom::testing::example_system();
  int poles = 0;
  for (const char* sel : {"w0,w0", "s0,s0", "s0,w0", "ws,w0"}) {
    auto red = build_reduction(sys, parse_selection(sel));
    RationalVector d{R(1), R(1, 2)};
    for (auto& k : indices_up_to(2, 8)) {
      Rational exact = taylor_coefficient(red, d, k);
      RatioValue g;
      try {
        g = taylor_coefficient_gamma(red, d, k);
      } catch (const PoleError&) {
        // a slot with k_j = 0 and A_j a pole: the row form takes the limit
        EXPECT_THROW(taylor_coefficient_float(red, d, k), PoleError);
        ++poles;
        continue;
      }
      if (g.exact) {
        EXPECT_EQ(*g.exact, exact) << sel << " " << k.str();
      }
      double f = taylor_coefficient_float(red, d, k);
      EXPECT_NEAR(f, to_double(exact), 1e-9 * std::max(1.0, std::fabs(f))) << sel << " " << k.str();
    }
  }
  EXPECT_LT(poles, 10);
}

TEST(TaylorCoefficient, NormalizationRandom) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    auto sys = trinom::testing::random_system(rng, 1 + t % 3, 4);
    auto red = trinom::testing::random_reduction(rng, sys);
    RationalVector d(sys.n());
    for (auto& v : d) v = trinom::testing::random_rational(rng, 0, 6, 4);
    EXPECT_EQ(taylor_coefficient(red, d, MultiIndex(sys.n())), R(1));
  }
}

TEST(TaylorCoefficient, InvalidInput) {
  auto red = identity_reduction(trinom::testing::example_system());
  EXPECT_THROW(taylor_coefficient(red, {R(-1), R(1)}, MultiIndex(2)), validation_error);
  EXPECT_THROW(taylor_coefficient(red, {R(1)}, MultiIndex(2)), validation_error);
  EXPECT_THROW(taylor_coefficient(red, {R(1), R(1)}, MultiIndex(3)), validation_error);
  EXPECT_THROW(MultiIndex({1, -1}), validation_error);
}

TEST(EvaluateTaylor, AtOriginAndQuadratic) {
  TaylorSeries ex(identity_reduction(trinom::testing::example_system()), {R(1), R(1)});
  EXPECT_EQ(evaluate_taylor(ex, {0.0, 0.0}, 10), Complex(1.0));
  TaylorSeries q(identity_reduction(trinom::testing::quadratic_system()), {R(1)});
  EXPECT_NEAR(std::abs(evaluate_taylor(q, {0.2}, 30) - (-0.2 + std::sqrt(4.04)) / 2), 0.0, 1e-12);
}

TEST(EvaluateTaylor, ExampleAgainstOracle) {
  auto sys = trinom::testing::example_system();
  TaylorSeries ex(identity_reduction(sys), {R(1), R(1)});
  ComplexVector x{0.1, 0.1};
  auto y = oracle::principal_solution(sys, x);
  EXPECT_LT(std::abs(evaluate_taylor(ex, x, 20) - y[0] * y[1]), 1e-8);
}

TEST(EvaluateTaylor, RandomSystemsAgainstOracle) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int t = 0; t < 5; ++t) {
    auto sys = trinom::testing::random_system(rng, 2, 4);
    TaylorSeries s(identity_reduction(sys), {R(1), R(2)});
    ComplexVector x{std::polar(0.05, angle(rng)), std::polar(0.05, angle(rng))};
    Complex truth = oracle::continued_monomial(oracle::principal_path(sys, {x}), {R(1), R(2)});
    EXPECT_LT(std::abs(evaluate_taylor(s, x, 20) - truth), 1e-6);
  }
}

TEST(TaylorSeries, CoefficientListIsGradedAndCached) {
  TaylorSeries ex(identity_reduction(trinom::testing::example_system()), {R(1), R(1)});
  auto list = ex.coefficients(2);
  ASSERT_EQ(list.size(), 6u);
  EXPECT_EQ(list[0].second, R(1));
  for (std::size_t i = 1; i < list.size(); ++i) EXPECT_LE(list[i - 1].first.total(), list[i].first.total());
  EXPECT_EQ(ex.coefficient(MultiIndex({0, 2})), R(1, 32));
}
