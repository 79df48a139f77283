#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace trinom;
using trinom::testing::R;

namespace {

Rational signed_over_factorial(Rational v, std::int64_t k1, std::int64_t k2) {
  v /= Rational(factorial(k1) * factorial(k2));
  return (k1 + k2) % 2 ? Rational(-v) : v;
}

// Coefficients of the expansion around x1, x2 = infinity for d = (1,1).
Rational far_closed_form(std::int64_t k1, std::int64_t k2) {
  Rational a1 = R(1, 3) + R(8, 3) * k1 - R(4, 3) * k2, b1 = R(4, 3) + R(5, 3) * k1 - R(4, 3) * k2;
  Rational a2 = R(1, 3) - R(4, 3) * k1 + R(8, 3) * k2, b2 = R(4, 3) - R(4, 3) * k1 + R(5, 3) * k2;
  return signed_over_factorial(*gamma_ratio(a1, b1).exact * *gamma_ratio(a2, b2).exact * (1 - 4 * k1 - 4 * k2) / 9,
                               k1, k2);
}

// Coefficients of the expansion around x1 = infinity, x2 = 0 for d = (1,1).
Rational mixed_closed_form(std::int64_t k1, std::int64_t k2) {
  Rational a1 = R(1, 2) + 2 * k1 + R(1, 2) * k2, b1 = R(3, 2) + k1 + R(1, 2) * k2;
  Rational a2 = R(1, 8) - R(1, 2) * k1 + R(3, 8) * k2, b2 = R(9, 8) - R(1, 2) * k1 - R(5, 8) * k2;
  return signed_over_factorial(*gamma_ratio(a1, b1).exact * *gamma_ratio(a2, b2).exact * (1 - 4 * k1 + k2) / 16,
                               k1, k2);
}

Reduction example_reduction(const char* sel) {
  return build_reduction(trinom::testing::example_system(), parse_selection(sel));
}

const RationalVector kOnes{R(1), R(1)};

}  // namespace

TEST(SupportPoint, IdentityReductionIsK) {
  auto red = example_reduction("w0,w0");
  for (auto& k : indices_up_to(2, 5)) EXPECT_EQ(support_point(red, kOnes, k), (RationalVector{R(k[0]), R(k[1])}));
}

TEST(SupportPoint, FarExpansion) {
  auto red = example_reduction("s0,s0");
  EXPECT_EQ(support_point(red, kOnes, MultiIndex(2)), (RationalVector{R(-1, 3), R(-1, 3)}));
  for (auto& k : indices_up_to(2, 10)) {
    RationalVector m{R(-1, 3) - R(8, 3) * k[0] + R(4, 3) * k[1], R(-1, 3) + R(4, 3) * k[0] - R(8, 3) * k[1]};
    EXPECT_EQ(support_point(red, kOnes, k), m) << k.str();
  }
}

TEST(SupportPoint, MixedExpansion) {
  auto red = example_reduction("s0,w0");
  for (auto& k : indices_up_to(2, 10)) {
    RationalVector m{R(-1, 2) - 2 * k[0] - R(1, 2) * k[1], R(k[1])};
    EXPECT_EQ(support_point(red, kOnes, k), m) << k.str();
  }
}

TEST(PuiseuxCoefficient, FarExpansionClosedForm) {
  auto red = example_reduction("s0,s0");
  EXPECT_EQ(puiseux_coefficient(red, kOnes, MultiIndex(2)).magnitude, R(1));
  for (auto& k : indices_up_to(2, 10)) {
    auto c = puiseux_coefficient(red, kOnes, k);
    EXPECT_EQ(c.phase, R(0));
    EXPECT_TRUE(c.is_real());
    EXPECT_EQ(c.magnitude, far_closed_form(k[0], k[1])) << k.str();
  }
}

TEST(PuiseuxCoefficient, MixedExpansionClosedForm) {
  auto red = example_reduction("s0,w0");
  EXPECT_EQ(puiseux_coefficient(red, kOnes, MultiIndex(2)).magnitude, R(1));
  for (auto& k : indices_up_to(2, 10))
    EXPECT_EQ(puiseux_coefficient(red, kOnes, k).magnitude, mixed_closed_form(k[0], k[1])) << k.str();
}

TEST(PuiseuxCoefficient, PhaseForMixedTags) {
  auto red = example_reduction("ws,w0");
  ASSERT_EQ(red.T.size(), 1u);
  for (auto& k : indices_up_to(2, 6)) {
    auto m = support_point(red, kOnes, k);
    auto c = puiseux_coefficient(red, kOnes, k);
    EXPECT_EQ(c.phase, Rational(k[red.T[0]]) + m[red.T[0]]);
    EXPECT_GT(c.reduced_phase(), -1);
    EXPECT_LE(c.reduced_phase(), 1);
  }
}

TEST(EvaluatePuiseux, IdentityReductionIsTaylor) {
  auto red = example_reduction("w0,w0");
  PuiseuxSeries p(red, kOnes);
  TaylorSeries t(red, kOnes);
  ComplexVector x{{0.05, 0.02}, {-0.03, 0.04}};
  EXPECT_LT(std::abs(evaluate_puiseux(p, x, 15) - evaluate_taylor(t, x, 15)), 1e-15);
}

TEST(EvaluatePuiseux, DegreeZeroIsLeadingTerm) {
  PuiseuxSeries p(example_reduction("s0,s0"), kOnes);
  ComplexVector x{{3.0, 1.0}, {-2.0, 5.0}};
  Complex lead = principal_monomial(x, {R(-1, 3), R(-1, 3)});
  EXPECT_LT(std::abs(evaluate_puiseux(p, x, 0) - lead), 1e-15);
}

TEST(EvaluatePuiseux, AgreesWithPrefactorTimesReducedTaylor) {
  // lower half-plane x_t keeps the literal e^{i pi} x_t on the principal sheet
  auto red = example_reduction("ws,w0");
  PuiseuxSeries p(red, kOnes);
  TaylorSeries t(red, kOnes);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> lmag(-8.0, 8.0), arg(-3.0, 0.0);
  int checked = 0;
  for (int i = 0; i < 100000 && checked < 10; ++i) {
    ComplexVector x{std::polar(std::exp(lmag(rng)), arg(rng)), std::polar(std::exp(lmag(rng)), arg(rng))};
    auto r = monomial_change(red, x);
    if (std::max(std::abs(r[0]), std::abs(r[1])) > 0.05) continue;
    Complex direct = monomial_prefactor(red, kOnes, x) * evaluate_taylor(t, r, 12);
    EXPECT_LT(std::abs(evaluate_puiseux(p, x, 12) - direct), 1e-12 * std::abs(direct));
    ++checked;
  }
  EXPECT_EQ(checked, 10);
}

TEST(EvaluatePuiseux, FarExpansionMatchesOracleOnDiagonal) {
  auto sys = trinom::testing::example_system();
  PuiseuxSeries p(example_reduction("s0,s0"), kOnes);
  ComplexVector x{10.0, 10.0};
  Complex truth = oracle::continued_monomial(oracle::principal_path(sys, {x}), kOnes);
  auto values = evaluate_puiseux_all_branches(p, x, 30);
  double best = 1e300;
  for (auto v : values) best = std::min(best, std::abs(v - truth));
  EXPECT_LT(best, 1e-6);
}

TEST(EvaluatePuiseux, MixedExpansionMatchesOracle) {
  auto sys = trinom::testing::example_system();
  PuiseuxSeries p(example_reduction("s0,w0"), kOnes);
  ComplexVector x{20.0, 1.0};
  Complex truth = oracle::continued_monomial(oracle::principal_path(sys, {x}), kOnes);
  EXPECT_LT(std::abs(evaluate_puiseux(p, x, 30, 0) - truth), 1e-5);
}

TEST(EvaluatePuiseux, Errors) {
  PuiseuxSeries p(example_reduction("s0,s0"), kOnes);
  EXPECT_THROW(evaluate_puiseux(p, {0.0, 1.0}, 5), ZeroCoordinate);
  EXPECT_THROW(evaluate_puiseux(p, {1.0, 1.0}, 5, 3), BranchOutOfRange);
  EXPECT_THROW(evaluate_puiseux(p, {1.0, 1.0}, -1), validation_error);
}
