#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "support.hpp"

using namespace trinom;
using trinom::testing::R;

namespace {

const RationalVector kOnes{R(1), R(1)};

MBIntegralData example_data() { return MBIntegralData::build(trinom::testing::example_system(), kOnes); }

ResidueCone near_cone(const MBIntegralData& data) { return ResidueCone(data.gamma, {{R(2), R(-1)}, {R(-1), R(2)}}); }

ResidueCone mixed_cone(const MBIntegralData& data) { return ResidueCone(data.gamma, {{R(1), R(0)}, {R(1), R(-2)}}); }

// Lanczos (g = 7, 9 terms) with reflection for Re z < 1/2.
Complex complex_gamma(Complex z) {
  static const double c[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double pi = std::numbers::pi;
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));
  z -= 1.0;
  Complex a = c[0];
  Complex t = z + 7.5;
  for (int i = 1; i < 9; ++i) a += c[i] / (z + static_cast<double>(i));
  return std::sqrt(2 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

// Leading principal minors, computed independently of intlinalg.
bool minors_positive(const IntegerMatrix& s) {
  auto v = [&](std::size_t i, std::size_t j) { return static_cast<long long>(s(i, j)); };
  if (v(0, 0) <= 0) return false;
  if (s.size() >= 2 && v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0) <= 0) return false;
  if (s.size() >= 3) {
    long long d = v(0, 0) * (v(1, 1) * v(2, 2) - v(1, 2) * v(2, 1)) - v(0, 1) * (v(1, 0) * v(2, 2) - v(1, 2) * v(2, 0)) +
                  v(0, 2) * (v(1, 0) * v(2, 1) - v(1, 1) * v(2, 0));
    if (d <= 0) return false;
  }
  return true;
}

}  // namespace

TEST(Convergence, Examples) {
  EXPECT_TRUE(convergence_nonempty(IntegerMatrix::from_rows({{2, 1}, {1, 2}})));
  EXPECT_FALSE(convergence_nonempty(IntegerMatrix::from_rows({{0, 1}, {1, 2}})));
  EXPECT_FALSE(convergence_nonempty(IntegerMatrix::from_rows({{1, 3}, {2, 1}})));
}

TEST(Convergence, RandomAgainstMinors) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 50; ++t) {
    auto s = trinom::testing::random_matrix(rng, 2 + t % 2, 0, 4);
    EXPECT_EQ(convergence_nonempty(s), minors_positive(s)) << io::matrix_text(s);
  }
}

TEST(QPolynomial, ExampleIdentity) {
  auto sys = trinom::testing::example_system();
  EXPECT_EQ(q_polynomial<Rational>(sys, kOnes, {R(0), R(0)}), R(1, 16));
  std::mt19937_64 rng(42);
  for (int t = 0; t < 50; ++t) {
    RationalVector z{trinom::testing::random_rational(rng, -50, 50, 13), trinom::testing::random_rational(rng, -50, 50, 13)};
    EXPECT_EQ(q_polynomial(sys, kOnes, z), (1 - z[0] - z[1]) / 16);
  }
  ComplexVector zc{{0.3, 1.5}, {-2.0, 0.25}};
  Complex expected = (1.0 - zc[0] - zc[1]) / 16.0;
  EXPECT_LT(std::abs(q_polynomial(sys, kOnes, zc) - expected), 1e-15);
}

TEST(QPolynomial, OriginIsProductOverDeterminant) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    std::uniform_int_distribution<int> w(1, 6);
    TrinomialSystem sys(IntegerMatrix::diagonal({w(rng), w(rng)}), IntegerMatrix::from_columns({{1, 2}, {3, 1}}));
    RationalVector d{trinom::testing::random_rational(rng, 1, 9, 5), trinom::testing::random_rational(rng, 1, 9, 5)};
    EXPECT_EQ(q_polynomial<Rational>(sys, d, {R(0), R(0)}),
              d[0] * d[1] / Rational(determinant(sys.omega())));
  }
  TrinomialSystem skew(IntegerMatrix::from_rows({{2, 1}, {0, 3}}), IntegerMatrix::diagonal({1, 1}));
  EXPECT_THROW(q_polynomial<Rational>(skew, kOnes, {R(0), R(0)}), validation_error);
}

TEST(IntegralData, ExampleStructure) {
  auto data = example_data();
  ASSERT_EQ(data.families.size(), 4u);
  ASSERT_EQ(data.denominators.size(), 2u);
  EXPECT_EQ(data.families[2].constant, R(1, 4));
  EXPECT_EQ(data.families[2].linear, (RationalVector{R(-1, 2), R(-1, 4)}));
  EXPECT_EQ(data.denominators[1].constant, R(5, 4));
  EXPECT_EQ(data.denominators[1].linear, (RationalVector{R(-1, 4), R(1, 2)}));
  EXPECT_EQ(data.gamma, (RationalVector{R(1, 6), R(1, 6)}));
  EXPECT_TRUE(data.non_confluent());
  EXPECT_TRUE(data.in_u_polytope({R(1, 10), R(2, 5)}));
  EXPECT_FALSE(data.in_u_polytope({R(1, 3), R(1, 3)}));
  EXPECT_THROW(MBIntegralData::build(trinom::testing::example_system(), kOnes, RationalVector{R(1), R(1)}),
               validation_error);
}

TEST(DivisorPairing, ParseAndErrors) {
  auto p = DivisorPairing::parse("3,4|1, 2", 2);
  EXPECT_EQ(p.groups, (std::vector<std::vector<std::size_t>>{{2, 3}, {0, 1}}));
  EXPECT_EQ(p.str(), "3,4|1,2");
  EXPECT_THROW(DivisorPairing::parse("3,3|1", 2), DegeneratePairing);
  EXPECT_THROW(DivisorPairing::parse("5|1", 2), DegeneratePairing);
  EXPECT_THROW(DivisorPairing::parse("1|2|3", 2), DegeneratePairing);
  EXPECT_THROW(DivisorPairing::parse("1||2", 2), DegeneratePairing);
  EXPECT_THROW(DivisorPairing::parse("a|2", 2), DegeneratePairing);
}

TEST(ResidueCone, ContainmentIsStrict) {
  ResidueCone cone({R(0), R(0)}, {{R(1), R(0)}, {R(0), R(1)}});
  EXPECT_TRUE(cone.contains({R(1, 2), R(3)}));
  EXPECT_FALSE(cone.contains({R(0), R(3)}));
  EXPECT_FALSE(cone.contains({R(-1), R(3)}));
  EXPECT_THROW(ResidueCone({R(0), R(0)}, {{R(1), R(2)}, {R(2), R(4)}}), validation_error);
}

TEST(ResidueLattice, NearCone) {
  auto data = example_data();
  auto pts = residue_lattice(data, DivisorPairing::parse("3|4", 2), near_cone(data), 3);
  std::map<std::vector<std::int64_t>, RationalVector> by_nu;
  for (auto& p : pts) by_nu[p.nu.values()] = p.z;
  EXPECT_EQ(by_nu.at({0, 0}), (RationalVector{R(1, 3), R(1, 3)}));
  EXPECT_EQ(by_nu.at({1, 0}), (RationalVector{R(3), R(-1)}));
  for (auto& [nu, z] : by_nu)
    EXPECT_EQ(z, (RationalVector{R(1, 3) + R(8, 3) * nu[0] - R(4, 3) * nu[1], R(1, 3) - R(4, 3) * nu[0] + R(8, 3) * nu[1]}));
  EXPECT_EQ(pts.size(), 10u);
}

TEST(ResidueLattice, MixedCone) {
  auto data = example_data();
  auto pts = residue_lattice(data, DivisorPairing::parse("3,4|2", 2), mixed_cone(data), 2);
  bool found = false;
  for (auto& p : pts)
    if (p.families == std::vector<std::size_t>{2, 1} && p.nu.values() == std::vector<std::int64_t>{0, 1}) {
      EXPECT_EQ(p.z, (RationalVector{R(1), R(-1)}));
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(ResidueTerms, NearConeMatchesPuiseux) {
  auto data = example_data();
  auto terms = residue_terms(data, DivisorPairing::parse("3|4", 2), near_cone(data), 8);
  PuiseuxSeries p(build_reduction(data.system, parse_selection("s0,s0")), kOnes);
  std::map<RationalVector, Rational> by_exponent;
  for (auto& t : terms) {
    ASSERT_TRUE(t.exact.has_value());
    by_exponent[t.exponent] = *t.exact;
  }
  for (auto& term : p.terms(8)) {
    ASSERT_TRUE(by_exponent.count(term.support)) << term.k.str();
    EXPECT_EQ(by_exponent[term.support], term.coefficient.magnitude) << term.k.str();
  }
}

TEST(ResidueTerms, MixedConeMatchesPuiseux) {
  auto data = example_data();
  auto terms = residue_terms(data, DivisorPairing::parse("3,4|2", 2), mixed_cone(data), 8);
  PuiseuxSeries p(build_reduction(data.system, parse_selection("s0,w0")), kOnes);
  std::map<RationalVector, Rational> by_exponent;
  for (auto& t : terms)
    if (*t.exact != 0) by_exponent[t.exponent] = *t.exact;
  std::size_t nonzero = 0;
  for (auto& term : p.terms(8)) {
    if (term.coefficient.magnitude == 0) continue;
    ++nonzero;
    ASSERT_TRUE(by_exponent.count(term.support)) << term.k.str();
    EXPECT_EQ(by_exponent[term.support], term.coefficient.magnitude) << term.k.str();
  }
  EXPECT_EQ(by_exponent.size(), nonzero);
}

TEST(ResidueSum, BoundZeroIsLeadingTerm) {
  auto data = example_data();
  ComplexVector x{{20.0, 1.0}, {8.0, -3.0}};
  Complex s = residue_sum(data, DivisorPairing::parse("3|4", 2), near_cone(data), x, 0);
  EXPECT_LT(std::abs(s - principal_monomial(x, {R(-1, 3), R(-1, 3)})), 1e-15);
}

TEST(ResidueSum, MixedConeMatchesOracle) {
  auto data = example_data();
  ComplexVector x{20.0, 1.0};
  Complex truth = oracle::continued_monomial(oracle::principal_path(data.system, {x}), kOnes);
  Complex s = residue_sum(data, DivisorPairing::parse("3,4|2", 2), mixed_cone(data), x, 30);
  EXPECT_LT(std::abs(s - truth), 1e-5);
}

TEST(Sector, OctagonVerticesAndCenter) {
  EXPECT_TRUE(example_sector_contains(0.0, 0.0));
  for (auto [a, b] : example_sector_vertices()) EXPECT_FALSE(example_sector_contains(a, b)) << a << "," << b;
  // just inside each vertex toward the center
  for (auto [a, b] : example_sector_vertices()) EXPECT_TRUE(example_sector_contains(0.99 * a, 0.99 * b));
}

// Trapezoid quadrature of the integral over gamma + iR^2 reproduces y1 y2.
TEST(Integral, QuadratureMatchesOracle) {
  auto sys = trinom::testing::example_system();
  ComplexVector x{std::polar(0.3, 0.2), std::polar(0.2, -0.1)};
  const double g = 1.0 / 6, h = 0.05, L = 25.0;
  const int steps = static_cast<int>(2 * L / h);
  Complex lx1 = std::log(x[0]), lx2 = std::log(x[1]);
  Complex sum = 0.0;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      Complex z1(g, -L + i * h), z2(g, -L + j * h);
      Complex num = complex_gamma(z1) * complex_gamma(z2) * complex_gamma(0.25 - z1 / 2.0 - z2 / 4.0) *
                    complex_gamma(0.25 - z1 / 4.0 - z2 / 2.0);
      Complex den = complex_gamma(1.25 + z1 / 2.0 - z2 / 4.0) * complex_gamma(1.25 - z1 / 4.0 + z2 / 2.0);
      double w = (i == 0 || i == steps ? 0.5 : 1.0) * (j == 0 || j == steps ? 0.5 : 1.0);
      sum += w * num / den * (1.0 - z1 - z2) / 16.0 * std::exp(-z1 * lx1 - z2 * lx2);
    }
  Complex integral = sum * h * h / (4 * std::numbers::pi * std::numbers::pi);
  auto y = oracle::principal_solution(sys, x);
  EXPECT_LT(std::abs(integral - y[0] * y[1]), 1e-7);
}
