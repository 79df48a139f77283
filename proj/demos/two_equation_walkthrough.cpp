// Series for y1*y2 where y solves
//   y1^4 + x1 y1^2 y2 - 1 = 0,   y2^4 + x2 y1 y2^2 - 1 = 0,
// near x = 0 and in two regions with large |x1|, each checked against the
// continuation oracle.

#include <cstdio>
#include <iostream>

#include "trinom/trinom.hpp"

using namespace trinom;

int main() {
  TrinomialSystem sys(IntegerMatrix::diagonal({4, 4}), IntegerMatrix::from_columns({{2, 1}, {1, 2}}));
  RationalVector d{1, 1};

  std::cout << "Taylor coefficients, |k| <= 2\n";
  TaylorSeries taylor(build_reduction(sys, parse_selection("w0,w0")), d);
  for (auto& [k, c] : taylor.coefficients(2)) std::cout << "  c" << k.str() << " = " << to_string(c) << "\n";

  ComplexVector x0{0.1, 0.1};
  Complex near = evaluate_taylor(taylor, x0, 20);
  Complex truth = oracle::monomial_of_solution(oracle::principal_solution(sys, x0), d);
  std::printf("  x=(0.1,0.1): series %.15f  oracle %.15f\n", near.real(), truth.real());

  std::cout << "Puiseux series around x1 = infinity, x2 = 1\n";
  ComplexVector x1{20.0, 1.0};
  Complex far = oracle::continued_monomial(oracle::principal_path(sys, {x1}), d);
  PuiseuxSeries p2(build_reduction(sys, parse_selection("s0,w0")), d);
  auto values = evaluate_puiseux_all_branches(p2, x1, 30);
  for (std::size_t b = 0; b < values.size(); ++b)
    std::printf("  branch %zu: %+.12f%+.12fi  |diff| %.2e\n", b, values[b].real(), values[b].imag(),
                std::abs(values[b] - far));

  std::cout << "Mellin-Barnes residues at the intersections of L3 and L4\n";
  auto data = MBIntegralData::build(sys, d);
  ResidueCone cone(data.gamma, {{2, -1}, {-1, 2}});
  for (auto& t : residue_terms(data, DivisorPairing::parse("3|4", 2), cone, 2))
    std::cout << "  z=" << io::rational_list(t.point.z) << "  coefficient " << to_string(*t.exact) << "\n";
  return 0;
}
