#pragma once

// Ratios Gamma(a)/Gamma(b) read as meromorphic functions with removable
// singularities: exact when a - b is an integer, log-gamma otherwise.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>

#include "trinom/errors.hpp"
#include "trinom/rational.hpp"

namespace trinom {

/// Value of a gamma ratio. `exact` is set whenever the arguments differ by an
/// integer; `value` is always populated.
struct RatioValue {
  double value = 0.0;
  std::optional<Rational> exact;
};

/// log|Gamma(x)| and sign(Gamma(x)) for real x that is not a pole. Negative
/// arguments go through the reflection formula.
inline std::pair<double, int> log_abs_gamma(double x) {
  if (x > 0) return {std::lgamma(x), 1};
  double fl = std::floor(x);
  if (fl == x) throw PoleError("Gamma has a pole at " + std::to_string(x));
  // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
  double s = std::sin(std::numbers::pi * x);
  double lg = std::log(std::numbers::pi) - std::log(std::fabs(s)) - std::lgamma(1.0 - x);
  // Gamma(x) < 0 on (-1,0), > 0 on (-2,-1), ...
  int sign = (static_cast<long long>(-fl) % 2 == 1) ? -1 : 1;
  return {lg, sign};
}

/// Float path Gamma(a)/Gamma(b) with the pole conventions applied.
inline double gamma_ratio_float(double a, double b) {
  auto pole = [](double v) { return v <= 0 && std::floor(v) == v; };
  bool pa = pole(a), pb = pole(b);
  if (pa && pb) {
    // (-1)^(n-m) n!/m! for a = -m, b = -n
    double m = -a, n = -b;
    double lv = std::lgamma(n + 1) - std::lgamma(m + 1);
    int sign = (static_cast<long long>(n - m) % 2 == 0) ? 1 : -1;
    return sign * std::exp(lv);
  }
  if (pb) return 0.0;
  if (pa) throw PoleError("non-removable pole: Gamma(" + std::to_string(a) + ")/Gamma(" + std::to_string(b) + ")");
  auto [la, sa] = log_abs_gamma(a);
  auto [lb, sb] = log_abs_gamma(b);
  return sa * sb * std::exp(la - lb);
}

namespace detail {

inline std::string ratio_text(const Rational& a, const Rational& b) {
  return "Gamma(" + to_string(a) + ")/Gamma(" + to_string(b) + ")";
}

}  // namespace detail

/// Gamma(a)/Gamma(b) for rational arguments.
///  - b a pole, a not: 0.
///  - a = -m and b = -n both poles: the limit (-1)^(n-m) n!/m!.
///  - a a pole, b not: PoleError (the caller must take the limit of the
///    whole expression instead).
///  - otherwise, exact via Gamma(z+1) = z Gamma(z) when a - b is an integer.
inline RatioValue gamma_ratio(const Rational& a, const Rational& b) {
  bool pa = is_nonpositive_integer(a), pb = is_nonpositive_integer(b);
  RatioValue out;
  if (pa && pb) {
    Integer m = -numerator(a), n = -numerator(b);
    Rational v = Rational(factorial(static_cast<std::int64_t>(n)), factorial(static_cast<std::int64_t>(m)));
    if ((n - m) % 2 != 0) v = -v;
    out.exact = v;
    out.value = to_double(v);
    return out;
  }
  if (pb) {
    out.exact = Rational(0);
    out.value = 0.0;
    return out;
  }
  if (pa) throw PoleError("non-removable pole in " + detail::ratio_text(a, b));

  Rational diff = a - b;
  if (is_integer(diff)) {
    Integer k = numerator(diff);
    Rational v = 1;
    if (k >= 0) {
      for (Integer i = 0; i < k; ++i) v *= b + Rational(i);
    } else {
      for (Integer i = 0; i < -k; ++i) v /= a + Rational(i);
    }
    out.exact = v;
    out.value = to_double(v);
    return out;
  }
  out.value = gamma_ratio_float(to_double(a), to_double(b));
  return out;
}

/// Product of componentwise ratios Gamma(a_j)/Gamma(b_j).
inline RatioValue gamma_ratio_vector(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw validation_error("gamma", "argument vectors differ in length");
  RatioValue out;
  out.exact = Rational(1);
  double value = 1.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    RatioValue r = gamma_ratio(a[j], b[j]);
    value *= r.value;
    if (out.exact && r.exact)
      *out.exact *= *r.exact;
    else
      out.exact.reset();
  }
  out.value = out.exact ? to_double(*out.exact) : value;
  return out;
}

/// (a-1)(a-2)...(a-k+1); the empty product (k <= 1) is 1. Equals
/// Gamma(a)/Gamma(a-k+1) under the pole conventions above.
inline Rational falling_product(const Rational& a, std::int64_t k) {
  Rational v = 1;
  for (std::int64_t m = 1; m <= k - 1; ++m) v *= a - Rational(m);
  return v;
}

}  // namespace trinom
