#pragma once

#include <cctype>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "trinom/errors.hpp"

namespace trinom {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RationalVector = std::vector<Rational>;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

/// num/den with the sign moved to the numerator; the two-argument
/// cpp_rational constructor rejects negative denominators on some Boost versions.
inline Rational make_rational(const Integer& num, const Integer& den) {
  return den < 0 ? Rational(Integer(-num), Integer(-den)) : Rational(num, den);
}

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

/// Nonpositive integers are exactly the poles of the gamma function.
inline bool is_nonpositive_integer(const Rational& q) { return is_integer(q) && q <= 0; }

/// Largest integer not exceeding q.
inline Integer floor(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer f = n / d;  // truncates toward zero
  if (n < 0 && f * d != n) --f;
  return f;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Integer factorial(std::int64_t k) {
  Integer r = 1;
  for (std::int64_t i = 2; i <= k; ++i) r *= i;
  return r;
}

/// Canonical `p/q` form; integers print without a denominator.
inline std::string to_string(const Rational& q) {
  if (is_integer(q)) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses `p`, `p/q` or a finite decimal like `-0.25` into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.erase(v.begin());
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
  };
  trim(s);
  auto bad = [&] { return validation_error("io", "not a rational number: '" + std::string(text) + "'"); };
  if (s.empty()) throw bad();
  auto parse_int = [&](std::string v) {
    trim(v);
    if (v.empty()) throw bad();
    std::size_t start = (v[0] == '-' || v[0] == '+') ? 1 : 0;
    if (start == v.size()) throw bad();
    for (std::size_t i = start; i < v.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(v[i]))) throw bad();
    if (v[0] == '+') v.erase(v.begin());
    return Integer(v);
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer p = parse_int(s.substr(0, slash));
    Integer q = parse_int(s.substr(slash + 1));
    if (q == 0) throw bad();
    return make_rational(p, q);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (frac.empty()) frac = "0";
    Integer w = parse_int(whole);
    Integer f = parse_int(frac);
    if (frac[0] == '-' || frac[0] == '+') throw bad();
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
    Rational r = Rational(w < 0 ? -w : w) + Rational(f, scale);
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_int(s));
}

/// Splits `a,b,c` into exact rationals.
inline RationalVector parse_rational_list(std::string_view text) {
  RationalVector out;
  std::string s(text);
  std::size_t pos = 0;
  while (true) {
    auto comma = s.find(',', pos);
    out.push_back(parse_rational(s.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Principal-branch power z^q = exp(q Log z), arg z in (-pi, pi].
inline Complex integer_pow(Complex z, long long e) {
  if (e < 0) return 1.0 / integer_pow(z, -e);
  Complex r = 1.0;
  while (e > 0) {
    if (e & 1) r *= z;
    z *= z;
    e >>= 1;
  }
  return r;
}

inline Complex principal_pow(Complex z, const Rational& q) {
  // Integer powers are single valued; skip the log round trip.
  if (is_integer(q)) return integer_pow(z, static_cast<long long>(numerator(q)));
  return std::exp(to_double(q) * std::log(z));
}

}  // namespace trinom
