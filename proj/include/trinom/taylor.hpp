#pragma once

// Exact Taylor coefficients of the monomial y^d(r) of the principal solution
// to a reduced system r_i y^{beta_i} + y^{mu_i} - y^{nu_i} = 0:
//
//   c_k = (-1)^{|k|}/k! * Gamma(A)/Gamma(A - k + I) * Q(k),
//   A = kappa^{-1} d + kappa^{-1} beta_bar k,
//   Q(k) = det( diag[A] - kappa^{-1} beta_bar diag[k] ).

#include <cstddef>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "trinom/gamma.hpp"
#include "trinom/intlinalg.hpp"
#include "trinom/multi_index.hpp"
#include "trinom/parallel.hpp"
#include "trinom/rational.hpp"
#include "trinom/systems.hpp"

namespace trinom {

namespace detail {

inline void check_exponent(const Reduction& red, const RationalVector& d, const MultiIndex* k = nullptr) {
  if (d.size() != red.n()) throw validation_error("taylor", "d has wrong dimension");
  for (auto& v : d)
    if (v < 0) throw validation_error("taylor", "d must be nonnegative");
  if (k && k->size() != red.n()) throw validation_error("taylor", "multi-index has wrong dimension");
}

// kappa^{-1} beta_bar
inline RationalMatrix slope_matrix(const Reduction& red) { return red.kappa_inv * to_rational(red.beta_bar); }

// A = kappa^{-1}(d + beta_bar k)
inline RationalVector gamma_arguments(const Reduction& red, const RationalMatrix& slope, const RationalVector& d,
                                      const MultiIndex& k) {
  RationalVector base = red.kappa_inv * d;
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = 0; j < base.size(); ++j) base[i] += slope(i, j) * Rational(k[j]);
  return base;
}

}  // namespace detail

/// Q(k) = det(diag[A] - kappa^{-1} beta_bar diag[k]), exact.
inline Rational q_determinant(const Reduction& red, const RationalVector& d, const MultiIndex& k) {
  detail::check_exponent(red, d, &k);
  auto slope = detail::slope_matrix(red);
  auto A = detail::gamma_arguments(red, slope, d, k);
  const std::size_t n = red.n();
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? A[i] : Rational(0)) - slope(i, j) * Rational(k[j]);
  return determinant(m);
}

/// Exact c_k. Each row j of the determinant is differentiated k_j times, so
/// the gamma ratio of slot j is the falling product (A_j-1)...(A_j-k_j+1)
/// and row j is A_j e_j - k_j * slope_j; a slot with k_j = 0 contributes the
/// unit row e_j. This form never touches a gamma pole.
inline Rational taylor_coefficient(const Reduction& red, const RationalVector& d, const MultiIndex& k) {
  detail::check_exponent(red, d, &k);
  const std::size_t n = red.n();
  auto slope = detail::slope_matrix(red);
  auto A = detail::gamma_arguments(red, slope, d, k);
  Rational prefactor = Rational(1, factorial(k[0]));
  for (std::size_t j = 1; j < n; ++j) prefactor /= Rational(factorial(k[j]));
  if (k.total() % 2) prefactor = -prefactor;
  RationalMatrix rows(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (k[j] == 0) {
      rows(j, j) = 1;
      continue;
    }
    prefactor *= falling_product(A[j], k[j]);
    for (std::size_t i = 0; i < n; ++i)
      rows(j, i) = (i == j ? A[j] : Rational(0)) - Rational(k[j]) * slope(j, i);
  }
  if (prefactor == 0) return 0;
  return prefactor * determinant(rows);
}

/// c_k through the gamma module: gamma_ratio_vector(A, A-k+I) * Q(k). Exact
/// whenever every slot is free of genuine poles; PoleError otherwise.
inline RatioValue taylor_coefficient_gamma(const Reduction& red, const RationalVector& d, const MultiIndex& k) {
  detail::check_exponent(red, d, &k);
  auto slope = detail::slope_matrix(red);
  auto A = detail::gamma_arguments(red, slope, d, k);
  RationalVector B(A.size());
  for (std::size_t j = 0; j < A.size(); ++j) B[j] = A[j] - Rational(k[j]) + 1;
  RatioValue g = gamma_ratio_vector(A, B);
  Rational sign_fact = Rational(k.total() % 2 ? -1 : 1);
  for (std::size_t j = 0; j < A.size(); ++j) sign_fact /= Rational(factorial(k[j]));
  Rational q = q_determinant(red, d, k);
  RatioValue out;
  if (g.exact) {
    out.exact = sign_fact * *g.exact * q;
    out.value = to_double(*out.exact);
  } else {
    out.value = to_double(sign_fact) * g.value * to_double(q);
  }
  return out;
}

/// Float-only c_k: log-gamma ratios in double precision times Q(k).
inline double taylor_coefficient_float(const Reduction& red, const RationalVector& d, const MultiIndex& k) {
  detail::check_exponent(red, d, &k);
  auto slope = detail::slope_matrix(red);
  auto A = detail::gamma_arguments(red, slope, d, k);
  double v = k.total() % 2 ? -1.0 : 1.0;
  for (std::size_t j = 0; j < A.size(); ++j) {
    double a = to_double(A[j]);
    v *= gamma_ratio_float(a, a - static_cast<double>(k[j]) + 1.0);
    v /= std::tgamma(static_cast<double>(k[j]) + 1.0);
  }
  return v * to_double(q_determinant(red, d, k));
}

/// x^k for integer k, computed by repeated multiplication.
inline Complex monomial_power(const ComplexVector& x, const MultiIndex& k) {
  Complex v = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) v *= integer_pow(x[j], k[j]);
  return v;
}

/// Lazily computed Taylor series of y^d(r) for one reduction. Coefficients
/// are memoized; concurrent readers and inserters are safe.
class TaylorSeries {
 public:
  TaylorSeries(Reduction reduction, RationalVector d) : reduction_(std::move(reduction)), d_(std::move(d)) {
    detail::check_exponent(reduction_, d_);
  }

  const Reduction& reduction() const noexcept { return reduction_; }
  const RationalVector& d() const noexcept { return d_; }

  Rational coefficient(const MultiIndex& k) const {
    {
      std::shared_lock lock(mutex_);
      if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    }
    Rational c = taylor_coefficient(reduction_, d_, k);
    std::unique_lock lock(mutex_);
    return memo_.try_emplace(k, std::move(c)).first->second;
  }

  /// Coefficients for all |k| <= max_degree in graded-lex order.
  std::vector<std::pair<MultiIndex, Rational>> coefficients(std::int64_t max_degree) const {
    auto ks = indices_up_to(reduction_.n(), max_degree);
    std::vector<std::pair<MultiIndex, Rational>> out(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) { out[i] = {ks[i], coefficient(ks[i])}; });
    return out;
  }

 private:
  Reduction reduction_;
  RationalVector d_;
  mutable std::shared_mutex mutex_;
  mutable std::map<MultiIndex, Rational> memo_;
};

/// Partial sum over |k| <= max_degree, accumulated in graded-lex order so the
/// result is reproducible bit for bit.
inline Complex evaluate_taylor(const TaylorSeries& series, const ComplexVector& x, std::int64_t max_degree) {
  if (x.size() != series.reduction().n()) throw validation_error("taylor", "point has wrong dimension");
  if (max_degree < 0) throw validation_error("taylor", "max degree must be nonnegative");
  Complex sum = 0.0;
  for (auto& [k, c] : series.coefficients(max_degree)) {
    if (c == 0) continue;
    sum += to_double(c) * monomial_power(x, k);
  }
  return sum;
}

}  // namespace trinom
