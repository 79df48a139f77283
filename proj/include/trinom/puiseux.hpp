#pragma once

// Puiseux continuations of the Taylor series of y^d(x): for a reduction with
// partition J/L/T the series sum_k c~_k x^{m(k)} has support
//
//   m_j(k) = k_j                                                    (j in J)
//   m_l(k) = -<phi_l^J,k^J> - <psi_l^L,k^L> + <psi_l^T,k^T> - <d,kinv_l>   (l in L)
//   m_t(k) = +<phi_t^J,k^J> + <psi_t^L,k^L> - <psi_t^T,k^T> + <d,kinv_t>   (t in T)
//
// and coefficients c~_k = exp(i pi sum_{t in T}(k_t + m_t(k))) c_k.

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <vector>

#include "trinom/multi_index.hpp"
#include "trinom/parallel.hpp"
#include "trinom/rational.hpp"
#include "trinom/systems.hpp"
#include "trinom/taylor.hpp"

namespace trinom {

/// Exact rational magnitude times the root of unity exp(i pi phase).
struct PuiseuxCoefficient {
  Rational magnitude;
  Rational phase;

  /// phase reduced to (-1, 1]
  Rational reduced_phase() const {
    Rational p = phase - Rational(2 * floor(phase / 2));
    if (p > 1) p -= 2;
    return p;
  }

  Complex value() const {
    double angle = std::numbers::pi * to_double(reduced_phase());
    return to_double(magnitude) * std::polar(1.0, angle);
  }

  bool is_real() const { return is_integer(phase) || magnitude == 0; }
};

inline RationalVector support_point(const Reduction& red, const RationalVector& d, const MultiIndex& k) {
  detail::check_exponent(red, d, &k);
  const std::size_t n = red.n();
  RationalVector m(n, Rational(0));
  auto d_dot_row = [&](std::size_t i) {
    Rational s = 0;
    for (std::size_t j = 0; j < n; ++j) s += d[j] * red.kappa_inv(i, j);
    return s;
  };
  auto linear_part = [&](std::size_t row) {
    Rational s = 0;
    for (std::size_t j : red.J) s += red.phi(row, j) * Rational(k[j]);
    for (std::size_t l : red.L) s += red.psi(row, l) * Rational(k[l]);
    for (std::size_t t : red.T) s -= red.psi(row, t) * Rational(k[t]);
    return s;
  };
  for (std::size_t j : red.J) m[j] = Rational(k[j]);
  for (std::size_t l : red.L) m[l] = -linear_part(l) - d_dot_row(l);
  for (std::size_t t : red.T) m[t] = linear_part(t) + d_dot_row(t);
  return m;
}

/// p(k) = sum_{t in T} (k_t + m_t(k)); zero when T is empty.
inline Rational phase_exponent(const Reduction& red, const RationalVector& m, const MultiIndex& k) {
  Rational p = 0;
  for (std::size_t t : red.T) p += Rational(k[t]) + m[t];
  return p;
}

inline PuiseuxCoefficient puiseux_coefficient(const Reduction& red, const RationalVector& d, const MultiIndex& k) {
  auto m = support_point(red, d, k);
  return {taylor_coefficient(red, d, k), phase_exponent(red, m, k)};
}

/// x^m = exp(sum_j m_j Log x_j) with the principal logarithm.
inline Complex principal_monomial(const ComplexVector& x, const RationalVector& m) {
  Complex logv = 0.0;
  Complex integer_part = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (is_integer(m[j]))
      integer_part *= integer_pow(x[j], static_cast<long long>(numerator(m[j])));
    else
      logv += to_double(m[j]) * std::log(x[j]);
  }
  return integer_part * std::exp(logv);
}

struct PuiseuxTerm {
  MultiIndex k;
  RationalVector support;
  PuiseuxCoefficient coefficient;
};

class PuiseuxSeries {
 public:
  PuiseuxSeries(Reduction reduction, RationalVector d) : reduction_(std::move(reduction)), d_(std::move(d)) {
    detail::check_exponent(reduction_, d_);
  }

  const Reduction& reduction() const noexcept { return reduction_; }
  const RationalVector& d() const noexcept { return d_; }

  PuiseuxTerm term(const MultiIndex& k) const {
    {
      std::shared_lock lock(mutex_);
      if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    }
    auto m = support_point(reduction_, d_, k);
    PuiseuxTerm t{k, m, {taylor_coefficient(reduction_, d_, k), phase_exponent(reduction_, m, k)}};
    std::unique_lock lock(mutex_);
    return memo_.try_emplace(k, std::move(t)).first->second;
  }

  std::vector<PuiseuxTerm> terms(std::int64_t max_degree) const {
    auto ks = indices_up_to(reduction_.n(), max_degree);
    std::vector<PuiseuxTerm> out(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) { out[i] = term(ks[i]); });
    return out;
  }

 private:
  Reduction reduction_;
  RationalVector d_;
  mutable std::shared_mutex mutex_;
  mutable std::map<MultiIndex, PuiseuxTerm> memo_;
};

/// Partial sum over |k| <= max_degree in graded-lex order. Branch b selects a
/// branch of the matrix radical lambda = g^{kappa^{-1}}: with
/// w_b = C^T S^{-1} e_b, term k picks up the unit factor
/// exp(2 pi i <d + beta_bar k, w_b>). Branch 0 is the principal-power series.
inline Complex evaluate_puiseux(const PuiseuxSeries& series, const ComplexVector& x, std::int64_t max_degree,
                                std::size_t branch = 0) {
  const Reduction& red = series.reduction();
  detail::require_nonzero(x, red.n());
  if (max_degree < 0) throw validation_error("puiseux", "max degree must be nonnegative");
  RationalVector w = radical_shift(red.snf, branch);
  const std::size_t n = red.n();
  // <d, w> and <beta_bar^{(j)}, w> per column j.
  Rational dw = 0;
  for (std::size_t i = 0; i < n; ++i) dw += series.d()[i] * w[i];
  RationalVector bw(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) bw[j] += Rational(red.beta_bar(i, j)) * w[i];

  Complex sum = 0.0;
  for (const auto& t : series.terms(max_degree)) {
    if (t.coefficient.magnitude == 0) continue;
    Complex v = t.coefficient.value() * principal_monomial(x, t.support);
    if (branch != 0) {
      Rational turn = dw;
      for (std::size_t j = 0; j < n; ++j) turn += bw[j] * Rational(t.k[j]);
      turn -= Rational(floor(turn));
      v *= std::polar(1.0, 2.0 * std::numbers::pi * to_double(turn));
    }
    sum += v;
  }
  return sum;
}

/// Evaluates every branch and returns the values in branch order.
inline ComplexVector evaluate_puiseux_all_branches(const PuiseuxSeries& series, const ComplexVector& x,
                                                   std::int64_t max_degree) {
  ComplexVector out;
  for (std::size_t b = 0; b < series.reduction().branch_count(); ++b)
    out.push_back(evaluate_puiseux(series, x, max_degree, b));
  return out;
}

}  // namespace trinom
