#pragma once

// Reduced trinomial systems  y^{omega_i} + x_i y^{sigma_i} - 1 = 0,  their pair
// selections, and the reductions (kappa, beta-bar, J/L/T, Phi, Psi) that turn
// them into systems  r_i y^{beta_i} + y^{mu_i} - y^{nu_i} = 0.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "trinom/errors.hpp"
#include "trinom/intlinalg.hpp"
#include "trinom/rational.hpp"

namespace trinom {

/// Support data of a reduced trinomial system. Column i of `omega` (resp.
/// `sigma`) is the exponent vector of the unit (resp. variable) coefficient
/// monomial of equation i.
class TrinomialSystem {
 public:
  TrinomialSystem(IntegerMatrix omega, IntegerMatrix sigma)
      : omega_(std::move(omega)), sigma_(std::move(sigma)) {
    validate();
  }

  std::size_t n() const noexcept { return omega_.size(); }
  const IntegerMatrix& omega() const noexcept { return omega_; }
  const IntegerMatrix& sigma() const noexcept { return sigma_; }

  friend bool operator==(const TrinomialSystem& a, const TrinomialSystem& b) {
    return a.omega_ == b.omega_ && a.sigma_ == b.sigma_;
  }

 private:
  void validate() const {
    const std::size_t n = omega_.size();
    if (sigma_.size() != n) throw validation_error("systems", "omega and sigma differ in dimension");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (omega_(i, j) < 0 || sigma_(i, j) < 0)
          throw validation_error("systems", "exponents must be nonnegative");
    if (determinant(omega_) == 0) throw validation_error("systems", "omega must be nondegenerate");
    for (std::size_t i = 0; i < n; ++i) {
      auto w = omega_.column(i), s = sigma_.column(i);
      std::vector<Integer> zero(n, 0);
      if (w == s || w == zero || s == zero)
        throw validation_error("systems", "equation " + std::to_string(i + 1) +
                                              ": exponents omega, sigma, 0 must be pairwise distinct");
    }
  }

  IntegerMatrix omega_;
  IntegerMatrix sigma_;
};

/// Which two support points (mu, nu) are kept as the constant terms.
enum class PairTag { W0, S0, WS };

using PairSelection = std::vector<PairTag>;

inline std::string to_string(PairTag t) {
  switch (t) {
    case PairTag::W0: return "w0";
    case PairTag::S0: return "s0";
    case PairTag::WS: return "ws";
  }
  return "?";
}

inline std::string to_string(const PairSelection& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + to_string(s[i]);
  return out;
}

/// Parses `s0,w0,ws` (case-insensitive).
inline PairSelection parse_selection(std::string_view text) {
  PairSelection out;
  std::string s(text);
  std::size_t pos = 0;
  while (true) {
    auto comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma - pos);
    for (auto& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    if (tok == "w0") out.push_back(PairTag::W0);
    else if (tok == "s0") out.push_back(PairTag::S0);
    else if (tok == "ws") out.push_back(PairTag::WS);
    else throw validation_error("systems", "unknown pair tag '" + tok + "' (expected w0, s0 or ws)");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline PairSelection uniform_selection(std::size_t n, PairTag t) { return PairSelection(n, t); }

/// Everything the series engines need about one choice of pairs.
struct Reduction {
  TrinomialSystem system;
  PairSelection selection;
  IntegerMatrix mu, nu, beta;  // columns per equation
  IntegerMatrix kappa;         // columns mu_i - nu_i
  IntegerMatrix beta_bar;      // columns beta_i - nu_i
  std::vector<std::size_t> J, L, T;
  SnfDecomposition snf;        // of kappa
  Integer det_kappa;
  RationalMatrix kappa_inv;
  RationalMatrix phi;          // kappa^{-1} sigma
  RationalMatrix psi;          // kappa^{-1} omega

  std::size_t n() const noexcept { return system.n(); }

  /// Number of branches of the matrix radical g^{kappa^{-1}}, i.e. |det kappa|.
  std::size_t branch_count() const {
    Integer a = det_kappa < 0 ? Integer(-det_kappa) : det_kappa;
    return static_cast<std::size_t>(a);
  }

  bool is_identity_reduction() const { return L.empty() && T.empty(); }
};

inline Reduction build_reduction(const TrinomialSystem& system, const PairSelection& selection) {
  const std::size_t n = system.n();
  if (selection.size() != n)
    throw validation_error("systems", "pair selection has " + std::to_string(selection.size()) +
                                          " tags for " + std::to_string(n) + " equations");
  IntegerMatrix mu(n), nu(n), beta(n);
  std::vector<std::size_t> J, L, T;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      const Integer& w = system.omega()(r, i);
      const Integer& s = system.sigma()(r, i);
      switch (selection[i]) {
        case PairTag::W0: mu(r, i) = w; nu(r, i) = 0; beta(r, i) = s; break;
        case PairTag::S0: mu(r, i) = s; nu(r, i) = 0; beta(r, i) = w; break;
        case PairTag::WS: mu(r, i) = w; nu(r, i) = s; beta(r, i) = 0; break;
      }
    }
    switch (selection[i]) {
      case PairTag::W0: J.push_back(i); break;
      case PairTag::S0: L.push_back(i); break;
      case PairTag::WS: T.push_back(i); break;
    }
  }
  IntegerMatrix kappa = mu - nu;
  IntegerMatrix beta_bar = beta - nu;
  Integer det = determinant(kappa);
  if (det == 0) throw SingularKappa("selection " + to_string(selection) + " gives det kappa = 0");
  SnfDecomposition snf = smith_normal_form(kappa);
  RationalMatrix kinv = rational_inverse(kappa, snf);
  RationalMatrix phi = kinv * to_rational(system.sigma());
  RationalMatrix psi = kinv * to_rational(system.omega());
  return Reduction{system, selection, std::move(mu), std::move(nu), std::move(beta),
                   std::move(kappa), std::move(beta_bar), std::move(J), std::move(L), std::move(T),
                   std::move(snf), std::move(det), std::move(kinv), std::move(phi), std::move(psi)};
}

/// All selections (3^n of them, W0 < S0 < WS in each slot, first slot most
/// significant) whose kappa is nonsingular.
inline std::vector<PairSelection> valid_selections(const TrinomialSystem& system) {
  const std::size_t n = system.n();
  std::vector<PairSelection> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    PairSelection s(n);
    std::size_t c = code;
    for (std::size_t i = n; i-- > 0;) {
      s[i] = static_cast<PairTag>(c % 3);
      c /= 3;
    }
    try {
      build_reduction(system, s);
      out.push_back(s);
    } catch (const SingularKappa&) {
    }
  }
  return out;
}

namespace detail {

inline void require_nonzero(const ComplexVector& x, std::size_t n) {
  if (x.size() != n) throw validation_error("systems", "point has wrong dimension");
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] == Complex(0.0, 0.0))
      throw ZeroCoordinate("coordinate x" + std::to_string(i + 1) + " is zero");
}

// (-x) taken literally as e^{i pi} x, then the principal logarithm.
inline Complex log_negated(Complex x) { return std::log(std::exp(Complex(0.0, std::numbers::pi)) * x); }

}  // namespace detail

/// Coordinates r(x) of the reduced system attached to `red`, with
/// principal-branch powers and the (-x_t) factors computed as e^{i pi} x_t.
inline ComplexVector monomial_change(const Reduction& red, const ComplexVector& x) {
  const std::size_t n = red.n();
  detail::require_nonzero(x, n);
  ComplexVector r(n);
  auto pow_l = [&](std::size_t l, const Rational& e) { return principal_pow(x[l], e); };
  auto pow_t = [&](std::size_t t, const Rational& e) {
    if (is_integer(e)) return integer_pow(-x[t], static_cast<long long>(numerator(e)));
    return std::exp(to_double(e) * detail::log_negated(x[t]));
  };
  for (std::size_t j : red.J) {
    Complex v = x[j];
    for (std::size_t l : red.L) v *= pow_l(l, -red.phi(l, j));
    for (std::size_t t : red.T) v *= pow_t(t, red.phi(t, j));
    r[j] = v;
  }
  for (std::size_t j : red.L) {
    Complex v = 1.0;
    for (std::size_t l : red.L) v *= pow_l(l, -red.psi(l, j));
    for (std::size_t t : red.T) v *= pow_t(t, red.psi(t, j));
    r[j] = v;
  }
  for (std::size_t j : red.T) {
    Complex v = -1.0;
    for (std::size_t l : red.L) v *= pow_l(l, red.psi(l, j));
    for (std::size_t t : red.T) v *= pow_t(t, -red.psi(t, j));
    r[j] = v;
  }
  return r;
}

/// The factor relating y^d(x) to y^d(r):
///   prod_{l in L} x_l^{-<d, kinv_l>} * prod_{t in T} (e^{i pi} x_t)^{<d, kinv_t>}.
inline Complex monomial_prefactor(const Reduction& red, const RationalVector& d, const ComplexVector& x) {
  const std::size_t n = red.n();
  detail::require_nonzero(x, n);
  auto dot_row = [&](std::size_t i) {
    Rational s = 0;
    for (std::size_t j = 0; j < n; ++j) s += d[j] * red.kappa_inv(i, j);
    return s;
  };
  Complex logv = 0.0;
  for (std::size_t l : red.L) logv -= to_double(dot_row(l)) * std::log(x[l]);
  for (std::size_t t : red.T) logv += to_double(dot_row(t)) * detail::log_negated(x[t]);
  return std::exp(logv);
}

/// Digits (e_1..e_n), 0 <= e_i < q_i, of a radical branch index; the first
/// digit is the most significant.
inline std::vector<Integer> branch_digits(const SnfDecomposition& snf, std::size_t branch) {
  auto q = snf.invariants();
  std::size_t total = 1;
  for (auto& v : q) total *= static_cast<std::size_t>(v);
  if (branch >= total)
    throw BranchOutOfRange("branch " + std::to_string(branch) + " not in [0, " + std::to_string(total) + ")");
  std::vector<Integer> e(q.size());
  for (std::size_t i = q.size(); i-- > 0;) {
    std::size_t qi = static_cast<std::size_t>(q[i]);
    e[i] = branch % qi;
    branch /= qi;
  }
  return e;
}

/// Rational shift w with lambda_branch = lambda_0 * exp(2 pi i w), namely
/// w = C^T S^{-1} e for the branch digits e.
inline RationalVector radical_shift(const SnfDecomposition& snf, std::size_t branch) {
  auto e = branch_digits(snf, branch);
  const std::size_t n = e.size();
  RationalVector w(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) w[j] += Rational(snf.C(i, j) * e[i], snf.S(i, i));
  return w;
}

/// log lambda for one branch of lambda^{kappa^{(i)}} = g_i, from the Smith
/// factors: rho_i = (g^{f^{(i)}})^{1/q_i} with the branch digit e_i, then
/// lambda_j = prod_i rho_i^{C_ij}. Takes log g so callers control arguments.
inline ComplexVector matrix_radical_log(const SnfDecomposition& snf, const ComplexVector& log_g,
                                        std::size_t branch) {
  const std::size_t n = snf.S.size();
  if (log_g.size() != n) throw validation_error("systems", "radical: wrong dimension");
  auto e = branch_digits(snf, branch);
  ComplexVector log_rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += static_cast<double>(snf.F(k, i)) * log_g[k];
    s += Complex(0.0, 2.0 * std::numbers::pi * static_cast<double>(e[i]));
    log_rho[i] = s / static_cast<double>(snf.S(i, i));
  }
  ComplexVector log_lambda(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) log_lambda[j] += static_cast<double>(snf.C(i, j)) * log_rho[i];
  return log_lambda;
}

inline ComplexVector matrix_radical(const IntegerMatrix& kappa, const ComplexVector& g, std::size_t branch) {
  if (determinant(kappa) == 0) throw SingularKappa("matrix radical of a singular kappa");
  ComplexVector log_g(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == Complex(0.0, 0.0)) throw ZeroCoordinate("radical of zero");
    log_g[i] = std::log(g[i]);
  }
  auto ll = matrix_radical_log(smith_normal_form(kappa), log_g, branch);
  for (auto& v : ll) v = std::exp(v);
  return ll;
}

/// Coefficients (a_omega, a_sigma, a_0) = (1, x_i, -1) of equation i of the
/// x-system, read as a universal trinomial system.
struct UniversalCoefficients {
  ComplexVector a_omega, a_sigma, a_zero;

  static UniversalCoefficients from_x(const ComplexVector& x) {
    UniversalCoefficients c;
    c.a_omega.assign(x.size(), 1.0);
    c.a_sigma = x;
    c.a_zero.assign(x.size(), -1.0);
    return c;
  }
};

struct PolyhomogeneityData {
  ComplexVector lambda;
  ComplexVector log_lambda;
  ComplexVector lambda0;
  ComplexVector g;
};

namespace detail {

inline Complex coefficient_at(const Reduction& red, const UniversalCoefficients& a, std::size_t i,
                              const IntegerMatrix& which) {
  const std::size_t n = red.n();
  bool is_omega = true, is_sigma = true, is_zero = true;
  for (std::size_t r = 0; r < n; ++r) {
    if (which(r, i) != red.system.omega()(r, i)) is_omega = false;
    if (which(r, i) != red.system.sigma()(r, i)) is_sigma = false;
    if (which(r, i) != 0) is_zero = false;
  }
  if (is_omega) return a.a_omega[i];
  if (is_sigma) return a.a_sigma[i];
  if (is_zero) return a.a_zero[i];
  throw validation_error("systems", "exponent not in support");
}

inline Complex monomial_log(const IntegerMatrix& exps, std::size_t col, const ComplexVector& log_lambda) {
  Complex s = 0.0;
  for (std::size_t r = 0; r < exps.size(); ++r) s += static_cast<double>(exps(r, col)) * log_lambda[r];
  return s;
}

}  // namespace detail

/// Polyhomogeneity parameters for general universal coefficients: lambda with
/// lambda^{kappa^{(i)}} = g_i = -a_nu / a_mu (one radical branch, principal
/// Log g) and lambda0_i = 1 / (lambda^{mu_i} a_mu).
inline PolyhomogeneityData polyhomogeneity_data(const Reduction& red, const UniversalCoefficients& a,
                                                std::size_t branch) {
  const std::size_t n = red.n();
  PolyhomogeneityData out;
  out.g.resize(n);
  ComplexVector log_g(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex am = detail::coefficient_at(red, a, i, red.mu);
    Complex an = detail::coefficient_at(red, a, i, red.nu);
    if (am == Complex(0.0) || an == Complex(0.0)) throw ZeroCoordinate("vanishing pair coefficient");
    out.g[i] = -an / am;
    log_g[i] = std::log(out.g[i]);
  }
  out.log_lambda = matrix_radical_log(red.snf, log_g, branch);
  out.lambda.resize(n);
  out.lambda0.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.lambda[j] = std::exp(out.log_lambda[j]);
  for (std::size_t i = 0; i < n; ++i) {
    Complex am = detail::coefficient_at(red, a, i, red.mu);
    out.lambda0[i] = 1.0 / (std::exp(detail::monomial_log(red.mu, i, out.log_lambda)) * am);
  }
  return out;
}

inline PolyhomogeneityData polyhomogeneity_data(const Reduction& red, const ComplexVector& x, std::size_t branch) {
  detail::require_nonzero(x, red.n());
  return polyhomogeneity_data(red, UniversalCoefficients::from_x(x), branch);
}

/// Reduced coefficients r_i = lambda0_i lambda^{beta_i} a_beta for a given
/// branch; the x-system solution is then lambda (.) y(r).
inline ComplexVector reduced_coefficients(const Reduction& red, const PolyhomogeneityData& ph,
                                          const UniversalCoefficients& a) {
  const std::size_t n = red.n();
  ComplexVector r(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex ab = detail::coefficient_at(red, a, i, red.beta);
    r[i] = ph.lambda0[i] * std::exp(detail::monomial_log(red.beta, i, ph.log_lambda)) * ab;
  }
  return r;
}

}  // namespace trinom
