#pragma once

// Numeric ground truth: the principal solution (y(0) = (1,...,1)) tracked by
// Newton continuation in log coordinates u = log y, plus exact Lagrange
// inversion for one equation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trinom/errors.hpp"
#include "trinom/multi_index.hpp"
#include "trinom/rational.hpp"
#include "trinom/systems.hpp"

namespace trinom::oracle {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// n equations sum_m a_{i,m} y^{alpha_{i,m}} = 0 with three terms each; the
/// coefficients are supplied separately so they can move along a path.
struct ThreeTermSystem {
  std::size_t n = 0;
  // exponents[i][m] is the exponent vector of term m of equation i
  std::vector<std::array<std::vector<double>, 3>> exponents;
};

using Coefficients = std::vector<std::array<Complex, 3>>;

/// Terms ordered (omega, sigma, 0) with coefficients (1, x_i, -1).
inline ThreeTermSystem x_system(const TrinomialSystem& sys) {
  ThreeTermSystem s;
  s.n = sys.n();
  s.exponents.resize(s.n);
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t r = 0; r < s.n; ++r) {
      s.exponents[i][0].push_back(static_cast<double>(sys.omega()(r, i)));
      s.exponents[i][1].push_back(static_cast<double>(sys.sigma()(r, i)));
      s.exponents[i][2].push_back(0.0);
    }
  return s;
}

inline Coefficients x_coefficients(const ComplexVector& x) {
  Coefficients c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = {Complex(1.0), x[i], Complex(-1.0)};
  return c;
}

/// Terms ordered (beta, mu, nu) with coefficients (r_i, 1, -1).
inline ThreeTermSystem reduced_system(const Reduction& red) {
  ThreeTermSystem s;
  s.n = red.n();
  s.exponents.resize(s.n);
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t r = 0; r < s.n; ++r) {
      s.exponents[i][0].push_back(static_cast<double>(red.beta(r, i)));
      s.exponents[i][1].push_back(static_cast<double>(red.mu(r, i)));
      s.exponents[i][2].push_back(static_cast<double>(red.nu(r, i)));
    }
  return s;
}

inline Coefficients reduced_coefficients_for(const ComplexVector& r) {
  Coefficients c(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) c[i] = {r[i], Complex(1.0), Complex(-1.0)};
  return c;
}

namespace detail {

inline Complex term_value(const std::vector<double>& alpha, const CVector& u) {
  Complex s = 0.0;
  for (std::size_t j = 0; j < alpha.size(); ++j)
    if (alpha[j] != 0.0) s += alpha[j] * u[static_cast<Eigen::Index>(j)];
  return std::exp(s);
}

inline CVector residual(const ThreeTermSystem& sys, const Coefficients& a, const CVector& u) {
  CVector f(static_cast<Eigen::Index>(sys.n));
  for (std::size_t i = 0; i < sys.n; ++i) {
    Complex v = 0.0;
    for (int m = 0; m < 3; ++m) v += a[i][m] * term_value(sys.exponents[i][m], u);
    f[static_cast<Eigen::Index>(i)] = v;
  }
  return f;
}

inline CMatrix jacobian(const ThreeTermSystem& sys, const Coefficients& a, const CVector& u) {
  const auto n = static_cast<Eigen::Index>(sys.n);
  CMatrix jm = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < sys.n; ++i)
    for (int m = 0; m < 3; ++m) {
      Complex t = a[i][m] * term_value(sys.exponents[i][m], u);
      for (std::size_t j = 0; j < sys.n; ++j)
        jm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += sys.exponents[i][m][j] * t;
    }
  return jm;
}

inline double max_abs(const CVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// 1 / sigma_min of the Jacobian with row i divided by sum_m |a_im y^alpha_im| |alpha_im|.
// O(1) at regular points and of order 1/distance near a multiple root; unlike
// the plain condition number it is not blind to n = 1.
inline double singularity_measure(const ThreeTermSystem& sys, const Coefficients& a, const CVector& u) {
  CMatrix jm = jacobian(sys, a, u);
  for (std::size_t i = 0; i < sys.n; ++i) {
    double scale = 0.0;
    for (int m = 0; m < 3; ++m) {
      double norm = 0.0;
      for (double e : sys.exponents[i][m]) norm = std::max(norm, std::fabs(e));
      scale += std::abs(a[i][m] * term_value(sys.exponents[i][m], u)) * norm;
    }
    if (scale > 0.0) jm.row(static_cast<Eigen::Index>(i)) /= scale;
  }
  Eigen::JacobiSVD<CMatrix> svd(jm);
  double smin = svd.singularValues()[svd.singularValues().size() - 1];
  return smin == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / smin;
}

}  // namespace detail

/// Residual max_i |P_i(y)| at log coordinates u.
inline double residual_norm(const ThreeTermSystem& sys, const Coefficients& a, const ComplexVector& u) {
  CVector v(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) v[static_cast<Eigen::Index>(i)] = u[i];
  return detail::max_abs(detail::residual(sys, a, v));
}

struct TrackOptions {
  int steps = 64;             // initial number of uniform steps over t in [0,1]
  double tolerance = 1e-12;   // residual bound at every waypoint
  int max_newton = 8;         // more iterations than this halves the step
  double condition_limit = 1e4;  // bound on detail::singularity_measure
  double max_jump = 0.25;     // bound on |u_new - u_predicted| per step
  double min_step = 1e-12;
};

struct Waypoint {
  double t;
  ComplexVector log_y;
  double residual;
};

struct ContinuationPath {
  std::vector<Waypoint> waypoints;
  ComplexVector log_y;  // at t = 1, continuous along the path
  ComplexVector y;
  double residual = 0.0;
};

/// Follows the solution of sys with coefficients path(t), t in [0,1], from
/// log coordinates u0 at t = 0.
inline ContinuationPath track(const ThreeTermSystem& sys, const std::function<Coefficients(double)>& path,
                              const ComplexVector& u0, const TrackOptions& opt = {}) {
  const auto n = static_cast<Eigen::Index>(sys.n);
  CVector u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = u0[static_cast<std::size_t>(i)];
  auto to_std = [](const CVector& v) {
    ComplexVector out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i];
    return out;
  };

  // Newton at fixed t; returns iterations used or -1.
  auto newton = [&](double t, CVector& v, int max_iter) {
    Coefficients a = path(t);
    for (int it = 0; it <= max_iter; ++it) {
      CVector f = detail::residual(sys, a, v);
      double res = detail::max_abs(f);
      if (res < opt.tolerance) {
        // one polishing step keeps residuals well under the contract
        CMatrix jm = detail::jacobian(sys, a, v);
        CVector dv = jm.partialPivLu().solve(-f);
        CVector w = v + dv;
        if (detail::max_abs(detail::residual(sys, a, w)) <= res) v = w;
        return it;
      }
      if (it == max_iter) break;
      CMatrix jm = detail::jacobian(sys, a, v);
      CVector dv = jm.partialPivLu().solve(-f);
      if (!dv.allFinite()) return -1;
      v += dv;
    }
    return -1;
  };

  ContinuationPath out;
  {
    CVector v = u;
    if (newton(0.0, v, 50) < 0) throw NoConvergence("start point is not a solution");
    u = v;
  }
  out.waypoints.push_back({0.0, to_std(u), detail::max_abs(detail::residual(sys, path(0.0), u))});

  double t = 0.0;
  double h = 1.0 / opt.steps;
  CVector prev = u;
  double prev_h = 0.0;
  while (t < 1.0) {
    h = std::min(h, 1.0 - t);
    if (h < opt.min_step) {
      double cond = detail::singularity_measure(sys, path(t), u);
      if (cond > opt.condition_limit)
        throw PathSingular("path meets the discriminant near t=" + std::to_string(t));
      throw NoConvergence("step size underflow at t=" + std::to_string(t));
    }
    CVector pred = u;
    if (prev_h > 0.0) pred = u + (u - prev) * (h / prev_h);
    CVector v = pred;
    int its = newton(t + h, v, opt.max_newton);
    if (its < 0 || (v - pred).cwiseAbs().maxCoeff() > opt.max_jump) {
      h *= 0.5;
      continue;
    }
    Coefficients a = path(t + h);
    double cond = detail::singularity_measure(sys, a, v);
    if (cond > opt.condition_limit)
      throw PathSingular("Jacobian nearly singular (measure " + std::to_string(cond) + ") at t=" + std::to_string(t + h));
    prev = u;
    prev_h = h;
    u = v;
    t = (1.0 - (t + h) < 1e-15) ? 1.0 : t + h;
    out.waypoints.push_back({t, to_std(u), detail::max_abs(detail::residual(sys, a, u))});
    if (its <= 3) h *= 1.5;
  }
  out.log_y = to_std(u);
  out.y.resize(out.log_y.size());
  for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] = std::exp(out.log_y[i]);
  out.residual = out.waypoints.back().residual;
  if (out.residual >= opt.tolerance) throw NoConvergence("final residual above tolerance");
  return out;
}

/// Piecewise-linear path 0 -> p_1 -> ... -> p_m in coefficient space of the
/// x-system, traversed segment by segment (each segment over t in [0,1]).
inline ContinuationPath principal_path(const TrinomialSystem& system, const std::vector<ComplexVector>& points,
                                       const TrackOptions& opt = {}) {
  ThreeTermSystem sys = x_system(system);
  const std::size_t n = system.n();
  ComplexVector u(n, 0.0);
  ComplexVector from(n, 0.0);
  ContinuationPath total;
  total.waypoints.push_back({0.0, u, 0.0});
  if (points.empty()) {
    total.log_y = u;
    total.y.assign(n, 1.0);
    return total;
  }
  for (std::size_t s = 0; s < points.size(); ++s) {
    const ComplexVector& to = points[s];
    if (to.size() != n) throw validation_error("oracle", "path point has wrong dimension");
    auto seg = track(sys, [&](double t) {
      ComplexVector x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = from[i] + t * (to[i] - from[i]);
      return x_coefficients(x);
    }, u, opt);
    for (std::size_t w = 1; w < seg.waypoints.size(); ++w) {
      auto wp = seg.waypoints[w];
      wp.t += static_cast<double>(s);
      total.waypoints.push_back(std::move(wp));
    }
    u = seg.log_y;
    from = to;
    total.residual = seg.residual;
  }
  total.log_y = u;
  total.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) total.y[i] = std::exp(u[i]);
  return total;
}

/// Principal solution at x along the straight segment 0 -> x.
inline ComplexVector principal_solution(const TrinomialSystem& system, const ComplexVector& x,
                                        const TrackOptions& opt = {}) {
  if (x.size() != system.n()) throw validation_error("oracle", "point has wrong dimension");
  bool zero = std::all_of(x.begin(), x.end(), [](Complex v) { return v == Complex(0.0); });
  if (zero) return ComplexVector(system.n(), 1.0);
  return principal_path(system, {x}, opt).y;
}

/// Principal solution of the reduced system of `red` at coefficients r along
/// the straight segment 0 -> r.
inline ContinuationPath reduced_principal_path(const Reduction& red, const ComplexVector& r,
                                               const TrackOptions& opt = {}) {
  const std::size_t n = red.n();
  if (r.size() != n) throw validation_error("oracle", "point has wrong dimension");
  ThreeTermSystem sys = reduced_system(red);
  return track(sys, [&](double t) {
    ComplexVector rt(n);
    for (std::size_t i = 0; i < n; ++i) rt[i] = t * r[i];
    return reduced_coefficients_for(rt);
  }, ComplexVector(n, 0.0), opt);
}

/// prod y_i^{d_i}, principal branch for non-integer d_i.
inline Complex monomial_of_solution(const ComplexVector& y, const RationalVector& d) {
  if (y.size() != d.size()) throw validation_error("oracle", "d has wrong dimension");
  Complex v = 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == Complex(0.0)) throw ZeroCoordinate("solution coordinate y" + std::to_string(i + 1) + " is zero");
    if (d[i] != 0) v *= principal_pow(y[i], d[i]);
  }
  return v;
}

/// exp(<d, log y>) with log y continued along the path.
inline Complex continued_monomial(const ContinuationPath& path, const RationalVector& d) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += to_double(d[i]) * path.log_y[i];
  return std::exp(s);
}

/// Exact Taylor coefficient [x^k] y^d for one equation y^w + x y^s - 1 = 0 by
/// Lagrange inversion of x = (1 - y^w) / y^s around y = 1.
inline Rational lagrange_coefficient(const TrinomialSystem& system, const Rational& d, std::int64_t k) {
  if (system.n() != 1) throw validation_error("oracle", "Lagrange inversion needs n = 1");
  if (k < 0) throw validation_error("oracle", "negative order");
  if (k == 0) return 1;
  const auto w = static_cast<std::int64_t>(system.omega()(0, 0));
  const auto s = static_cast<std::int64_t>(system.sigma()(0, 0));
  const std::size_t len = static_cast<std::size_t>(k);  // work modulo t^k

  using Series = std::vector<Rational>;
  auto mul = [&](const Series& a, const Series& b) {
    Series c(len, Rational(0));
    for (std::size_t i = 0; i < len; ++i)
      if (a[i] != 0)
        for (std::size_t j = 0; i + j < len; ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  // (1+t)^p for rational p
  auto binomial = [&](const Rational& p) {
    Series c(len, Rational(0));
    Rational term = 1;
    for (std::size_t j = 0; j < len; ++j) {
      c[j] = term;
      term = term * (p - Rational(static_cast<std::int64_t>(j))) / Rational(static_cast<std::int64_t>(j + 1));
    }
    return c;
  };
  // phi(t) = t / g(1+t) = -(1+t)^s / sum_{j>=1} C(w,j) t^{j-1}
  Series denom(len, Rational(0));
  for (std::size_t j = 1; j <= static_cast<std::size_t>(w) && j - 1 < len; ++j) {
    Integer c = 1;
    for (std::size_t m = 0; m < j; ++m) c = c * (w - static_cast<std::int64_t>(m)) / static_cast<std::int64_t>(m + 1);
    denom[j - 1] = Rational(c);
  }
  Series inv(len, Rational(0));
  inv[0] = 1 / denom[0];
  for (std::size_t i = 1; i < len; ++i) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= i; ++j) acc += denom[j] * inv[i - j];
    inv[i] = -acc / denom[0];
  }
  Series phi = mul(binomial(Rational(s)), inv);
  for (auto& v : phi) v = -v;
  Series pk(len, Rational(0));
  pk[0] = 1;
  for (std::int64_t i = 0; i < k; ++i) pk = mul(pk, phi);
  Series h = binomial(d - 1);
  for (auto& v : h) v *= d;
  Series prod = mul(h, pk);
  return prod[len - 1] / Rational(k);
}

enum class CoefficientMethod { FiniteDifference, LagrangeInversion };

/// Taylor coefficient of y^d at x = 0: Richardson-extrapolated central
/// differences of the continued principal solution, or exact Lagrange
/// inversion (n = 1 only).
inline double reference_coefficient(const TrinomialSystem& system, const RationalVector& d, const MultiIndex& k,
                                    CoefficientMethod method, double step = 0.02) {
  const std::size_t n = system.n();
  if (k.size() != n || d.size() != n) throw validation_error("oracle", "dimension mismatch");
  if (method == CoefficientMethod::LagrangeInversion) return to_double(lagrange_coefficient(system, d[0], k[0]));
  if (k.is_zero()) return 1.0;

  auto f = [&](const std::vector<double>& x) {
    ComplexVector xc(x.begin(), x.end());
    bool zero = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
    if (zero) return 1.0;
    return continued_monomial(principal_path(system, {xc}), d).real();
  };
  // Tensor product of k_j-th order central difference stencils:
  // f^{(m)}(0) ~ h^{-m} sum_i (-1)^i C(m,i) f((m/2 - i) h).
  auto difference = [&](double h) {
    std::vector<std::size_t> idx(n, 0);
    double total = 0.0;
    while (true) {
      double weight = 1.0;
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) {
        auto m = static_cast<double>(k[j]);
        auto i = static_cast<double>(idx[j]);
        weight *= ((idx[j] % 2) ? -1.0 : 1.0) * std::tgamma(m + 1) / (std::tgamma(i + 1) * std::tgamma(m - i + 1));
        weight /= std::pow(h, m);
        x[j] = (m / 2.0 - i) * h;
      }
      total += weight * f(x);
      std::size_t j = 0;
      while (j < n && ++idx[j] > static_cast<std::size_t>(k[j])) idx[j++] = 0;
      if (j == n) break;
    }
    return total;
  };
  double d1 = difference(step);
  double d2 = difference(step / 2);
  double d4 = difference(step / 4);
  // two Richardson levels for an O(h^2) stencil
  double r1 = (4.0 * d2 - d1) / 3.0;
  double r2 = (4.0 * d4 - d2) / 3.0;
  double deriv = (16.0 * r2 - r1) / 15.0;
  double fact = 1.0;
  for (std::size_t j = 0; j < n; ++j) fact *= std::tgamma(static_cast<double>(k[j]) + 1);
  return deriv / fact;
}

}  // namespace trinom::oracle
