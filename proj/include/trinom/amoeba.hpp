#pragma once

// Sampling the discriminant amoeba: rho lies on it iff for some arguments
// theta the system P(y; x = exp(rho + i theta)) = 0 has a critical solution,
// det dP/dy = 0. Critical solutions are searched by multistart
// Levenberg-Marquardt in (u = log y, theta).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <cstdio>
#include <ostream>
#include <queue>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "trinom/errors.hpp"
#include "trinom/parallel.hpp"
#include "trinom/rational.hpp"
#include "trinom/systems.hpp"

namespace trinom {

struct MembershipResult {
  bool member = false;
  double score = 0.0;  // fraction of starts that converged
};

struct MembershipOptions {
  int attempts = 32;
  double tolerance = 1e-8;
  int max_iterations = 80;
  std::uint64_t seed = 1;
  // > 0: accept any |x| = exp(rho') with |rho' - rho|_inf < radius, so a
  // grid cell is marked when the amoeba meets it
  double radius = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Real residual vector (Re, Im of P_1..P_n, det dP/du) at
// v = (Re u, Im u, theta[, s]) with rho' = rho + radius * tanh(s).
class CriticalSystem {
 public:
  CriticalSystem(const TrinomialSystem& sys, const std::vector<double>& rho, double radius = 0.0)
      : n_(sys.n()), rho_(rho), radius_(radius) {
    omega_.resize(n_ * n_);
    sigma_.resize(n_ * n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t i = 0; i < n_; ++i) {
        omega_[r * n_ + i] = static_cast<double>(sys.omega()(r, i));
        sigma_[r * n_ + i] = static_cast<double>(sys.sigma()(r, i));
      }
  }

  std::size_t unknowns() const { return (radius_ > 0 ? 4 : 3) * n_; }
  std::size_t equations() const { return 2 * n_ + 2; }

  Eigen::VectorXd operator()(const Eigen::VectorXd& v) const {
    const std::size_t n = n_;
    std::vector<Complex> u(n);
    for (std::size_t j = 0; j < n; ++j) u[j] = Complex(v[static_cast<Eigen::Index>(j)], v[static_cast<Eigen::Index>(n + j)]);
    Eigen::MatrixXcd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd out(static_cast<Eigen::Index>(equations()));
    for (std::size_t i = 0; i < n; ++i) {
      Complex wu = 0.0, su = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        wu += omega_[r * n + i] * u[r];
        su += sigma_[r * n + i] * u[r];
      }
      double rho = rho_[i];
      if (radius_ > 0) rho += radius_ * std::tanh(v[static_cast<Eigen::Index>(3 * n + i)]);
      Complex x = std::exp(Complex(rho, v[static_cast<Eigen::Index>(2 * n + i)]));
      Complex tw = std::exp(wu), ts = x * std::exp(su);
      Complex p = tw + ts - 1.0;
      out[static_cast<Eigen::Index>(2 * i)] = p.real();
      out[static_cast<Eigen::Index>(2 * i + 1)] = p.imag();
      for (std::size_t r = 0; r < n; ++r)
        jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) = omega_[r * n + i] * tw + sigma_[r * n + i] * ts;
    }
    Complex det = jac.determinant();
    out[static_cast<Eigen::Index>(2 * n)] = det.real();
    out[static_cast<Eigen::Index>(2 * n + 1)] = det.imag();
    return out;
  }

 private:
  std::size_t n_;
  std::vector<double> rho_;
  double radius_;
  std::vector<double> omega_, sigma_;
};

// Levenberg-Marquardt with a central-difference Jacobian; true if the
// residual drops below tol.
inline bool levenberg_marquardt(const CriticalSystem& f, Eigen::VectorXd v, double tol, int max_iter,
                                double u_limit) {
  const auto m = static_cast<Eigen::Index>(f.unknowns());
  Eigen::VectorXd r = f(v);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (int it = 0; it < max_iter; ++it) {
    if (r.cwiseAbs().maxCoeff() < tol) return true;
    Eigen::MatrixXd jac(r.size(), m);
    for (Eigen::Index k = 0; k < m; ++k) {
      double h = 1e-7 * (1.0 + std::fabs(v[k]));
      Eigen::VectorXd vp = v, vm = v;
      vp[k] += h;
      vm[k] -= h;
      jac.col(k) = (f(vp) - f(vm)) / (2 * h);
    }
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::VectorXd g = jac.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::MatrixXd a = jtj;
      a.diagonal().array() += lambda * (1.0 + jtj.diagonal().array());
      Eigen::VectorXd step = a.ldlt().solve(-g);
      Eigen::VectorXd cand = v + step;
      Eigen::VectorXd rc = f(cand);
      double c = rc.squaredNorm();
      if (std::isfinite(c) && c < cost) {
        v = cand;
        r = rc;
        cost = c;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
    for (std::size_t j = 0; j < f.equations() / 2 - 1; ++j)
      if (std::fabs(v[static_cast<Eigen::Index>(j)]) > u_limit) return false;
  }
  return r.cwiseAbs().maxCoeff() < tol;
}

}  // namespace detail

/// Multistart search for a critical solution over the torus |x| = exp(rho).
/// `stream` selects an independent random stream (grid cell index).
inline MembershipResult amoeba_membership(const TrinomialSystem& system, const std::vector<double>& rho,
                                          const MembershipOptions& opt = {}, std::uint64_t stream = 0) {
  const std::size_t n = system.n();
  if (rho.size() != n) throw validation_error("amoeba", "rho has wrong dimension");
  MembershipResult out;
  if (opt.attempts <= 0) return out;
  detail::CriticalSystem f(system, rho, opt.radius);
  std::mt19937_64 rng(detail::splitmix64(opt.seed ^ detail::splitmix64(stream)));
  double spread = 1.0;
  for (double r : rho) spread = std::max(spread, 1.0 + std::fabs(r));
  std::uniform_real_distribution<double> re(-spread, spread), ang(-std::numbers::pi, std::numbers::pi);
  int hits = 0;
  for (int a = 0; a < opt.attempts; ++a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(f.unknowns()));
    for (std::size_t j = 0; j < n; ++j) {
      v[static_cast<Eigen::Index>(j)] = re(rng);
      v[static_cast<Eigen::Index>(n + j)] = ang(rng);
      v[static_cast<Eigen::Index>(2 * n + j)] = ang(rng);
      if (opt.radius > 0) v[static_cast<Eigen::Index>(3 * n + j)] = 0.0;
    }
    if (detail::levenberg_marquardt(f, v, opt.tolerance, opt.max_iterations, 40.0)) ++hits;
  }
  out.score = static_cast<double>(hits) / opt.attempts;
  out.member = hits > 0;
  return out;
}

/// Regular grid over a box in Log coordinates; cell centers lo + i*step.
struct GridSpec {
  std::vector<double> lo, hi;
  double step = 0.1;

  std::vector<std::size_t> shape() const {
    std::vector<std::size_t> s;
    for (std::size_t a = 0; a < lo.size(); ++a) {
      if (hi[a] < lo[a] || step <= 0) {
        s.push_back(0);
        continue;
      }
      s.push_back(static_cast<std::size_t>(std::floor((hi[a] - lo[a]) / step + 1e-9)) + 1);
    }
    return s;
  }
};

struct AmoebaCell {
  std::vector<double> rho;
  bool member;
  double score;
};

struct AmoebaGrid {
  GridSpec spec;
  std::vector<std::size_t> shape;
  std::vector<AmoebaCell> cells;  // first axis varies slowest

  bool member(std::size_t i, std::size_t j) const { return cells[i * shape[1] + j].member; }
};

/// A point of the critical locus: log coordinates u of the critical
/// solution, arguments theta and Log|x| = rho.
struct CriticalPoint {
  std::vector<double> rho;
  std::vector<Complex> u;
  std::vector<double> theta;
};

namespace detail {

// Critical points are parametrized by t_i = y^{omega_i}: row i of dP/du is
// sigma_i + t_i (omega_i - sigma_i), and x_i = (1 - t_i) y^{-sigma_i}.
class CriticalParametrization {
 public:
  explicit CriticalParametrization(const TrinomialSystem& sys) : n_(sys.n()) {
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd om(n, n);
    sig_.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index i = 0; i < n; ++i) {
        om(r, i) = static_cast<double>(sys.omega()(static_cast<std::size_t>(r), static_cast<std::size_t>(i)));
        sig_(r, i) = static_cast<double>(sys.sigma()(static_cast<std::size_t>(r), static_cast<std::size_t>(i)));
      }
    omega_t_inv_ = om.transpose().inverse();
    diff_ = om - sig_;
  }

  // For n = 2: t2 = -(a + b t1) / (c + e t1) from det = a + b t1 + c t2 + e t1 t2.
  std::optional<CriticalPoint> from_t1(Complex t1) const {
    Complex t2;
    if (n_ == 2) {
      auto cross = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q) { return p[0] * q[1] - p[1] * q[0]; };
      Eigen::Vector2d s1 = sig_.col(0), s2 = sig_.col(1), d1 = diff_.col(0), d2 = diff_.col(1);
      double a = cross(s1, s2), b = cross(d1, s2), c = cross(s1, d2), e = cross(d1, d2);
      Complex den = c + e * t1;
      if (std::abs(den) == 0.0) return std::nullopt;
      t2 = -(a + b * t1) / den;
      return from_t({t1, t2});
    }
    return std::nullopt;
  }

  // n = 1: sigma + t (omega - sigma) = 0.
  std::optional<CriticalPoint> single() const {
    if (n_ != 1 || diff_(0, 0) == 0.0) return std::nullopt;
    return from_t({Complex(-sig_(0, 0) / diff_(0, 0))});
  }

  std::optional<CriticalPoint> from_t(const std::vector<Complex>& t) const {
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::VectorXcd logt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex ti = t[static_cast<std::size_t>(i)];
      if (std::abs(ti) == 0.0 || std::abs(1.0 - ti) == 0.0 || !std::isfinite(std::abs(ti))) return std::nullopt;
      logt[i] = std::log(ti);
    }
    Eigen::VectorXcd u = omega_t_inv_.cast<Complex>() * logt;
    CriticalPoint p;
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex su = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) su += sig_(r, i) * u[r];
      Complex logx = std::log(1.0 - t[static_cast<std::size_t>(i)]) - su;
      p.rho.push_back(logx.real());
      p.theta.push_back(std::remainder(logx.imag(), 2 * std::numbers::pi));
      p.u.push_back(u[i]);
    }
    return p;
  }

 private:
  std::size_t n_;
  Eigen::MatrixXd sig_, diff_, omega_t_inv_;
};

}  // namespace detail

/// Critical points whose rho falls in the box [lo - margin, hi + margin],
/// sampled adaptively until neighbouring images are closer than `spacing`.
/// Supported for n <= 2; empty otherwise.
inline std::vector<CriticalPoint> critical_atlas(const TrinomialSystem& system, const GridSpec& grid, double spacing,
                                                 int max_depth = 12) {
  std::vector<CriticalPoint> out;
  const std::size_t n = system.n();
  detail::CriticalParametrization par(system);
  auto inside = [&](const CriticalPoint& p, double margin) {
    for (std::size_t a = 0; a < n; ++a)
      if (p.rho[a] < grid.lo[a] - margin || p.rho[a] > grid.hi[a] + margin) return false;
    return true;
  };
  if (n == 1) {
    if (auto p = par.single(); p && inside(*p, grid.step)) out.push_back(*p);
    return out;
  }
  if (n != 2) return out;

  // t1 = exp(s + i phi) over a rectangle, refined where the image spreads.
  const double smax = 24.0, pi = std::numbers::pi;
  const int base_s = 96, base_phi = 64;
  auto eval = [&](double s, double phi) { return par.from_t1(std::exp(Complex(s, phi))); };
  auto dist = [](const std::optional<CriticalPoint>& a, const std::optional<CriticalPoint>& b) {
    if (!a || !b) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t k = 0; k < a->rho.size(); ++k) d = std::max(d, std::fabs(a->rho[k] - b->rho[k]));
    return d;
  };
  auto rec = [&](auto&& self, double s0, double s1, double p0, double p1, int depth) -> void {
    std::array<std::optional<CriticalPoint>, 5> c{eval(s0, p0), eval(s1, p0), eval(s0, p1), eval(s1, p1),
                                                  eval((s0 + s1) / 2, (p0 + p1) / 2)};
    bool near = false;
    for (auto& p : c)
      if (p && inside(*p, 1.0)) near = true;
    double spread = 0.0;
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = a + 1; b < c.size(); ++b) spread = std::max(spread, dist(c[a], c[b]));
    if (depth < max_depth && spread > spacing && (near || spread > 1.0)) {
      double sm = (s0 + s1) / 2, pm = (p0 + p1) / 2;
      self(self, s0, sm, p0, pm, depth + 1);
      self(self, sm, s1, p0, pm, depth + 1);
      self(self, s0, sm, pm, p1, depth + 1);
      self(self, sm, s1, pm, p1, depth + 1);
      return;
    }
    for (auto& p : c)
      if (p && inside(*p, 0.0)) out.push_back(*p);
  };
  const double ds = 2 * smax / base_s, dp = 2 * pi / base_phi;
  for (int i = 0; i < base_s; ++i)
    for (int j = 0; j < base_phi; ++j)
      rec(rec, -smax + i * ds, -smax + (i + 1) * ds, -pi + j * dp, -pi + (j + 1) * dp, 0);
  return out;
}

/// Scans the grid; a cell is a member when the critical system has a
/// solution with Log|x| inside the cell. Starts come from the critical atlas
/// (when available) followed by random starts.
inline AmoebaGrid amoeba_scan(const TrinomialSystem& system, const GridSpec& grid, const MembershipOptions& opt = {}) {
  const std::size_t n = system.n();
  if (grid.lo.size() != n || grid.hi.size() != n) throw validation_error("amoeba", "grid has wrong dimension");
  AmoebaGrid out{grid, grid.shape(), {}};
  std::size_t total = n == 0 ? 0 : 1;
  for (auto s : out.shape) total *= s;
  out.cells.resize(total);
  if (total == 0) return out;

  const double half = grid.step / 2;
  // cell index of rho, if inside the grid
  auto cell_of = [&](const std::vector<double>& rho) -> std::optional<std::size_t> {
    std::size_t c = 0;
    for (std::size_t a = 0; a < n; ++a) {
      double k = std::round((rho[a] - grid.lo[a]) / grid.step);
      if (k < 0 || k >= static_cast<double>(out.shape[a]) || std::fabs(rho[a] - grid.lo[a] - k * grid.step) >= half)
        return std::nullopt;
      c = c * out.shape[a] + static_cast<std::size_t>(k);
    }
    return c;
  };
  std::vector<std::vector<CriticalPoint>> seeds(total);
  for (auto& p : critical_atlas(system, grid, half))
    if (auto c = cell_of(p.rho); c && seeds[*c].size() < static_cast<std::size_t>(std::max(opt.attempts, 1)))
      seeds[*c].push_back(std::move(p));

  parallel_for(total, [&](std::size_t c) {
    std::vector<double> rho(n);
    std::size_t rest = c;
    for (std::size_t a = n; a-- > 0;) {
      rho[a] = grid.lo[a] + static_cast<double>(rest % out.shape[a]) * grid.step;
      rest /= out.shape[a];
    }
    MembershipOptions cell_opt = opt;
    cell_opt.radius = half;
    detail::CriticalSystem f(system, rho, half);
    int hits = 0;
    for (auto& p : seeds[c]) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(f.unknowns()));
      for (std::size_t j = 0; j < n; ++j) {
        v[static_cast<Eigen::Index>(j)] = p.u[j].real();
        v[static_cast<Eigen::Index>(n + j)] = p.u[j].imag();
        v[static_cast<Eigen::Index>(2 * n + j)] = p.theta[j];
        double q = std::clamp((p.rho[j] - rho[j]) / half, -0.999999, 0.999999);
        v[static_cast<Eigen::Index>(3 * n + j)] = std::atanh(q);
      }
      if (detail::levenberg_marquardt(f, v, opt.tolerance, opt.max_iterations, 40.0)) ++hits;
    }
    cell_opt.attempts = opt.attempts - static_cast<int>(seeds[c].size());
    double score = static_cast<double>(hits) / std::max(opt.attempts, 1);
    if (cell_opt.attempts > 0) {
      auto m = amoeba_membership(system, rho, cell_opt, c);
      score += m.score * cell_opt.attempts / std::max(opt.attempts, 1);
    }
    out.cells[c] = {rho, score > 0.0, score};
  });
  return out;
}

inline void write_csv(std::ostream& os, const AmoebaGrid& grid) {
  const std::size_t n = grid.spec.lo.size();
  for (std::size_t a = 0; a < n; ++a) os << (a ? "," : "") << "rho" << a + 1;
  os << ",member,score\n";
  char buf[64];
  for (auto& c : grid.cells) {
    for (std::size_t a = 0; a < n; ++a) {
      std::snprintf(buf, sizeof buf, "%.6g", c.rho[a]);
      os << (a ? "," : "") << buf;
    }
    std::snprintf(buf, sizeof buf, "%.6g", c.score);
    os << "," << (c.member ? 1 : 0) << "," << buf << "\n";
  }
}

/// Connected components of cells with member == which on a 2-D grid;
/// 8-neighbour connectivity when `diagonal`, else 4-neighbour.
inline std::size_t count_components(const AmoebaGrid& grid, bool which, bool diagonal) {
  if (grid.shape.size() != 2) throw validation_error("amoeba", "component count needs a 2-D grid");
  const std::size_t rows = grid.shape[0], cols = grid.shape[1];
  std::vector<bool> seen(rows * cols, false);
  std::size_t count = 0;
  for (std::size_t s = 0; s < rows * cols; ++s) {
    if (seen[s] || grid.cells[s].member != which) continue;
    ++count;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      std::size_t c = q.front();
      q.pop();
      auto i = static_cast<long>(c / cols), j = static_cast<long>(c % cols);
      for (long di = -1; di <= 1; ++di)
        for (long dj = -1; dj <= 1; ++dj) {
          if ((di == 0 && dj == 0) || (!diagonal && di != 0 && dj != 0)) continue;
          long a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= static_cast<long>(rows) || b >= static_cast<long>(cols)) continue;
          std::size_t k = static_cast<std::size_t>(a) * cols + static_cast<std::size_t>(b);
          if (seen[k] || grid.cells[k].member != which) continue;
          seen[k] = true;
          q.push(k);
        }
    }
  }
  return count;
}

}  // namespace trinom
