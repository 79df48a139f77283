#pragma once

// Mellin-Barnes integral for y^d(x) when omega is diagonal:
//
//   (2 pi i)^{-n} int prod_j Gamma(z_j) Gamma(l_{n+j}(z)) / Gamma(l_{n+j}(z) + z_j + 1)
//                 * Q(z) x^{-z} dz,     l_{n+j}(z) = d_j/w_j - <sigma_j, z>/w_j,
//
// and its evaluation as a sum of local residues at intersection points of
// user-designated polar families inside a simplicial cone.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "trinom/errors.hpp"
#include "trinom/gamma.hpp"
#include "trinom/intlinalg.hpp"
#include "trinom/multi_index.hpp"
#include "trinom/parallel.hpp"
#include "trinom/puiseux.hpp"
#include "trinom/rational.hpp"
#include "trinom/systems.hpp"

namespace trinom {

/// constant + <linear, z>
struct AffineForm {
  Rational constant;
  RationalVector linear;

  Rational operator()(const RationalVector& z) const {
    Rational s = constant;
    for (std::size_t i = 0; i < z.size(); ++i) s += linear[i] * z[i];
    return s;
  }

  Complex operator()(const ComplexVector& z) const {
    Complex s = to_double(constant);
    for (std::size_t i = 0; i < z.size(); ++i) s += to_double(linear[i]) * z[i];
    return s;
  }
};

/// true iff every leading principal minor of sigma is positive
inline bool convergence_nonempty(const IntegerMatrix& sigma) {
  for (std::size_t m = 1; m <= sigma.size(); ++m) {
    IntegerMatrix sub(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) sub(i, j) = sigma(i, j);
    if (determinant(sub) <= 0) return false;
  }
  return true;
}

/// (1/det omega) det[ delta_ij (d_j - <sigma_j, z>) + sigma_j^(i) z_i ]
template <class Scalar>
Scalar q_polynomial(const TrinomialSystem& system, const RationalVector& d, const std::vector<Scalar>& z) {
  const std::size_t n = system.n();
  if (!system.omega().is_diagonal()) throw validation_error("mellinbarnes", "omega must be diagonal");
  if (d.size() != n || z.size() != n) throw validation_error("mellinbarnes", "dimension mismatch");
  auto conv = [](const Rational& r) {
    if constexpr (std::is_same_v<Scalar, Rational>)
      return r;
    else
      return Scalar(to_double(r));
  };
  std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t j = 0; j < n; ++j) {
    Scalar sz = Scalar(0);
    for (std::size_t r = 0; r < n; ++r) sz += conv(Rational(system.sigma()(r, j))) * z[r];
    m[j][j] += conv(d[j]) - sz;
    for (std::size_t i = 0; i < n; ++i) m[i][j] += conv(Rational(system.sigma()(i, j))) * z[i];
  }
  // Gaussian elimination with nonzero pivots
  Scalar det = Scalar(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    if constexpr (std::is_same_v<Scalar, Rational>) {
      while (p < n && m[p][c] == 0) ++p;
    } else {
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    }
    if (p == n || m[p][c] == Scalar(0)) return Scalar(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Scalar f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  Rational w = 1;
  for (std::size_t j = 0; j < n; ++j) w *= Rational(system.omega()(j, j));
  return det / conv(w);
}

struct MBIntegralData {
  TrinomialSystem system;
  RationalVector d;
  RationalVector gamma;                  // real part of the integration subspace
  std::vector<AffineForm> families;      // 2n numerator arguments, pole when = -nu
  std::vector<AffineForm> denominators;  // n denominator arguments

  std::size_t n() const { return system.n(); }

  /// u > 0 and <sigma_j, u> < d_j
  bool in_u_polytope(const RationalVector& u) const {
    for (std::size_t i = 0; i < n(); ++i)
      if (u[i] <= 0) return false;
    for (std::size_t j = 0; j < n(); ++j) {
      Rational s = 0;
      for (std::size_t r = 0; r < n(); ++r) s += Rational(system.sigma()(r, j)) * u[r];
      if (s >= d[j]) return false;
    }
    return true;
  }

  Rational q(const RationalVector& z) const { return q_polynomial(system, d, z); }

  /// Sum over numerator gammas minus sum over denominator gammas of the
  /// coefficient of each z_i; all zero for a non-confluent integrand.
  RationalVector confluence_defect() const {
    RationalVector s(n(), Rational(0));
    for (auto& f : families)
      for (std::size_t i = 0; i < n(); ++i) s[i] += f.linear[i];
    for (auto& f : denominators)
      for (std::size_t i = 0; i < n(); ++i) s[i] -= f.linear[i];
    return s;
  }

  bool non_confluent() const {
    auto s = confluence_defect();
    return std::all_of(s.begin(), s.end(), [](const Rational& v) { return v == 0; });
  }

  static MBIntegralData build(const TrinomialSystem& system, const RationalVector& d,
                              std::optional<RationalVector> gamma = std::nullopt) {
    const std::size_t n = system.n();
    if (!system.omega().is_diagonal()) throw validation_error("mellinbarnes", "omega must be diagonal");
    if (d.size() != n) throw validation_error("mellinbarnes", "d has wrong dimension");
    MBIntegralData data{system, d, {}, {}, {}};
    for (std::size_t j = 0; j < n; ++j) {
      RationalVector e(n, Rational(0));
      e[j] = 1;
      data.families.push_back({Rational(0), e});
    }
    for (std::size_t j = 0; j < n; ++j) {
      Rational w = Rational(system.omega()(j, j));
      RationalVector lin(n);
      for (std::size_t r = 0; r < n; ++r) lin[r] = -Rational(system.sigma()(r, j)) / w;
      data.families.push_back({d[j] / w, lin});
      AffineForm den{d[j] / w + 1, lin};
      den.linear[j] += 1;
      data.denominators.push_back(den);
    }
    if (gamma) {
      if (gamma->size() != n) throw validation_error("mellinbarnes", "gamma has wrong dimension");
      data.gamma = *gamma;
    } else {
      // gamma = t (1,...,1) halfway to the nearest facet <sigma_j, u> = d_j
      std::optional<Rational> t;
      for (std::size_t j = 0; j < n; ++j) {
        Rational col = 0;
        for (std::size_t r = 0; r < n; ++r) col += Rational(system.sigma()(r, j));
        Rational c = d[j] / col;
        if (!t || c < *t) t = c;
      }
      data.gamma.assign(n, *t / 2);
    }
    if (!data.in_u_polytope(data.gamma))
      throw validation_error("mellinbarnes", "gamma is not in the interior of the convergence polytope");
    return data;
  }
};

/// Groups of polar families (0-based: family j < n is z_j, family n+j the
/// j-th linear argument). Families outside every group are not designated.
struct DivisorPairing {
  std::vector<std::vector<std::size_t>> groups;

  /// "3,4|1,2" with 1-based family indices.
  static DivisorPairing parse(std::string_view text, std::size_t n) {
    DivisorPairing p;
    std::set<std::size_t> seen;
    std::string s(text);
    std::stringstream groups(s);
    std::string group;
    while (std::getline(groups, group, '|')) {
      std::vector<std::size_t> g;
      std::stringstream items(group);
      std::string item;
      while (std::getline(items, item, ',')) {
        auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw DegeneratePairing("empty family index in '" + s + "'");
        std::string tok = item.substr(b, e - b + 1);
        std::size_t pos = 0;
        long v = 0;
        try {
          v = std::stol(tok, &pos);
        } catch (const std::exception&) {
          throw DegeneratePairing("bad family index '" + tok + "'");
        }
        if (pos != tok.size() || v < 1 || static_cast<std::size_t>(v) > 2 * n)
          throw DegeneratePairing("family index '" + tok + "' not in 1.." + std::to_string(2 * n));
        if (!seen.insert(static_cast<std::size_t>(v)).second)
          throw DegeneratePairing("family " + tok + " listed twice");
        g.push_back(static_cast<std::size_t>(v - 1));
      }
      if (g.empty()) throw DegeneratePairing("empty divisor group in '" + s + "'");
      p.groups.push_back(std::move(g));
    }
    if (p.groups.size() != n)
      throw DegeneratePairing("need " + std::to_string(n) + " divisor groups, got " + std::to_string(p.groups.size()));
    return p;
  }

  std::string str() const {
    std::string out;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (g) out += "|";
      for (std::size_t i = 0; i < groups[g].size(); ++i) out += (i ? "," : "") + std::to_string(groups[g][i] + 1);
    }
    return out;
  }
};

/// Open simplicial cone apex + sum t_i rays_i, t_i > 0.
struct ResidueCone {
  RationalVector apex;
  std::vector<RationalVector> rays;

  ResidueCone(RationalVector apex_, std::vector<RationalVector> rays_)
      : apex(std::move(apex_)), rays(std::move(rays_)) {
    const std::size_t n = apex.size();
    if (rays.size() != n) throw validation_error("mellinbarnes", "cone needs exactly n rays");
    for (auto& r : rays)
      if (r.size() != n) throw validation_error("mellinbarnes", "ray has wrong dimension");
    if (determinant(RationalMatrix::from_columns(rays)) == 0)
      throw validation_error("mellinbarnes", "cone rays are linearly dependent");
  }

  /// Coordinates t with z - apex = sum t_i rays_i.
  RationalVector coordinates(const RationalVector& z) const {
    RationalVector diff(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) diff[i] = z[i] - apex[i];
    return solve(RationalMatrix::from_columns(rays), diff);
  }

  bool contains(const RationalVector& z) const {
    auto t = coordinates(z);
    return std::all_of(t.begin(), t.end(), [](const Rational& v) { return v > 0; });
  }
};

/// One enumerated intersection point: designated families (0-based, one per
/// group), their pole indices nu, and the exact point z.
struct ResiduePoint {
  std::vector<std::size_t> families;
  MultiIndex nu;
  RationalVector z;
};

struct ResidueTerm {
  ResiduePoint point;
  Complex coefficient;
  std::optional<Rational> exact;
  RationalVector exponent;  // x^{exponent} = x^{-z}
};

namespace detail {

inline std::string point_text(const ResiduePoint& p) {
  std::string s = "z=(";
  for (std::size_t i = 0; i < p.z.size(); ++i) s += (i ? "," : "") + to_string(p.z[i]);
  s += ") on L";
  for (std::size_t i = 0; i < p.families.size(); ++i) s += (i ? ",L" : "") + std::to_string(p.families[i] + 1);
  return s;
}

struct LocalResidue {
  std::optional<Rational> exact;
  double value = 0.0;
  std::string failure;  // empty on success
};

// Residue coefficient at p without the factor x^{-z}. Each denominator
// Gamma(l_{n+j} + z_j + 1) is paired with whichever of Gamma(z_j),
// Gamma(l_{n+j}) is not designated; a numerator pole must meet a denominator
// pole whose argument differs by a constant along the designated partner.
inline LocalResidue local_residue(const MBIntegralData& data, const ResiduePoint& p) {
  const std::size_t n = data.n();
  LocalResidue out;
  std::vector<bool> designated(2 * n, false);
  for (auto f : p.families) designated[f] = true;
  auto partner = [&](std::size_t f) { return f < n ? f + n : f - n; };

  RationalMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = data.families[p.families[i]].linear[j];
  Rational jac = determinant(a);
  if (jac < 0) jac = -jac;

  Rational exact = 1;
  for (std::size_t i = 0; i < n; ++i) {
    exact /= Rational(factorial(p.nu[i]));
    if (p.nu[i] % 2) exact = -exact;
  }
  exact /= jac;
  exact *= data.q(p.z);
  bool is_exact = true;
  double floating = 1.0;

  std::vector<bool> used(2 * n, false);
  for (auto f : p.families) used[f] = true;
  std::vector<bool> den_used(n, false);

  for (std::size_t j = 0; j < n; ++j) {
    Rational b = data.denominators[j](p.z);
    std::optional<std::size_t> num;
    for (std::size_t f : {j, n + j})
      if (!used[f] && !num && is_integer(data.families[f](p.z) - b)) num = f;
    if (!num) continue;
    used[*num] = true;
    den_used[j] = true;
    Rational av = data.families[*num](p.z);
    bool pa = is_nonpositive_integer(av), pb = is_nonpositive_integer(b);
    if (pa && !pb) {
      out.failure = "Gamma(" + to_string(av) + ") of L" + std::to_string(*num + 1) + " is not cancelled";
      return out;
    }
    if (pa && !designated[partner(*num)]) {
      out.failure = "cancellation of L" + std::to_string(*num + 1) + " depends on the direction";
      return out;
    }
    exact *= *gamma_ratio(av, b).exact;
  }
  for (std::size_t f = 0; f < 2 * n; ++f) {
    if (used[f]) continue;
    Rational av = data.families[f](p.z);
    if (is_nonpositive_integer(av)) {
      out.failure = "Gamma(" + to_string(av) + ") of L" + std::to_string(f + 1) + " is not cancelled";
      return out;
    }
    is_exact = false;
    floating *= std::tgamma(to_double(av));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (den_used[j]) continue;
    Rational b = data.denominators[j](p.z);
    if (is_nonpositive_integer(b)) {
      exact = 0;
      continue;
    }
    is_exact = false;
    floating /= std::tgamma(to_double(b));
  }
  if (exact == 0) is_exact = true;
  if (is_exact) {
    out.exact = exact;
    out.value = to_double(exact);
  } else {
    out.value = to_double(exact) * floating;
  }
  return out;
}

// z with l_f(z) = -nu_i for the designated families, or nullopt if singular.
inline std::optional<RationalVector> intersection(const MBIntegralData& data, const std::vector<std::size_t>& fam,
                                                  const MultiIndex& nu) {
  const std::size_t n = data.n();
  RationalMatrix a(n);
  RationalVector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = data.families[fam[i]].linear[j];
    rhs[i] = -Rational(nu[i]) - data.families[fam[i]].constant;
  }
  if (determinant(a) == 0) return std::nullopt;
  return solve(a, rhs);
}

inline std::vector<std::vector<std::size_t>> transversals(const DivisorPairing& pairing) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (auto& g : pairing.groups) {
    std::vector<std::vector<std::size_t>> next;
    for (auto& t : out)
      for (auto f : g) {
        auto u = t;
        u.push_back(f);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

/// Intersection points of designated families (one from each group) inside
/// the open cone with pole indices |nu| <= bound, ordered graded-lex in nu.
/// A point reached by several transversals is listed once, under the first
/// transversal at which the remaining gamma factors have simple behaviour;
/// the bound applies to that transversal's indices.
inline std::vector<ResiduePoint> residue_lattice(const MBIntegralData& data, const DivisorPairing& pairing,
                                                 const ResidueCone& cone, std::int64_t bound) {
  const std::size_t n = data.n();
  if (pairing.groups.size() != n) throw DegeneratePairing("pairing must have n groups");
  if (cone.apex.size() != n) throw validation_error("mellinbarnes", "cone has wrong dimension");
  for (auto& g : pairing.groups)
    for (auto f : g)
      if (f >= 2 * n) throw DegeneratePairing("family index out of range");
  auto trans = detail::transversals(pairing);
  std::vector<std::vector<std::size_t>> usable;
  for (auto& t : trans) {
    RationalMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = data.families[t[i]].linear[j];
    if (determinant(a) != 0) usable.push_back(t);
  }
  if (usable.empty()) throw DegeneratePairing("designated families never meet in isolated points");

  // Every transversal through z, with its pole indices.
  auto through = [&](const RationalVector& z) {
    std::vector<ResiduePoint> cands;
    for (auto& t : usable) {
      std::vector<std::int64_t> nu;
      for (auto f : t) {
        Rational v = data.families[f](z);
        if (!is_nonpositive_integer(v)) break;
        nu.push_back(static_cast<std::int64_t>(-numerator(v)));
      }
      if (nu.size() == n) cands.push_back({t, MultiIndex(nu), z});
    }
    return cands;
  };

  std::vector<ResiduePoint> out;
  std::set<RationalVector> seen;
  for (const auto& nu : indices_up_to(n, bound)) {
    for (auto& t : usable) {
      auto z = detail::intersection(data, t, nu);
      if (!z || !cone.contains(*z) || !seen.insert(*z).second) continue;
      auto cands = through(*z);
      ResiduePoint chosen = cands.front();
      for (auto& c : cands)
        if (detail::local_residue(data, c).failure.empty()) {
          chosen = c;
          break;
        }
      if (chosen.nu.total() <= bound) out.push_back(std::move(chosen));
    }
  }
  // Graded-lex in nu of the listed transversal; ties by family list.
  std::stable_sort(out.begin(), out.end(), [](const ResiduePoint& a, const ResiduePoint& b) {
    if (a.nu != b.nu) return a.nu < b.nu;
    return a.families < b.families;
  });
  return out;
}

/// Residue coefficients at every lattice point; NonSimplePole if a point
/// carries an uncancelled extra pole.
inline std::vector<ResidueTerm> residue_terms(const MBIntegralData& data, const DivisorPairing& pairing,
                                              const ResidueCone& cone, std::int64_t bound) {
  auto points = residue_lattice(data, pairing, cone, bound);
  std::vector<ResidueTerm> out(points.size());
  std::vector<std::string> failures(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    auto r = detail::local_residue(data, points[i]);
    failures[i] = r.failure;
    RationalVector e(points[i].z.size());
    for (std::size_t j = 0; j < e.size(); ++j) e[j] = -points[i].z[j];
    out[i] = ResidueTerm{points[i], Complex(r.value), r.exact, e};
  });
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!failures[i].empty()) throw NonSimplePole(detail::point_text(points[i]) + ": " + failures[i]);
  return out;
}

/// Sum of residue_terms weighted by principal-branch x^{-z}, in lattice order.
inline Complex residue_sum(const MBIntegralData& data, const DivisorPairing& pairing, const ResidueCone& cone,
                           const ComplexVector& x, std::int64_t bound) {
  detail::require_nonzero(x, data.n());
  Complex s = 0.0;
  for (auto& t : residue_terms(data, pairing, cone, bound)) {
    if (t.coefficient == Complex(0.0)) continue;
    s += t.coefficient * principal_monomial(x, t.exponent);
  }
  return s;
}

/// The sectorial domain of the two-equation example: |t1|, |t2| < pi/2,
/// |2 t2 - t1| < 3pi/4, |t2 - 2 t1| < 3pi/4.
inline bool example_sector_contains(double theta1, double theta2) {
  const double pi = std::numbers::pi;
  return std::fabs(theta1) < pi / 2 && std::fabs(theta2) < pi / 2 && std::fabs(2 * theta2 - theta1) < 3 * pi / 4 &&
         std::fabs(theta2 - 2 * theta1) < 3 * pi / 4;
}

/// Vertices of the octagon bounding that domain, counter-clockwise.
inline std::vector<std::pair<double, double>> example_sector_vertices() {
  const double q = std::numbers::pi / 4;
  return {{2 * q, 2 * q},  {q, 2 * q},   {-q, q},      {-2 * q, -q},
          {-2 * q, -2 * q}, {-q, -2 * q}, {q, -q},      {2 * q, q}};
}

}  // namespace trinom
