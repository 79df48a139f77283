#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "trinom/errors.hpp"

namespace trinom {

/// Lattice summation index k in Z^n_{>=0}.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : k_(n, 0) {}
  MultiIndex(std::initializer_list<std::int64_t> k) : k_(k) { check(); }
  explicit MultiIndex(std::vector<std::int64_t> k) : k_(std::move(k)) { check(); }

  std::size_t size() const noexcept { return k_.size(); }
  std::int64_t operator[](std::size_t i) const { return k_[i]; }
  const std::vector<std::int64_t>& values() const noexcept { return k_; }

  std::int64_t total() const {
    std::int64_t s = 0;
    for (auto v : k_) s += v;
    return s;
  }

  bool is_zero() const { return total() == 0; }

  /// Graded-lex order: by |k|, then lexicographically.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    if (auto c = a.total() <=> b.total(); c != 0) return c;
    return a.k_ <=> b.k_;
  }
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < k_.size(); ++i) s += (i ? "," : "") + std::to_string(k_[i]);
    return s + ")";
  }

 private:
  void check() const {
    for (auto v : k_)
      if (v < 0) throw validation_error("taylor", "multi-index entries must be nonnegative");
  }
  std::vector<std::int64_t> k_;
};

/// All k in Z^n_{>=0} with |k| <= max_degree, in graded-lex order.
inline std::vector<MultiIndex> indices_up_to(std::size_t n, std::int64_t max_degree) {
  std::vector<MultiIndex> out;
  if (max_degree < 0) return out;
  for (std::int64_t deg = 0; deg <= max_degree; ++deg) {
    // Lexicographically increasing compositions of deg into n parts.
    std::vector<std::int64_t> cur(n, 0);
    auto rec = [&](auto&& self, std::size_t pos, std::int64_t left) -> void {
      if (pos + 1 == n) {
        cur[pos] = left;
        out.emplace_back(cur);
        return;
      }
      for (std::int64_t v = 0; v <= left; ++v) {
        cur[pos] = v;
        self(self, pos + 1, left - v);
      }
    };
    if (n == 0) break;
    rec(rec, 0, deg);
  }
  return out;
}

}  // namespace trinom
