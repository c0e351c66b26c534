#pragma once

#include <array>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "gwpf/common.hpp"

namespace gwpf {

// Basis symbol of H*(target curve of genus h): 1, omega, alpha_i, beta_i.
// Handle index i is 1-based, 0 for One/Omega.
enum class CohKind : int { One = 0, Omega = 1, Alpha = 2, Beta = 3 };

struct CohSymbol {
  CohKind kind = CohKind::One;
  int handle = 0;

  static CohSymbol one() { return {CohKind::One, 0}; }
  static CohSymbol omega() { return {CohKind::Omega, 0}; }
  static CohSymbol alpha(int i) { return {CohKind::Alpha, i}; }
  static CohSymbol beta(int i) { return {CohKind::Beta, i}; }

  bool odd() const { return kind == CohKind::Alpha || kind == CohKind::Beta; }
  // Complex codimension in half-units: One 0, Omega 2, Alpha/Beta 1.
  int codim2() const {
    switch (kind) {
      case CohKind::One: return 0;
      case CohKind::Omega: return 2;
      default: return 1;
    }
  }
  auto operator<=>(const CohSymbol&) const = default;
  std::string to_string() const;  // "1", "w", "a"/"b" (handle 1), "a2", ...
};

// Sparse rational combination of symbols; zero coefficients absent.
struct CohVector {
  std::map<CohSymbol, Rat> c;

  CohVector() = default;
  explicit CohVector(CohSymbol s) { c[s] = 1; }
  static CohVector zero() { return {}; }

  CohVector& add(CohSymbol s, const Rat& v);
  bool is_zero() const { return c.empty(); }
  CohVector operator+(const CohVector& o) const;
  CohVector operator*(const Rat& k) const;
  bool operator==(const CohVector&) const = default;
  std::string to_string() const;
};

// Cup product on basis symbols, bilinear extension.  a_i.b_i = w, b_i.a_i = -w,
// 1 the unit, odd squares and w.w vanish, cross-handle odd products vanish.
CohVector cup(CohSymbol a, CohSymbol b);
CohVector cup(const CohVector& a, const CohVector& b);

// m (det 1) acting on (alpha_i, beta_i) as a column vector, other symbols fixed.
using Mat2 = std::array<std::array<long, 2>, 2>;
CohVector apply_sl2(const Mat2& m, int handle, const CohVector& v);

// The monodromy transformation: alpha -> alpha, beta -> alpha + beta (handle 1).
CohVector monodromy_phi(const CohVector& v);

// Matrix of the monodromy in column convention (images are the columns).
inline constexpr Mat2 kPhi{{{1, 1}, {0, 1}}};

// Length-r tensor words of genus-1 symbols with rational coefficients.
struct TensorExpr {
  int arity = 0;
  std::map<std::vector<CohSymbol>, Rat> words;

  TensorExpr& add(const std::vector<CohSymbol>& w, const Rat& v);
  size_t term_count() const { return words.size(); }
  std::string to_string() const;
};

// Kuenneth expansion of the small diagonal of a genus-1 curve:
// even part = r words with 1 in one slot, w elsewhere;
// odd part = for each slot pair i<j: -(a_i b_j) + (b_i a_j), w elsewhere.
TensorExpr diagonal(int r);
TensorExpr diagonal_even(int r);
TensorExpr diagonal_odd(int r);

}  // namespace gwpf
