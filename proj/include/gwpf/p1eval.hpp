#pragma once

#include <vector>

#include "gwpf/brackets.hpp"
#include "gwpf/partitions.hpp"

namespace gwpf {

// zeta(-n) for n >= 0, via Bernoulli numbers.
Rat zeta_neg(long n);

// Shifted, completed power sum of a partition, k >= 1:
//   sum_i [(lam_i - i + 1/2)^k - (-i + 1/2)^k] + (1 - 2^{-k}) zeta(-k).
Rat pbar(long k, const Partition& lam);

// Character table of S_d.  Rows are irreducibles lambda, columns are classes
// mu, both in partition enumeration order.  Entries are exact integers from
// the border-strip recursion; orthogonality is verified at construction.
struct CharacterTable {
  int d = 0;
  std::vector<Partition> parts;
  std::vector<std::vector<Int>> chi;  // chi[lambda][mu]

  Int dim(size_t lambda_idx) const { return chi[lambda_idx].back(); }
  size_t index_of(const Partition& p) const;
};

// Cached per degree; d must be in [1, 8].
const CharacterTable& characters(int d);

// Disconnected Hurwitz number of the sphere with the given branch profiles:
// #{(s_1..s_m) : s_j in class eta_j, s_1...s_m = id} / d!, two ways.
Rat hurwitz_frobenius(int d, const std::vector<Partition>& profiles);
Rat hurwitz_bruteforce(int d, const std::vector<Partition>& profiles);

// r = 0 evaluation of a pure, even-insertion relative bracket over its target
// curve (h = 0 or 1): parity guard, then string/dilaton removal of identity
// descendents (levels 0/1 only), then the character sum
//   sum_lam (dim lam / d!)^{2-2h-m} prod_j chi(eta_j)/z(eta_j)
//           prod_i pbar_{k_i+1}(lam)/(k_i+1)!.
Rat eval_p1_relative(const Bracket& b);   // requires b.h == 0
Rat eval_elliptic_even(const Bracket& b); // requires b.h == 1, oracle use
Rat eval_curve_even(const Bracket& b);    // any target genus (from b.h);
                                          // cross-checks the degenerations

// Numeric value of an expression all of whose atoms expand to genus-zero
// target brackets; glue nodes multiply.
Rat evaluate_expr(const ClassExpr& e);

// Pairing function of a composite payload against one relative profile:
// gamma_v(eta) = eval of [tau~(w)^v | eta]_{r=0} on the sphere.  The closed
// form splits the payload into even/odd psi-levels; the expanded form goes
// through eval_p1_relative term by term.  They agree.
Rat gamma_value(const RefinedDescendent& tilde, long v, const Partition& eta);
Rat gamma_value_expanded(const RefinedDescendent& tilde, long v,
                         const Partition& eta);

// An invertibility certificate for the descendent pairing system of degree d:
// selected exponents v, the matrix mat[i][j] = z(cols[j]) * gamma_{rows[i]}(cols[j]),
// and its (nonzero) determinant.
struct TildeData {
  int d = 0;
  RefinedDescendent tilde;
  std::vector<long> rows;
  std::vector<Partition> cols;
  std::vector<std::vector<Rat>> mat;
  Rat det;
};

// Searches simple candidate payloads (all-ones up to level Q, then a bumped
// last coefficient) and greedily selects v-rows until the pairing matrix has
// full rank |P(d)|.  v_cap < 0 means the default 2|P(d)|.  q_min bounds the
// candidate top level from below; q_min >= 1 guarantees a composite payload,
// which the reducer needs to keep tau~ slots distinguishable from plain taus.
TildeData find_tilde_tau(int d, long q_cap = 6, long v_cap = -1, long q_min = 0);

// Exact determinant (Gaussian elimination) -- shared by certificates.
Rat rat_det(std::vector<std::vector<Rat>> m);

}  // namespace gwpf
