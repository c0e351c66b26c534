#pragma once

#include <vector>

#include "gwpf/brackets.hpp"

namespace gwpf {

// One summand of a two-component degeneration, before canonical merging.
// The final expression is sum of coeff * glue(left, right, pairs).
struct SplitTerm {
  Rat coeff;          // z-weight times the odd shuffle sign
  BracketTerm left;   // genus-1 component (E-side, resp. the original X)
  BracketTerm right;  // the other component
  int pairs = 1;      // glued point pairs = length of the splitting partition
};

// [M | eta..]^{h} -> sum_{|mu|=d} z(mu) [M | eta.., mu, mu]^{h-1}, r unchanged.
// Insertions must all be even (1 or w); target genus h >= 1.
ClassExpr degenerate_irreducible(const BracketTerm& t);

// Peels one handle off a genus >= 2 target: triple sum over r-splits r1+r2=r,
// mu in P(d), and subsets I of the identity insertions.  The genus-1 factor
// keeps every w-insertion, every relative profile, the handle-1 odd
// insertions, the I-identities, and the new profile mu; everything else goes
// to the genus-(h-1) factor with odd handles relabelled down by one.  The
// coefficient carries z(mu) and the Koszul sign of the odd split.
std::vector<SplitTerm> separating_terms(const BracketTerm& t);
ClassExpr degenerate_separating(const BracketTerm& t);

// Rational tail off a genus-1 target: the selected insertions (even only) and
// selected relative profiles move to a P^1 tail glued along a new splitting
// profile eta; identity insertions left unselected distribute over both
// sides; sums over eta in P(d) and r-splits.
struct TailMove {
  std::vector<int> ins;       // indices into t.ins, moved to the tail
  std::vector<int> profiles;  // indices into t.profiles, moved to the tail
};
std::vector<SplitTerm> rational_tail_terms(const BracketTerm& t,
                                           const TailMove& mv);
ClassExpr degenerate_rational_tail(const BracketTerm& t, const TailMove& mv);

}  // namespace gwpf
