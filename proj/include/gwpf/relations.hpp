#pragma once

#include <utility>
#include <vector>

#include "gwpf/brackets.hpp"
#include "gwpf/cohomology.hpp"

namespace gwpf {

// Ordered refined-descendent assignment on the index set 0..n-1.
using DescendentAssignment = std::vector<RefinedDescendent>;

// Set partition of {0..n-1} into parts of size >= 2.
struct SetPartitionSpec {
  std::vector<std::vector<int>> parts;

  int ground_size() const;
  void validate() const;  // parts disjoint, covering, each of size >= 2
};

// canonical(m.t) - canonical(t), where m acts on every insertion class
// through the handle-1 symplectic representation; genus-1 targets only.
Relation raw_sl2_relation(const BracketTerm& t, const Mat2& m);
Relation raw_monodromy_relation(const BracketTerm& t);

// Sum over the |I|-subsets D of I |_| J containing delta of
// [N prod_i tau_{n_i}(gamma_i^D) prod_j tau_{m_j}(gamma_j^D)] with alpha on
// slots in D and beta elsewhere.  N must be an even monomial, delta a proper
// subset of I, |I| = |J|.  Valid only modulo unbalanced vanishing; the
// returned relation carries that dependency tag.
Relation monodromy_relation(const BracketTerm& N, const DescendentAssignment& n,
                            const DescendentAssignment& m,
                            const std::vector<int>& delta);

// Kuenneth expansion of prod_{p in P} of the genus-1 small diagonal of
// arity |p|, placed into tau-insertions with payloads l after the identity
// monomial M; absolute genus-1 brackets only.  The raw summands keep the
// expansion coefficients separate from canonical merging; the Relation is the
// merged sum, equal to zero.
std::vector<std::pair<Rat, BracketTerm>> elliptic_vanishing_terms(
    const BracketTerm& M, const SetPartitionSpec& P,
    const DescendentAssignment& l);
Relation elliptic_vanishing(const BracketTerm& M, const SetPartitionSpec& P,
                            const DescendentAssignment& l);

}  // namespace gwpf
