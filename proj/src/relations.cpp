#include "gwpf/relations.hpp"

#include <algorithm>
#include <string>

#include "gwpf/common.hpp"

namespace gwpf {

int SetPartitionSpec::ground_size() const {
  int n = 0;
  for (auto& p : parts) n += static_cast<int>(p.size());
  return n;
}

void SetPartitionSpec::validate() const {
  const int n = ground_size();
  std::vector<char> seen(n, 0);
  for (auto& p : parts) {
    if (p.size() < 2)
      throw input_error("set partition: every part needs size >= 2");
    for (int k : p) {
      if (k < 0 || k >= n)
        throw input_error("set partition: index out of range");
      if (seen[k]) throw input_error("set partition: duplicate index");
      seen[k] = 1;
    }
  }
  // covering follows from the count and the absence of duplicates
}

Relation raw_sl2_relation(const BracketTerm& t, const Mat2& m) {
  t.validate();
  if (t.h != 1)
    throw precondition_error("sl2 relations want a genus-1 target");
  BracketTerm ft = t;
  for (auto& i : ft.ins) i.cls = apply_sl2(m, 1, i.cls);
  Relation rel;
  rel.kind = Relation::Kind::Monodromy;
  rel.expr = refined_canonicalize(ft) + refined_canonicalize(t) * Rat(-1);
  return rel;
}

Relation raw_monodromy_relation(const BracketTerm& t) {
  return raw_sl2_relation(t, kPhi);
}

Relation monodromy_relation(const BracketTerm& N, const DescendentAssignment& n,
                            const DescendentAssignment& m,
                            const std::vector<int>& delta) {
  N.validate();
  if (N.h != 1)
    throw precondition_error("monodromy relations want a genus-1 target");
  for (auto& i : N.ins)
    for (auto& [s, c] : i.cls.c)
      if (s.odd())
        throw precondition_error("monodromy relation: N must be even");
  const int k = static_cast<int>(n.size());
  if (static_cast<int>(m.size()) != k)
    throw precondition_error("monodromy relation: assignments need |I| = |J|");
  std::vector<char> in_delta(k, 0);
  for (int i : delta) {
    if (i < 0 || i >= k) throw input_error("delta index out of range");
    if (in_delta[i]) throw input_error("delta has a duplicate index");
    in_delta[i] = 1;
  }
  if (static_cast<int>(delta.size()) == k)
    throw precondition_error("delta must be a proper subset of I");

  // Slots 0..k-1 are I, slots k..2k-1 are J; D = delta + a choice of
  // k - |delta| further slots.
  std::vector<int> free_slots;
  for (int i = 0; i < 2 * k; ++i)
    if (i >= k || !in_delta[i]) free_slots.push_back(i);
  const int need = k - static_cast<int>(delta.size());

  Relation rel;
  rel.kind = Relation::Kind::Monodromy;
  rel.depends_on_unbalanced_vanishing = true;
  std::vector<char> sel(free_slots.size(), 0);
  std::fill(sel.begin(), sel.begin() + need, 1);
  do {
    std::vector<char> in_d(2 * k, 0);
    for (int i = 0; i < k; ++i) in_d[i] = in_delta[i];
    for (size_t j = 0; j < free_slots.size(); ++j)
      if (sel[j]) in_d[free_slots[j]] = 1;
    BracketTerm t = N;
    for (int i = 0; i < k; ++i)
      t.tau(n[i], in_d[i] ? CohSymbol::alpha(1) : CohSymbol::beta(1));
    for (int j = 0; j < k; ++j)
      t.tau(m[j], in_d[k + j] ? CohSymbol::alpha(1) : CohSymbol::beta(1));
    rel.expr = rel.expr + refined_canonicalize(t);
  } while (std::prev_permutation(sel.begin(), sel.end()));
  return rel;
}

std::vector<std::pair<Rat, BracketTerm>> elliptic_vanishing_terms(
    const BracketTerm& M, const SetPartitionSpec& P,
    const DescendentAssignment& l) {
  M.validate();
  if (M.h != 1)
    throw precondition_error("elliptic vanishing wants a genus-1 target");
  if (!M.profiles.empty())
    throw precondition_error("elliptic vanishing: absolute theory only");
  for (auto& i : M.ins)
    for (auto& [s, c] : i.cls.c)
      if (s.kind != CohKind::One)
        throw precondition_error(
            "elliptic vanishing: M must be an identity monomial");
  P.validate();
  const int n = P.ground_size();
  if (static_cast<int>(l.size()) != n)
    throw input_error("elliptic vanishing: assignment size mismatch");

  // Each part takes its induced order from K.
  std::vector<std::vector<int>> parts = P.parts;
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::vector<TensorExpr> diags;
  diags.reserve(parts.size());
  for (auto& p : parts) diags.push_back(diagonal(static_cast<int>(p.size())));

  std::vector<std::pair<Rat, BracketTerm>> out;
  std::vector<CohSymbol> slot(n);
  auto expand = [&](auto&& self, size_t pi, const Rat& coeff) -> void {
    if (pi == parts.size()) {
      BracketTerm t = M;
      for (int s = 0; s < n; ++s) t.tau(l[s], slot[s]);
      out.emplace_back(coeff, std::move(t));
      return;
    }
    for (auto& [word, c] : diags[pi].words) {
      for (size_t j = 0; j < word.size(); ++j) slot[parts[pi][j]] = word[j];
      self(self, pi + 1, coeff * c);
    }
  };
  expand(expand, 0, Rat(1));
  return out;
}

Relation elliptic_vanishing(const BracketTerm& M, const SetPartitionSpec& P,
                            const DescendentAssignment& l) {
  Relation rel;
  rel.kind = Relation::Kind::Elliptic;
  for (auto& [c, t] : elliptic_vanishing_terms(M, P, l))
    rel.expr = rel.expr + refined_canonicalize(t) * c;
  return rel;
}

}  // namespace gwpf
