#include "gwpf/degeneration.hpp"

#include <string>
#include <utility>

#include "gwpf/common.hpp"
#include "gwpf/partitions.hpp"

namespace gwpf {
namespace {

// Degenerations route insertions by their class symbol; linear-combination
// classes must be expanded by the caller first.
const CohSymbol& only_symbol(const RawInsertion& i) {
  if (i.cls.c.size() != 1)
    throw input_error("degeneration: insertion class is a sum, expand first");
  return i.cls.c.begin()->first;
}

void check_degree(const BracketTerm& t, const char* who) {
  if (t.d < 1) throw input_error(std::string(who) + ": degree must be >= 1");
}

// Side codes for splitting an insertion list in two.
enum : int { kLeft = 0, kRight = 1, kRanged = 2 };

// Koszul sign of pulling the right-bound odd insertions past the left-bound
// ones while keeping the relative order inside each factor.
int shuffle_sign(const BracketTerm& t, const std::vector<int>& side) {
  int flips = 0, odd_right = 0;
  for (size_t i = 0; i < t.ins.size(); ++i) {
    if (!only_symbol(t.ins[i]).odd()) continue;
    if (side[i] == kRight)
      ++odd_right;
    else
      flips += odd_right;
  }
  return flips % 2 ? -1 : 1;
}

RawInsertion relabel_down(const RawInsertion& in) {
  RawInsertion out;
  out.psi = in.psi;
  for (auto& [s, c] : in.cls.c) {
    CohSymbol s2 = s;
    if (s2.odd()) s2.handle -= 1;
    out.cls.add(s2, c);
  }
  return out;
}

ClassExpr assemble(const std::vector<SplitTerm>& terms) {
  ClassExpr out;
  for (auto& st : terms)
    out = out + glue(refined_canonicalize(st.left),
                     refined_canonicalize(st.right), st.pairs) *
                    st.coeff;
  return out;
}

}  // namespace

ClassExpr degenerate_irreducible(const BracketTerm& t) {
  t.validate();
  check_degree(t, "degenerate_irreducible");
  if (t.h < 1)
    throw precondition_error(
        "degenerate_irreducible: target genus must be >= 1");
  for (auto& i : t.ins)
    if (only_symbol(i).odd())
      throw precondition_error("degenerate_irreducible: odd insertion present");
  ClassExpr out;
  for (auto& mu : enumerate_partitions(t.d)) {
    BracketTerm c = t;
    c.h -= 1;
    c.profiles.push_back(mu);
    c.profiles.push_back(mu);
    out = out + refined_canonicalize(c) * Rat(zfactor(mu));
  }
  return out;
}

std::vector<SplitTerm> separating_terms(const BracketTerm& t) {
  t.validate();
  check_degree(t, "degenerate_separating");
  if (t.h < 2)
    throw precondition_error(
        "degenerate_separating: target genus must be >= 2 "
        "(genus 1 takes the rational tail)");

  std::vector<int> side(t.ins.size(), kLeft);
  std::vector<size_t> ranged_pos(t.ins.size(), 0);
  size_t n_ranged = 0;
  for (size_t i = 0; i < t.ins.size(); ++i) {
    const CohSymbol& s = only_symbol(t.ins[i]);
    if (s.kind == CohKind::One) {
      side[i] = kRanged;
      ranged_pos[i] = n_ranged++;
    } else if (s.odd() && s.handle != 1) {
      side[i] = kRight;
    }
  }
  const int sgn = shuffle_sign(t, side) * t.sign;

  std::vector<SplitTerm> out;
  if (t.r < 0) return out;
  const auto parts = enumerate_partitions(t.d);
  for (long r1 = 0; r1 <= t.r; ++r1)
    for (auto& mu : parts)
      for (unsigned long mask = 0; mask < (1ul << n_ranged); ++mask) {
        SplitTerm st;
        st.left = BracketTerm(1, t.d, r1);
        st.right = BracketTerm(t.h - 1, t.d, t.r - r1);
        for (size_t i = 0; i < t.ins.size(); ++i) {
          bool to_left = side[i] == kLeft ||
                         (side[i] == kRanged && (mask >> ranged_pos[i] & 1));
          if (to_left)
            st.left.ins.push_back(t.ins[i]);
          else if (side[i] == kRight)
            st.right.ins.push_back(relabel_down(t.ins[i]));
          else
            st.right.ins.push_back(t.ins[i]);
        }
        st.left.profiles = t.profiles;
        st.left.profiles.push_back(mu);
        st.right.profiles = {mu};
        st.pairs = mu.length();
        st.coeff = Rat(zfactor(mu) * sgn);
        out.push_back(std::move(st));
      }
  return out;
}

ClassExpr degenerate_separating(const BracketTerm& t) {
  return assemble(separating_terms(t));
}

std::vector<SplitTerm> rational_tail_terms(const BracketTerm& t,
                                           const TailMove& mv) {
  t.validate();
  check_degree(t, "degenerate_rational_tail");
  if (t.h != 1)
    throw precondition_error(
        "degenerate_rational_tail: genus-1 target required");

  std::vector<int> side(t.ins.size(), kLeft);
  for (int idx : mv.ins) {
    if (idx < 0 || idx >= static_cast<int>(t.ins.size()))
      throw input_error("rational tail: insertion index out of range");
    if (side[idx] == kRight)
      throw input_error("rational tail: duplicate insertion index");
    if (only_symbol(t.ins[idx]).odd())
      throw precondition_error(
          "rational tail: odd insertions cannot move to the tail");
    side[idx] = kRight;
  }
  std::vector<size_t> ranged_pos(t.ins.size(), 0);
  size_t n_ranged = 0;
  for (size_t i = 0; i < t.ins.size(); ++i)
    if (side[i] == kLeft && only_symbol(t.ins[i]).kind == CohKind::One) {
      side[i] = kRanged;
      ranged_pos[i] = n_ranged++;
    }

  std::vector<char> moved(t.profiles.size(), 0);
  for (int idx : mv.profiles) {
    if (idx < 0 || idx >= static_cast<int>(t.profiles.size()))
      throw input_error("rational tail: profile index out of range");
    if (moved[idx]) throw input_error("rational tail: duplicate profile index");
    moved[idx] = 1;
  }

  std::vector<SplitTerm> out;
  if (t.r < 0) return out;
  const auto parts = enumerate_partitions(t.d);
  for (long r1 = 0; r1 <= t.r; ++r1)
    for (auto& eta : parts)
      for (unsigned long mask = 0; mask < (1ul << n_ranged); ++mask) {
        SplitTerm st;
        st.left = BracketTerm(1, t.d, r1);
        st.right = BracketTerm(0, t.d, t.r - r1);
        for (size_t i = 0; i < t.ins.size(); ++i) {
          bool to_tail = side[i] == kRight ||
                         (side[i] == kRanged && (mask >> ranged_pos[i] & 1));
          (to_tail ? st.right : st.left).ins.push_back(t.ins[i]);
        }
        for (size_t i = 0; i < t.profiles.size(); ++i)
          (moved[i] ? st.right : st.left).profiles.push_back(t.profiles[i]);
        st.left.profiles.push_back(eta);
        st.right.profiles.push_back(eta);
        st.pairs = eta.length();
        st.coeff = Rat(zfactor(eta) * t.sign);
        out.push_back(std::move(st));
      }
  return out;
}

ClassExpr degenerate_rational_tail(const BracketTerm& t, const TailMove& mv) {
  return assemble(rational_tail_terms(t, mv));
}

}  // namespace gwpf
