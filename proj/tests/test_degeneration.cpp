#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "gwpf/brackets.hpp"
#include "gwpf/common.hpp"
#include "gwpf/degeneration.hpp"
#include "gwpf/p1eval.hpp"
#include "gwpf/partitions.hpp"

using namespace gwpf;

static CohSymbol A1 = CohSymbol::alpha(1);
static CohSymbol B1 = CohSymbol::beta(1);
static CohSymbol A2 = CohSymbol::alpha(2);
static CohSymbol B2 = CohSymbol::beta(2);
static CohSymbol W = CohSymbol::omega();
static CohSymbol U = CohSymbol::one();

// Pure single-symbol terms convert directly into canonical brackets.
static Bracket as_bracket(const BracketTerm& t) {
  Bracket b;
  b.h = t.h;
  b.d = t.d;
  b.r = t.r;
  b.profiles = t.profiles;
  for (auto& i : t.ins) {
    REQUIRE(i.psi.is_pure());
    REQUIRE(i.cls.c.size() == 1);
    REQUIRE(i.cls.c.begin()->second == Rat(1));
    b.ins.push_back({i.psi, i.cls.c.begin()->first});
  }
  return b;
}

static Rat split_value(const std::vector<SplitTerm>& v) {
  Rat s = 0;
  for (auto& st : v)
    s += st.coeff * eval_curve_even(as_bracket(st.left)) *
         eval_curve_even(as_bracket(st.right));
  return s;
}

static int total_length(const std::vector<Partition>& ps) {
  int n = 0;
  for (auto& p : ps) n += p.length();
  return n;
}

TEST_CASE("irreducible node: degree-one collapse") {
  // [tau_0(w) | (1)]_{r=1} on h=1: parent genus 2.
  BracketTerm t(1, 1, 1);
  t.tau(0, W).rel(Partition({1}));
  REQUIRE(genus_of(t).g == 2);

  auto e = degenerate_irreducible(t);
  REQUIRE(e.size() == 1);
  auto& [atom, coeff] = *e.t.begin();
  CHECK(coeff == Rat(1));
  REQUIRE(atom->is_bracket());
  CHECK(atom->br->h == 0);
  CHECK(atom->br->r == 1);
  CHECK(atom->br->profiles.size() == 3);
  CHECK(genus_of(*atom->br).g == 1);  // dropped by l(mu) = 1
}

TEST_CASE("irreducible node: degree-two z-weights") {
  // [ ]_{r=2} on h=1, d=2 -> 2*[ |(2),(2)] + 2*[ |(1,1),(1,1)] on h=0.
  BracketTerm t(1, 2, 2);
  REQUIRE(genus_of(t).g == 2);

  auto e = degenerate_irreducible(t);
  REQUIRE(e.size() == 2);
  for (auto& [atom, coeff] : e.t) {
    CHECK(coeff == Rat(2));
    REQUIRE(atom->is_bracket());
    CHECK(atom->br->h == 0);
    CHECK(atom->br->profiles.size() == 2);
    CHECK(atom->br->profiles[0] == atom->br->profiles[1]);
    int lmu = atom->br->profiles[0].length();
    CHECK(genus_of(*atom->br).g == 2 - lmu);
  }
}

TEST_CASE("irreducible node: preconditions") {
  BracketTerm odd(1, 1, 0);
  odd.tau(0, A1);
  CHECK_THROWS_AS(degenerate_irreducible(odd), precondition_error);

  BracketTerm sphere(0, 1, 0);
  sphere.tau(0, W);
  CHECK_THROWS_AS(degenerate_irreducible(sphere), precondition_error);

  BracketTerm zero_deg(1, 0, 0);
  CHECK_THROWS_AS(degenerate_irreducible(zero_deg), input_error);

  BracketTerm summed(1, 1, 0);
  summed.tau(RefinedDescendent::pure(0), CohVector(U) + CohVector(W));
  CHECK_THROWS_AS(degenerate_irreducible(summed), input_error);
}

TEST_CASE("irreducible node: genus drop matches the glued-pair count") {
  for (int d = 1; d <= 3; ++d)
    for (int h = 1; h <= 2; ++h)
      for (int npro = 0; npro <= 1; ++npro)
        for (int k = 0; k <= 2; ++k) {
          BracketTerm t(h, d, 0);
          t.tau(k, W);
          if (npro) t.rel(Partition(std::vector<int>(d, 1)));
          // probe for an integral parent dimension
          while (t.r <= 3 && genus_of(t).half) ++t.r;
          if (genus_of(t).half) continue;
          long g = genus_of(t).g;
          auto e = degenerate_irreducible(t);
          for (auto& [atom, coeff] : e.t) {
            REQUIRE(atom->is_bracket());
            int lmu =
                (total_length(atom->br->profiles) - total_length(t.profiles)) /
                2;
            CHECK(genus_of(*atom->br).g == g - lmu);
            CHECK(atom->br->r == t.r);
            CHECK(atom->br->h == h - 1);
          }
        }
}

TEST_CASE("irreducible node: r=0 values survive the rewrite") {
  // Direct genus-one evaluation against the degenerate image on the sphere.
  struct Case {
    int d;
    std::vector<std::pair<int, CohSymbol>> ins;
    std::vector<Partition> pro;
  };
  std::vector<Case> cases = {
      {1, {{1, W}}, {}},
      {1, {{0, U}, {1, W}}, {}},
      {2, {{1, W}, {1, W}}, {}},
      {2, {{0, W}, {0, W}}, {}},
      {2, {{1, U}, {0, W}}, {}},
      {2, {{3, W}}, {Partition({2})}},
      {3, {{1, W}}, {Partition({3})}},
      {3, {{0, W}, {1, W}}, {Partition({2, 1})}},
  };
  int live = 0;
  for (auto& c : cases) {
    BracketTerm t(1, c.d, 0);
    for (auto& [k, s] : c.ins) t.tau(k, s);
    for (auto& p : c.pro) t.rel(p);
    Rat direct = eval_elliptic_even(as_bracket(t));
    Rat degen = evaluate_expr(degenerate_irreducible(t));
    CHECK(direct == degen);
    if (direct != Rat(0)) ++live;
  }
  CHECK(live >= 3);  // the agreement is not vacuous
}

TEST_CASE("separating node: degree-one collapse to a single summand") {
  // h=2, d=1, r=0, no identity insertions: the three sums all collapse.
  BracketTerm t(2, 1, 0);
  t.tau(0, A1).tau(0, B2);
  auto v = separating_terms(t);
  REQUIRE(v.size() == 1);
  auto& st = v[0];
  CHECK(st.coeff == Rat(1));
  CHECK(st.pairs == 1);
  CHECK(st.left.h == 1);
  CHECK(st.right.h == 1);
  CHECK(st.left.r == 0);
  CHECK(st.right.r == 0);
  REQUIRE(st.left.ins.size() == 1);
  CHECK(st.left.ins[0].cls.c.begin()->first == A1);
  REQUIRE(st.right.ins.size() == 1);
  CHECK(st.right.ins[0].cls.c.begin()->first == B1);  // relabelled down
  REQUIRE(st.left.profiles.size() == 1);
  CHECK(st.left.profiles[0] == Partition({1}));
  CHECK(st.right.profiles == std::vector<Partition>{Partition({1})});
}

TEST_CASE("separating node: summand count |r-splits| * |P(d)| * 2^|H|") {
  BracketTerm t(2, 2, 1);
  t.tau(1, U).tau(2, U);
  CHECK(separating_terms(t).size() == 16);  // 2 * 2 * 4

  BracketTerm s(2, 2, 0);
  s.tau(1, W);
  CHECK(separating_terms(s).size() == 2);  // 1 * 2 * 1
}

TEST_CASE("separating node: odd split carries the shuffle sign") {
  BracketTerm ab(2, 1, 2);
  ab.tau(0, A1).tau(0, B2);
  BracketTerm ba(2, 1, 2);
  ba.tau(0, B2).tau(0, A1);

  auto va = separating_terms(ab);
  auto vb = separating_terms(ba);
  REQUIRE(va.size() == vb.size());
  for (size_t i = 0; i < va.size(); ++i) {
    CHECK(va[i].coeff == -vb[i].coeff);
    CHECK(as_bracket(va[i].left) == as_bracket(vb[i].left));
    CHECK(as_bracket(va[i].right) == as_bracket(vb[i].right));
  }
  // Rewrites commute with the signed identification of the parents.
  CHECK(degenerate_separating(ab) == degenerate_separating(ba) * Rat(-1));
}

TEST_CASE("separating node: interleaved odd pairs keep sign coherence") {
  // [a1 b1 a2 b2] and [a2 a1 b2 b1] differ by an odd permutation.
  BracketTerm t1(2, 1, 0);
  t1.tau(0, A1).tau(0, B1).tau(0, A2).tau(0, B2);
  BracketTerm t2(2, 1, 0);
  t2.tau(0, A2).tau(0, A1).tau(0, B2).tau(0, B1);

  auto v1 = separating_terms(t1);
  auto v2 = separating_terms(t2);
  REQUIRE(v1.size() == 1);
  REQUIRE(v2.size() == 1);
  CHECK(v1[0].coeff == Rat(1));
  CHECK(v2[0].coeff == Rat(-1));
  CHECK(as_bracket(v1[0].left) == as_bracket(v2[0].left));
  CHECK(as_bracket(v1[0].right) == as_bracket(v2[0].right));
}

TEST_CASE("separating node: genus bookkeeping g = g1 + g2 + l(mu) - 1") {
  std::vector<BracketTerm> parents;
  {
    BracketTerm t(2, 1, 0);
    parents.push_back(t);
    t.tau(1, W);
    parents.push_back(t);
  }
  {
    BracketTerm t(2, 2, 0);
    t.rel(Partition({2}));
    parents.push_back(t);
    t.tau(0, A1).tau(0, B1);
    parents.push_back(t);
  }
  {
    BracketTerm t(3, 2, 1);
    t.tau(0, U).tau(1, W).tau(0, A2).tau(0, CohSymbol::beta(3));
    parents.push_back(t);
  }
  for (auto& t0 : parents)
    for (long r = 0; r <= 3; ++r) {
      BracketTerm t = t0;
      t.r = r;
      if (genus_of(t).half) continue;
      long g = genus_of(t).g;
      for (auto& st : separating_terms(t)) {
        auto gl = genus_of(st.left), gr = genus_of(st.right);
        CHECK(gl.half == gr.half);
        if (!gl.half) CHECK(g == gl.g + gr.g + st.pairs - 1);
      }
    }
}

TEST_CASE("separating node: r=0 values survive the rewrite") {
  struct Case {
    int d;
    std::vector<std::pair<int, CohSymbol>> ins;
    std::vector<Partition> pro;
  };
  std::vector<Case> cases = {
      {1, {}, {}},
      {1, {{0, U}, {1, W}}, {}},
      {2, {{1, W}}, {}},
      {2, {{0, W}, {0, W}}, {}},
      {2, {{0, W}}, {Partition({2})}},
      {3, {{1, W}, {1, W}}, {}},
  };
  int live = 0;
  for (auto& c : cases) {
    BracketTerm t(2, c.d, 0);
    for (auto& [k, s] : c.ins) t.tau(k, s);
    for (auto& p : c.pro) t.rel(p);
    Rat direct = eval_curve_even(as_bracket(t));
    Rat degen = split_value(separating_terms(t));
    CHECK(direct == degen);
    if (direct != Rat(0)) ++live;
  }
  CHECK(live >= 2);
}

TEST_CASE("rational tail: moving nothing composes back through the tube") {
  BracketTerm t(1, 2, 0);
  t.tau(1, W).tau(1, W);
  auto v = rational_tail_terms(t, {});
  REQUIRE(v.size() == 2);  // one per eta in P(2)
  for (auto& st : v) {
    CHECK(st.left.h == 1);
    CHECK(st.right.h == 0);
    CHECK(st.right.ins.empty());
    REQUIRE(st.right.profiles.size() == 1);
    CHECK(st.pairs == st.right.profiles[0].length());
    CHECK(st.coeff == Rat(zfactor(st.right.profiles[0])));
  }
  CHECK(eval_elliptic_even(as_bracket(t)) == Rat(2));
  CHECK(split_value(v) == Rat(2));
}

TEST_CASE("rational tail: identity insertions range over both sides") {
  BracketTerm t(1, 1, 0);
  t.tau(0, U).tau(1, W);
  auto v = rational_tail_terms(t, {});
  REQUIRE(v.size() == 2);  // P(1) x identity distribution
  CHECK(eval_elliptic_even(as_bracket(t)) == Rat(23) / 24);
  CHECK(split_value(v) == Rat(23) / 24);
}

TEST_CASE("rational tail: moved selections land on the sphere factor") {
  // [t{0:1,1:1}(w) t{0:1,1:1}(w) tau_0(a) tau_0(b)]_{r=2, d=2}
  RefinedDescendent tilde;
  tilde.add(0, 1).add(1, 1);
  BracketTerm t(1, 2, 2);
  t.tau(tilde, W).tau(tilde, W).tau(0, A1).tau(0, B1);
  TailMove mv;
  mv.ins = {0, 1};
  auto v = rational_tail_terms(t, mv);
  REQUIRE(v.size() == 6);  // 3 r-splits x P(2)
  for (auto& st : v) {
    REQUIRE(st.right.ins.size() == 2);
    CHECK(st.right.ins[0].psi == tilde);
    CHECK(st.right.ins[0].cls.c.begin()->first == W);
    REQUIRE(st.left.ins.size() == 2);
    CHECK(st.left.ins[0].cls.c.begin()->first == A1);
    CHECK(st.left.r + st.right.r == 2);
  }
}

TEST_CASE("rational tail: r=0 values survive even-sized moves") {
  // Move both w-insertions.
  BracketTerm t(1, 2, 0);
  t.tau(1, W).tau(1, W);
  TailMove both;
  both.ins = {0, 1};
  CHECK(split_value(rational_tail_terms(t, both)) == Rat(2));

  // Move the relative profile instead.
  BracketTerm s(1, 2, 0);
  s.tau(1, W).tau(1, W).rel(Partition({1, 1}));
  REQUIRE(eval_elliptic_even(as_bracket(s)) == Rat(2));
  TailMove pro;
  pro.profiles = {0};
  CHECK(split_value(rational_tail_terms(s, pro)) == Rat(2));

  // Degree three, mixed move.
  BracketTerm u(1, 3, 0);
  u.tau(0, W).tau(0, W).tau(1, W).tau(1, W);
  if (!genus_of(u).half) {
    TailMove mix;
    mix.ins = {0, 2};
    CHECK(eval_elliptic_even(as_bracket(u)) ==
          split_value(rational_tail_terms(u, mix)));
  }
}

TEST_CASE("rational tail: error taxonomy") {
  BracketTerm t(1, 1, 0);
  t.tau(0, A1).tau(0, W);

  BracketTerm wrong_genus(0, 1, 0);
  CHECK_THROWS_AS(degenerate_rational_tail(wrong_genus, {}),
                  precondition_error);

  TailMove oob;
  oob.ins = {7};
  CHECK_THROWS_AS(rational_tail_terms(t, oob), input_error);

  TailMove dup;
  dup.ins = {1, 1};
  CHECK_THROWS_AS(rational_tail_terms(t, dup), input_error);

  TailMove odd_move;
  odd_move.ins = {0};
  CHECK_THROWS_AS(rational_tail_terms(t, odd_move), precondition_error);

  TailMove bad_profile;
  bad_profile.profiles = {0};
  CHECK_THROWS_AS(rational_tail_terms(t, bad_profile), input_error);
}

TEST_CASE("rational tail: genus bookkeeping g = g1 + g2 + l(eta) - 1") {
  BracketTerm t(1, 2, 1);
  t.tau(1, W).tau(0, U).rel(Partition({2}));
  REQUIRE(!genus_of(t).half);
  long g = genus_of(t).g;
  TailMove mv;
  mv.ins = {0};
  mv.profiles = {0};
  auto v = rational_tail_terms(t, mv);
  CHECK(v.size() == 2 * 2 * 2);  // r-splits x P(2) x identity mask
  for (auto& st : v) {
    auto gl = genus_of(st.left), gr = genus_of(st.right);
    CHECK(gl.half == gr.half);
    if (!gl.half) CHECK(g == gl.g + gr.g + st.pairs - 1);
  }
}
