#pragma once

#include <map>
#include <string>
#include <vector>

#include "gwpf/brackets.hpp"
#include "gwpf/config.hpp"
#include "gwpf/p1eval.hpp"

namespace gwpf {

// (n+1)x(n+1) matrix with entries (-1)^{a+b} C(a,b): the exact inverse of the
// lower binomial triangle C(a,b).
std::vector<std::vector<Rat>> pascal_inverse(int n);

// Coefficients c_0..c_n with sum_l C(k,l) c_l = (-1)^{n-k} k! (n-k)! for
// every 0 <= k <= n; in particular c_n = (n+1)!.
std::vector<Rat> solve_linalg(int n);

// All k-subsets of {0..n-1}, each ascending, lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k);

// Rebuilds an input term from a canonical bracket (identity round trip).
BracketTerm term_of(const Bracket& b);

// Witness that one unbalanced genus-1 atom dies by monodromy alone: an
// explicit combination of shear relations indexed by (layer+1)-subsets T of
// the 2*layer+1 core odd slots.  The combination expands to the target plus
// atoms of strictly smaller layer, which recurse down to layer zero.
struct UnbalancedCertificate {
  Bracket target;
  int layer = 0;          // min(#alpha, #beta)
  bool mirrored = false;  // beta is the majority symbol
  std::vector<int> core;  // insertion indices of the 2*layer+1 core slots
  std::vector<int> s_set; // core positions (0-based) holding the minority
  struct Entry {
    Rat coeff;                // (-1)^{i+layer} / ((layer+1) C(layer,i))
    std::vector<int> subset;  // T as core positions, size layer+1
  };
  std::vector<Entry> combo;
};

UnbalancedCertificate unbalanced_certificate(const Bracket& b);

// Seed for one entry: minority symbol on the T positions of the core,
// majority elsewhere in the core, payloads and outer slots untouched.  The
// relation applies the majority-fixing shear to the seed.
BracketTerm certificate_seed(const UnbalancedCertificate& c,
                             const std::vector<int>& subset);
Relation certificate_relation(const UnbalancedCertificate& c,
                              const std::vector<int>& subset);

// Sum of coeff * relation over the combo: equals the target plus strictly
// smaller layers.  verify checks exactly that and recurses; returns the
// number of relations consumed, throws internal_error on any mismatch.
ClassExpr certificate_combination(const UnbalancedCertificate& c);
long verify_unbalanced_certificate(const UnbalancedCertificate& c);

struct UnbalancedReduction {
  ClassExpr value;                           // always the zero expression
  std::vector<UnbalancedCertificate> certs;  // one per canonical atom
};
UnbalancedReduction reduce_unbalanced(const BracketTerm& t);

// Reduction driver.  Output atoms are even relative P^1 brackets and glue
// nodes over them; every intermediate step is an exact-rational rewrite
// along a degeneration or a monodromy/diagonal relation.
class Reducer {
 public:
  explicit Reducer(const Config& cfg);

  const Config& config() const { return cfg_; }
  // Pairing certificate for degree d, cached; the payload is forced to be
  // composite so internal tau~ slots never collide with plain taus.
  const TildeData& tilde(int d);

  // Full multilinear expansion of the input, then per-atom routing.
  ClassExpr reduce(const BracketTerm& t);
  ClassExpr reduce_expr(const ClassExpr& e);

  // Iterated irreducible degeneration; insertions must all be even.
  ClassExpr reduce_even(const BracketTerm& t);
  // Separating degenerations down to genus-1 leaves; leaves stay unreduced.
  ClassExpr reduce_genus(const BracketTerm& t);
  // Balanced genus-1 entry: every atom must have odd type (k,k), k >= 1.
  ClassExpr reduce_balanced(const BracketTerm& t);
  // Solves the whole one-profile relative family containing the atom against
  // the pairing matrix of its degree; memoizes every member, returns the
  // requested one.  An odd point block rides along unchanged.
  ClassExpr absrel_determine(const Bracket& rel_atom);

  void set_tracing(bool on) { tracing_ = on; }
  const std::vector<std::string>& trace() const { return trace_; }
  void clear_trace() { trace_.clear(); }

 private:
  // Well-founded routing order, lexicographic in (h, odd, r, ob, st, mm,
  // rank).  ob flags an odd point count: those atoms always sit above the
  // even-block world at equal (h, odd, r), which lets the cluster solve
  // route any even-block sibling as a constant.  rank breaks the remaining
  // ties: absolute tau~ powers < one-profile relative < general tail on the
  // even side, cluster solve < riding relative < profile peel on the odd.
  struct Measure {
    int h = 0;
    long odd = 0, r = 0;
    int ob = 0;
    long st = 0, mm = 0;
    int rank = 0;
    bool operator<(const Measure& o) const;
    std::string str() const;
  };
  struct StackGuard;

  void check_input(const BracketTerm& t) const;
  Measure measure_of(const Bracket& b);
  void note(const std::string& line);

  ClassExpr route_expr(const ClassExpr& e);
  ClassExpr route_term(const BracketTerm& t);
  ClassExpr route_atom(const AtomPtr& a);
  ClassExpr route_balanced(const Bracket& b);
  ClassExpr eliminate(const Bracket& b);    // absolute family, tau~ powers
  ClassExpr tail_out(const Bracket& b);     // general family, one tail move
  // Joint solve of every class assignment over the shared payload multiset
  // of an absolute atom with an odd point count: diagonal, monodromy and
  // shear rows over the identity/slot splits, exact sparse elimination,
  // undetermined directions zero-filled.  Memoizes the whole cluster.
  ClassExpr family_solve(const Bracket& b);
  ClassExpr profile_peel(const Bracket& b); // several profiles, odd points
  ClassExpr split_genus(const Bracket& b);  // h >= 2
  ClassExpr genus_inner(const AtomPtr& a);  // reduce_genus worker

  Config cfg_;
  std::map<int, TildeData> tildes_;
  std::map<AtomPtr, ClassExpr, AtomPtrLess> memo_;
  std::vector<Measure> stack_;
  std::vector<std::string> trace_;
  bool tracing_ = false;
};

}  // namespace gwpf
