#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gwpf/cohomology.hpp"
#include "gwpf/partitions.hpp"

namespace gwpf {

// Finite rational combination of psi-powers: level q >= 0 -> coefficient.
// Houses both plain tau_k (singleton {k:1}) and the refined tau~ profiles.
struct RefinedDescendent {
  std::map<int, Rat> c;

  RefinedDescendent() = default;
  static RefinedDescendent pure(int k) {
    RefinedDescendent r;
    r.c[k] = 1;
    return r;
  }
  RefinedDescendent& add(int q, const Rat& v);
  bool is_zero() const { return c.empty(); }
  bool is_pure() const { return c.size() == 1 && c.begin()->second == 1; }
  int pure_level() const;  // requires is_pure
  bool operator==(const RefinedDescendent&) const = default;
  std::string to_string() const;  // "{0:1,2:-1/2}"
};

int cmp(const RefinedDescendent& a, const RefinedDescendent& b);
int cmp(const CohSymbol& a, const CohSymbol& b);
int cmp(const Partition& a, const Partition& b);  // enumerate order: (d) first

// One canonical insertion: a single symbol with a descendent payload.
struct Insertion {
  RefinedDescendent psi;
  CohSymbol sym;

  bool odd() const { return sym.odd(); }
  bool operator==(const Insertion&) const = default;
};
int cmp(const Insertion& a, const Insertion& b);

// General input term: payloads and classes may be linear combinations; the
// canonicalizers expand them multilinearly.
struct RawInsertion {
  RefinedDescendent psi;
  CohVector cls;
};

struct BracketTerm {
  int h = 1;        // target genus
  int d = 0;        // degree
  long r = 0;       // homological dimension of the push-forward
  int sign = 1;     // +1 or -1
  std::vector<Partition> profiles;  // relative profiles, each of size d
  std::vector<RawInsertion> ins;

  BracketTerm() = default;
  BracketTerm(int h_, int d_, long r_) : h(h_), d(d_), r(r_) {}
  BracketTerm& tau(int level, CohSymbol s);
  BracketTerm& tau(const RefinedDescendent& psi, CohSymbol s);
  BracketTerm& tau(const RefinedDescendent& psi, const CohVector& v);
  BracketTerm& rel(const Partition& p);
  void validate() const;  // profile sizes, handle indices, level signs
};

// Canonical bracket: sorted profiles, Koszul-sorted insertions, each insertion
// a single symbol.  "Pure" additionally means singleton psi payloads.
struct Bracket {
  int h = 1;
  int d = 0;
  long r = 0;
  std::vector<Partition> profiles;
  std::vector<Insertion> ins;

  bool pure() const;
  bool all_even() const;
  bool operator==(const Bracket&) const = default;
  std::string to_string() const;
};
int cmp(const Bracket& a, const Bracket& b);

struct GenusResult {
  bool half = false;  // not an integer: the term is the zero class
  long g = 0;         // meaningful when !half (can be negative: disconnected)
};

// Solves r = 2g - 2 + d(2-2h) + sum_i(len(eta_i) - d) - sum_j(k_j + codim_j)
// for g.  Requires a pure bracket (definite levels).
GenusResult genus_of(const Bracket& t);
GenusResult genus_of(const BracketTerm& t);  // convenience: t must be pure

// (#alpha insertions, #beta insertions); genus-1 targets.
std::pair<int, int> odd_type(const Bracket& t);

struct Atom;
using AtomPtr = std::shared_ptr<const Atom>;

// Atom: an unreduced/base bracket or a glue node ι_* over two child atoms.
// Glue children are single atoms; gluing an expression distributes bilinearly.
struct Atom {
  std::optional<Bracket> br;
  struct GlueData {
    AtomPtr left, right;
    int pairs = 1;
  };
  std::optional<GlueData> glue;

  bool is_bracket() const { return br.has_value(); }
  bool is_glue() const { return glue.has_value(); }
  // Even relative P^1 bracket: the opaque tautological leaves of the output.
  bool is_base() const { return br && br->h == 0 && br->all_even(); }
  std::string to_string() const;
};
int cmp(const Atom& a, const Atom& b);

AtomPtr make_atom(Bracket b);
AtomPtr make_glue(AtomPtr l, AtomPtr r, int pairs);

struct AtomPtrLess {
  bool operator()(const AtomPtr& a, const AtomPtr& b) const {
    if (a.get() == b.get()) return false;
    return cmp(*a, *b) < 0;
  }
};

// Exact-rational linear combination of atoms; like atoms merge, zeros vanish.
struct ClassExpr {
  std::map<AtomPtr, Rat, AtomPtrLess> t;

  static ClassExpr zero() { return {}; }
  static ClassExpr single(AtomPtr a, const Rat& c = 1);
  ClassExpr& add(const AtomPtr& a, const Rat& c);
  ClassExpr& add(const ClassExpr& e, const Rat& c = 1);
  ClassExpr operator+(const ClassExpr& o) const;
  ClassExpr operator-(const ClassExpr& o) const;
  ClassExpr operator*(const Rat& k) const;
  bool is_zero() const { return t.empty(); }
  size_t size() const { return t.size(); }
  bool operator==(const ClassExpr& o) const;
  std::string to_string() const;
};

// ι_* gluing with `pairs` glued point pairs; bilinear in both arguments.
ClassExpr glue(const ClassExpr& l, const ClassExpr& r, int pairs);

// Multilinear expansion to canonical form.  `refined` keeps composite psi
// payloads intact (the reducer's internal currency); otherwise payloads are
// expanded to pure levels and zero-class terms (non-integer genus, r < 0)
// are dropped.
ClassExpr refined_canonicalize(const BracketTerm& t);
ClassExpr canonicalize(const BracketTerm& t);

// Expands every remaining composite payload in an expression (including under
// glue nodes) and applies the zero-class drops.  Idempotent; the common ground
// for comparing reducer outputs.
ClassExpr expand_refined(const ClassExpr& e);

// A ClassExpr asserted to vanish, with provenance.
struct Relation {
  enum class Kind { Monodromy, Elliptic, Degeneration };
  Kind kind = Kind::Monodromy;
  bool depends_on_unbalanced_vanishing = false;
  ClassExpr expr;
  bool trivial() const { return expr.is_zero(); }
};

}  // namespace gwpf
