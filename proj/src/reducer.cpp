#include "gwpf/reducer.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "gwpf/degeneration.hpp"
#include "gwpf/relations.hpp"

namespace gwpf {

std::vector<std::vector<Rat>> pascal_inverse(int n) {
  if (n < 0) throw input_error("pascal_inverse wants n >= 0");
  std::vector<std::vector<Rat>> m(n + 1, std::vector<Rat>(n + 1, 0));
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= a; ++b) {
      Rat v{binomial(a, b)};
      m[a][b] = ((a + b) % 2 == 0) ? v : -v;
    }
  return m;
}

std::vector<Rat> solve_linalg(int n) {
  if (n < 1) throw input_error("solve_linalg wants n >= 1");
  // target vector V_k = (-1)^{n-k} k! (n-k)!; c = R^{-1} V for R_{kl}=C(k,l)
  std::vector<Rat> V(n + 1), c(n + 1, 0);
  for (int k = 0; k <= n; ++k) {
    Rat v{factorial(k) * factorial(n - k)};
    V[k] = ((n - k) % 2 == 0) ? v : -v;
  }
  auto inv = pascal_inverse(n);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= a; ++b) c[a] += inv[a][b] * V[b];
  return c;
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

BracketTerm term_of(const Bracket& b) {
  BracketTerm t(b.h, b.d, b.r);
  for (const auto& p : b.profiles) t.rel(p);
  for (const auto& in : b.ins) t.tau(in.psi, in.sym);
  return t;
}

namespace {

// Shear fixing the majority odd symbol: the monodromy for majority alpha,
// its transpose for majority beta.
Mat2 majority_shear(bool mirrored) {
  if (!mirrored) return kPhi;
  return Mat2{{{1, 0}, {1, 1}}};
}

long term_identity_count(const BracketTerm& t) {
  long c = 0;
  for (const auto& ri : t.ins)
    if (ri.cls.c.size() == 1 && ri.cls.c.begin()->first.kind == CohKind::One)
      ++c;
  return c;
}

// Exact-pivot elimination of an invertible rational matrix against
// expression-valued right hand sides.
std::vector<ClassExpr> solve_system(std::vector<std::vector<Rat>> m,
                                    std::vector<ClassExpr> rhs) {
  const size_t n = m.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) throw internal_error("pairing system singular");
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    Rat d = m[col][col];
    for (size_t j = col; j < n; ++j) m[col][j] /= d;
    rhs[col] = rhs[col] * (Rat(1) / d);
    for (size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0) continue;
      Rat f = m[row][col];
      for (size_t j = col; j < n; ++j) m[row][j] -= f * m[col][j];
      rhs[row] = rhs[row] - rhs[col] * f;
    }
  }
  return rhs;
}

// All set partitions of {0..k-1} into parts of size >= 2; parts carry
// ascending indices and are ordered by least element.
std::vector<SetPartitionSpec> set_partitions_min2(int k) {
  std::vector<SetPartitionSpec> out;
  std::vector<std::vector<int>> cur;
  auto rec = [&](auto&& self, const std::vector<int>& rest) -> void {
    if (rest.empty()) {
      SetPartitionSpec P;
      P.parts = cur;
      out.push_back(std::move(P));
      return;
    }
    const int a = rest.front();
    const std::vector<int> tail(rest.begin() + 1, rest.end());
    const int m = static_cast<int>(tail.size());
    for (int mask = 1; mask < (1 << m); ++mask) {
      std::vector<int> part{a}, next;
      for (int i = 0; i < m; ++i)
        ((mask >> i) & 1 ? part : next).push_back(tail[i]);
      cur.push_back(std::move(part));
      self(self, next);
      cur.pop_back();
    }
  };
  if (k >= 2) {
    std::vector<int> all(static_cast<size_t>(k));
    std::iota(all.begin(), all.end(), 0);
    rec(rec, all);
  }
  return out;
}

// Sparse echelon row: ascending (column, coefficient) pairs plus an
// expression-valued right hand side.
struct SparseRow {
  std::vector<std::pair<size_t, Rat>> a;
  ClassExpr rhs;
};

// a -= f * b on sorted sparse vectors; exact zeros drop out.
void sparse_axpy(std::vector<std::pair<size_t, Rat>>& a, const Rat& f,
                 const std::vector<std::pair<size_t, Rat>>& b) {
  std::vector<std::pair<size_t, Rat>> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -f * b[j].second);
      ++j;
    } else {
      Rat v = a[i].second - f * b[j].second;
      if (!(v == 0)) out.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  a = std::move(out);
}

}  // namespace

UnbalancedCertificate unbalanced_certificate(const Bracket& b) {
  if (b.h != 1)
    throw precondition_error("unbalanced certificates live on genus-1 targets");
  auto [na, nb] = odd_type(b);
  if (na == nb)
    throw precondition_error("balanced input (handled by reduce_balanced)");
  UnbalancedCertificate c;
  c.target = b;
  c.mirrored = nb > na;
  c.layer = std::min(na, nb);
  const CohKind maj = c.mirrored ? CohKind::Beta : CohKind::Alpha;
  int taken = 0;
  for (int i = 0; i < static_cast<int>(b.ins.size()); ++i) {
    const auto& in = b.ins[i];
    if (!in.odd()) continue;
    if (in.sym.kind == maj) {
      if (taken < c.layer + 1) {
        c.core.push_back(i);
        ++taken;
      }
    } else {
      c.core.push_back(i);
    }
  }
  for (int p = 0; p < static_cast<int>(c.core.size()); ++p)
    if (b.ins[c.core[p]].sym.kind != maj) c.s_set.push_back(p);
  const int lay = c.layer;
  for (const auto& T : combinations(2 * lay + 1, lay + 1)) {
    int i = 0;
    for (int x : T)
      if (std::binary_search(c.s_set.begin(), c.s_set.end(), x)) ++i;
    Rat coeff = Rat(1) / (Rat(lay + 1) * Rat(binomial(lay, i)));
    if ((i + lay) % 2) coeff = -coeff;
    c.combo.push_back({coeff, T});
  }
  return c;
}

BracketTerm certificate_seed(const UnbalancedCertificate& c,
                             const std::vector<int>& subset) {
  const Bracket& b = c.target;
  const CohSymbol majs =
      c.mirrored ? CohSymbol::beta(1) : CohSymbol::alpha(1);
  const CohSymbol mins =
      c.mirrored ? CohSymbol::alpha(1) : CohSymbol::beta(1);
  std::vector<int> pos(b.ins.size(), -1);
  for (int p = 0; p < static_cast<int>(c.core.size()); ++p) pos[c.core[p]] = p;
  BracketTerm t(b.h, b.d, b.r);
  for (const auto& p : b.profiles) t.rel(p);
  for (int i = 0; i < static_cast<int>(b.ins.size()); ++i) {
    if (pos[i] < 0) {
      t.tau(b.ins[i].psi, b.ins[i].sym);
      continue;
    }
    bool in_T = std::binary_search(subset.begin(), subset.end(), pos[i]);
    t.tau(b.ins[i].psi, in_T ? mins : majs);
  }
  return t;
}

Relation certificate_relation(const UnbalancedCertificate& c,
                              const std::vector<int>& subset) {
  return raw_sl2_relation(certificate_seed(c, subset),
                          majority_shear(c.mirrored));
}

ClassExpr certificate_combination(const UnbalancedCertificate& c) {
  ClassExpr e;
  for (const auto& en : c.combo)
    e.add(certificate_relation(c, en.subset).expr, en.coeff);
  return e;
}

long verify_unbalanced_certificate(const UnbalancedCertificate& c) {
  ClassExpr residual =
      certificate_combination(c) - ClassExpr::single(make_atom(c.target));
  long used = static_cast<long>(c.combo.size());
  for (const auto& [atom, coeff] : residual.t) {
    if (!atom->is_bracket() || atom->br->h != 1)
      throw internal_error("certificate residual is not a genus-1 bracket");
    auto [xa, xb] = odd_type(*atom->br);
    if (xa == xb || std::min(xa, xb) >= c.layer)
      throw internal_error("certificate residual not of smaller layer: " +
                           atom->br->to_string());
    used += verify_unbalanced_certificate(unbalanced_certificate(*atom->br));
  }
  return used;
}

UnbalancedReduction reduce_unbalanced(const BracketTerm& t) {
  UnbalancedReduction r;
  for (const auto& [atom, coeff] : canonicalize(t).t) {
    if (!atom->is_bracket() || atom->br->h != 1)
      throw precondition_error("reduce_unbalanced wants genus-1 bracket atoms");
    auto [na, nb] = odd_type(*atom->br);
    if (na == nb)
      throw precondition_error("balanced input (handled by reduce_balanced)");
    r.certs.push_back(unbalanced_certificate(*atom->br));
  }
  r.value = ClassExpr::zero();
  return r;
}

// ---------------------------------------------------------------------------

bool Reducer::Measure::operator<(const Measure& o) const {
  return std::tie(h, odd, r, ob, st, mm, rank) <
         std::tie(o.h, o.odd, o.r, o.ob, o.st, o.mm, o.rank);
}

std::string Reducer::Measure::str() const {
  std::ostringstream s;
  s << "(h=" << h << ",odd=" << odd << ",r=" << r << ",ob=" << ob
    << ",st=" << st << ",mm=" << mm << ",f=" << rank << ")";
  return s.str();
}

struct Reducer::StackGuard {
  Reducer& red;
  StackGuard(Reducer& r, const Measure& m) : red(r) {
    red.stack_.push_back(m);
  }
  ~StackGuard() { red.stack_.pop_back(); }
};

Reducer::Reducer(const Config& cfg) : cfg_(cfg) {}

const TildeData& Reducer::tilde(int d) {
  if (d < 1) throw input_error("tilde wants degree >= 1");
  if (d > cfg_.degree_cap)
    throw resource_error("degree " + std::to_string(d) + " above degree_cap " +
                         std::to_string(cfg_.degree_cap));
  auto it = tildes_.find(d);
  if (it == tildes_.end())
    it = tildes_.emplace(d, find_tilde_tau(d, cfg_.q_cap, cfg_.v_cap, 1)).first;
  return it->second;
}

void Reducer::check_input(const BracketTerm& t) const {
  if (t.d < 1)
    throw input_error(
        "degree-0 brackets are outside the model (no branching data)");
  if (t.d > cfg_.degree_cap)
    throw resource_error("degree " + std::to_string(t.d) +
                         " above degree_cap " +
                         std::to_string(cfg_.degree_cap));
}

void Reducer::note(const std::string& line) {
  if (tracing_) trace_.push_back(line);
}

Reducer::Measure Reducer::measure_of(const Bracket& b) {
  Measure m;
  m.h = b.h;
  m.r = b.r;
  for (const auto& in : b.ins) {
    if (in.odd()) {
      ++m.odd;
      if (in.psi.is_pure()) ++m.st;
    } else if (in.sym.kind == CohKind::One) {
      ++m.mm;
    }
  }
  m.rank = 0;
  if (b.h == 1 && m.odd > 0) {
    const RefinedDescendent& tld = tilde(b.d).tilde;
    long v = 0;
    bool plain_omega = false;
    for (const auto& in : b.ins)
      if (in.sym.kind == CohKind::Omega) {
        ++v;
        if (!(in.psi == tld)) plain_omega = true;
      }
    if (v % 2) {
      m.ob = 1;
      if (b.profiles.empty())
        m.rank = 3;
      else if (b.profiles.size() == 1)
        m.rank = 4;
      else
        m.rank = 5;
    } else if (b.profiles.empty() && !plain_omega) {
      m.rank = 0;
    } else if (b.profiles.size() == 1 && v == 0) {
      m.rank = 1;
    } else {
      m.rank = 2;
    }
  }
  return m;
}

ClassExpr Reducer::reduce(const BracketTerm& t) {
  check_input(t);
  return route_expr(canonicalize(t));
}

ClassExpr Reducer::reduce_expr(const ClassExpr& e) {
  return route_expr(expand_refined(e));
}

ClassExpr Reducer::route_term(const BracketTerm& t) {
  return route_expr(refined_canonicalize(t));
}

ClassExpr Reducer::route_expr(const ClassExpr& e) {
  ClassExpr out;
  for (const auto& [a, c] : e.t) out.add(route_atom(a), c);
  return out;
}

ClassExpr Reducer::route_atom(const AtomPtr& a) {
  if (auto it = memo_.find(a); it != memo_.end()) return it->second;
  ClassExpr out;
  if (a->is_glue()) {
    out = glue(route_atom(a->glue->left), route_atom(a->glue->right),
               a->glue->pairs);
  } else {
    const Bracket& b = *a->br;
    if (b.h == 0) {
      out = ClassExpr::single(a);
    } else if (b.h >= 2) {
      out = split_genus(b);
    } else {
      auto [na, nb] = odd_type(b);
      if (na + nb == 0) {
        out = route_expr(degenerate_irreducible(term_of(b)));
      } else if (na != nb) {
        note("unbalanced vanishing: " + b.to_string());
        out = ClassExpr::zero();
      } else {
        Measure m = measure_of(b);
        if (!stack_.empty() && !(m < stack_.back()))
          throw internal_error("reduction order violated: " + m.str() +
                               " not below " + stack_.back().str() + " at " +
                               b.to_string());
        note("route " + m.str() + " " + b.to_string());
        out = route_balanced(b);
      }
    }
  }
  memo_[a] = out;
  return out;
}

ClassExpr Reducer::split_genus(const Bracket& b) {
  ClassExpr out;
  for (const auto& sp : separating_terms(term_of(b)))
    out.add(glue(route_term(sp.left), route_term(sp.right), sp.pairs),
            sp.coeff);
  return out;
}

ClassExpr Reducer::route_balanced(const Bracket& b) {
  const TildeData& td = tilde(b.d);
  // identity slots with composite payloads expand multilinearly first
  std::vector<int> comp;
  for (int i = 0; i < static_cast<int>(b.ins.size()); ++i) {
    const auto& in = b.ins[i];
    if (in.sym.kind == CohKind::One && !in.psi.is_pure()) {
      if (!(in.psi == td.tilde))
        throw internal_error("unexpected composite identity payload " +
                             in.psi.to_string());
      comp.push_back(i);
    }
  }
  if (!comp.empty()) {
    const std::vector<std::pair<int, Rat>> levels(td.tilde.c.begin(),
                                                  td.tilde.c.end());
    ClassExpr out;
    std::vector<size_t> choice(comp.size(), 0);
    while (true) {
      BracketTerm t(b.h, b.d, b.r);
      for (const auto& p : b.profiles) t.rel(p);
      Rat cf = 1;
      size_t ci = 0;
      for (int i = 0; i < static_cast<int>(b.ins.size()); ++i) {
        if (ci < comp.size() && comp[ci] == i) {
          t.tau(levels[choice[ci]].first, b.ins[i].sym);
          cf *= levels[choice[ci]].second;
          ++ci;
        } else {
          t.tau(b.ins[i].psi, b.ins[i].sym);
        }
      }
      out.add(route_term(t), cf);
      size_t k = 0;
      while (k < choice.size() && ++choice[k] == levels.size()) {
        choice[k] = 0;
        ++k;
      }
      if (k == choice.size()) break;
    }
    return out;
  }
  bool plain_omega = false;
  long v = 0;
  for (const auto& in : b.ins)
    if (in.sym.kind == CohKind::Omega) {
      ++v;
      if (!(in.psi == td.tilde)) plain_omega = true;
    }
  if (v % 2) {
    // an odd point block never rides a tail: splitting it off flips the
    // half-genus parity of the factors against the honest values, so these
    // atoms are pinned in place against their relation cluster instead
    if (b.profiles.empty()) return family_solve(b);
    if (b.profiles.size() == 1) return absrel_determine(b);
    return profile_peel(b);
  }
  if (b.profiles.empty() && !plain_omega) return eliminate(b);
  if (b.profiles.size() == 1 && v == 0) return absrel_determine(b);
  return tail_out(b);
}

ClassExpr Reducer::tail_out(const Bracket& b) {
  BracketTerm t = term_of(b);
  TailMove mv;
  for (int i = 0; i < static_cast<int>(b.ins.size()); ++i)
    if (b.ins[i].sym.kind == CohKind::Omega) mv.ins.push_back(i);
  if (mv.ins.size() % 2)
    throw internal_error("odd point block cannot ride a tail: " +
                         b.to_string());
  for (int k = 0; k < static_cast<int>(b.profiles.size()); ++k)
    mv.profiles.push_back(k);
  note("tail move " + b.to_string());
  StackGuard g(*this, measure_of(b));
  ClassExpr out;
  for (const auto& sp : rational_tail_terms(t, mv))
    out.add(glue(route_term(sp.left), route_term(sp.right), sp.pairs),
            sp.coeff);
  return out;
}

ClassExpr Reducer::profile_peel(const Bracket& b) {
  // several profiles over an odd point block: the block must stay put, so
  // only the profiles ship to the tail; every left factor is then a
  // one-profile relative with the block riding along
  BracketTerm t = term_of(b);
  TailMove mv;
  for (int k = 0; k < static_cast<int>(b.profiles.size()); ++k)
    mv.profiles.push_back(k);
  note("profile peel " + b.to_string());
  StackGuard g(*this, measure_of(b));
  ClassExpr out;
  for (const auto& sp : rational_tail_terms(t, mv))
    out.add(glue(route_term(sp.left), route_term(sp.right), sp.pairs),
            sp.coeff);
  return out;
}

ClassExpr Reducer::family_solve(const Bracket& b) {
  if (b.h != 1 || !b.profiles.empty())
    throw precondition_error("family_solve wants an absolute genus-1 atom");
  auto [na0, nb0] = odd_type(b);
  if (na0 != nb0 || na0 == 0)
    throw precondition_error("family_solve wants balanced odd type");
  const long odd0 = na0 + nb0;
  const TildeData& td = tilde(b.d);
  const RefinedDescendent& tld = td.tilde;
  {
    long ws = 0;
    for (const auto& in : b.ins)
      if (in.sym.kind == CohKind::Omega) ++ws;
    if (ws % 2 == 0)
      throw precondition_error("family_solve wants an odd point count");
  }

  // every insertion contributes its payload to the shared multiset U; pure
  // levels may sit in the identity monomial or on a class slot anywhere in
  // the cluster, composite payloads always stay slots
  std::vector<int> pure;
  long ncomp = 0;
  for (const auto& in : b.ins) {
    if (in.psi.is_pure()) {
      pure.push_back(in.psi.pure_level());
    } else if (in.psi == tld) {
      ++ncomp;
    } else {
      throw internal_error("family_solve: unexpected payload " +
                           in.psi.to_string());
    }
  }
  std::sort(pure.begin(), pure.end());
  std::vector<std::pair<int, int>> lev;  // distinct level, multiplicity
  for (int q : pure) {
    if (!lev.empty() && lev.back().first == q)
      ++lev.back().second;
    else
      lev.emplace_back(q, 1);
  }

  struct Fam {
    std::vector<int> mlev;
    std::vector<RefinedDescendent> slots;
  };
  std::vector<Fam> fams;
  std::vector<int> take(lev.size(), 0);
  while (true) {
    Fam f;
    for (size_t i = 0; i < lev.size(); ++i) {
      for (int c = 0; c < take[i]; ++c) f.mlev.push_back(lev[i].first);
      for (int c = take[i]; c < lev[i].second; ++c)
        f.slots.push_back(RefinedDescendent::pure(lev[i].first));
    }
    for (long c = 0; c < ncomp; ++c) f.slots.push_back(tld);
    if (f.slots.size() >= 2) fams.push_back(std::move(f));
    size_t k = 0;
    while (k < take.size() && ++take[k] > lev[k].second) {
      take[k] = 0;
      ++k;
    }
    if (k == take.size()) break;
  }

  // columns: the live, not yet memoized class assignments the cluster must
  // treat as unknown -- strictly more odd insertions than the trigger (any
  // point parity), or equally many over an odd point count.  Everything
  // below that line routes as a constant.
  std::map<AtomPtr, size_t, AtomPtrLess> colix;
  std::vector<AtomPtr> cols;
  auto consider = [&](const BracketTerm& t) {
    ClassExpr c = refined_canonicalize(t);
    if (c.is_zero()) return;  // half-integral genus: the zero class
    if (c.size() != 1)
      throw internal_error("family member did not stay a single atom");
    const AtomPtr a = c.t.begin()->first;
    if (memo_.find(a) != memo_.end()) return;
    if (colix.emplace(a, cols.size()).second) cols.push_back(a);
  };
  for (const Fam& f : fams) {
    const int K = static_cast<int>(f.slots.size());
    std::vector<int> cls(static_cast<size_t>(K), 0);  // 0 w, 1 alpha, 2 beta
    while (true) {
      long na = 0, nb = 0;
      for (int c : cls) {
        if (c == 1) ++na;
        if (c == 2) ++nb;
      }
      if (na == nb && na >= 1) {
        const long oc = 2 * na;
        if (oc > odd0 || (oc == odd0 && (K - oc) % 2)) {
          BracketTerm t(1, b.d, b.r);
          for (int q : f.mlev) t.tau(q, CohSymbol::one());
          for (size_t i = 0; i < cls.size(); ++i)
            t.tau(f.slots[i], cls[i] == 0   ? CohSymbol::omega()
                              : cls[i] == 1 ? CohSymbol::alpha(1)
                                            : CohSymbol::beta(1));
          consider(t);
        }
      }
      size_t k = 0;
      while (k < cls.size() && ++cls[k] == 3) {
        cls[k] = 0;
        ++k;
      }
      if (k == cls.size()) break;
    }
  }
  ClassExpr cb = refined_canonicalize(term_of(b));
  if (cb.size() != 1)
    throw internal_error("family_solve target did not stay canonical");
  auto itb = colix.find(cb.t.begin()->first);
  if (itb == colix.end())
    throw internal_error("family_solve target missing from its cluster");
  const size_t jb = itb->second;

  // rows: per family every diagonal expansion (all slot partitions into
  // parts >= 2), every monodromy sum over a point placement and a split of
  // the rest, and both generator shears of every column.  Duplicates under
  // permuting equal slots are dropped by signature.
  std::vector<ClassExpr> rels;
  std::set<std::string> seen;
  auto famsig = [](const Fam& f) {
    std::string s = "M";
    for (int q : f.mlev) s += std::to_string(q) + ",";
    return s;
  };
  for (const Fam& f : fams) {
    const int K = static_cast<int>(f.slots.size());
    BracketTerm mbr(1, b.d, b.r);
    for (int q : f.mlev) mbr.tau(q, CohSymbol::one());
    const DescendentAssignment l(f.slots.begin(), f.slots.end());
    for (const auto& P : set_partitions_min2(K)) {
      std::vector<std::string> ps;
      for (const auto& part : P.parts) {
        std::vector<std::string> q;
        for (int i : part) q.push_back(f.slots[static_cast<size_t>(i)].to_string());
        std::sort(q.begin(), q.end());
        std::string s;
        for (const auto& x : q) s += x + ";";
        ps.push_back(std::move(s));
      }
      std::sort(ps.begin(), ps.end());
      std::string sig = famsig(f) + "|V|";
      for (const auto& x : ps) sig += x + "/";
      if (!seen.insert(sig).second) continue;
      rels.push_back(elliptic_vanishing(mbr, P, l).expr);
    }
    for (int mask = 0; mask < (1 << K); ++mask) {
      const int rem = K - std::popcount(static_cast<unsigned>(mask));
      if (rem < 2 || rem % 2) continue;
      const int half = rem / 2;
      BracketTerm N = mbr;
      std::vector<int> rest;
      std::vector<std::string> wp;
      for (int i = 0; i < K; ++i) {
        if ((mask >> i) & 1) {
          N.tau(f.slots[static_cast<size_t>(i)], CohSymbol::omega());
          wp.push_back(f.slots[static_cast<size_t>(i)].to_string());
        } else {
          rest.push_back(i);
        }
      }
      std::sort(wp.begin(), wp.end());
      std::string wsig;
      for (const auto& x : wp) wsig += x + ";";
      for (const auto& I : combinations(rem, half)) {
        std::vector<char> in_i(static_cast<size_t>(rem), 0);
        for (int x : I) in_i[static_cast<size_t>(x)] = 1;
        DescendentAssignment nn, mm;
        for (int x = 0; x < rem; ++x)
          (in_i[static_cast<size_t>(x)] ? nn : mm)
              .push_back(f.slots[static_cast<size_t>(rest[static_cast<size_t>(x)])]);
        for (int ds = 0; ds < half; ++ds) {
          for (const auto& delta : combinations(half, ds)) {
            std::vector<std::string> is, js;
            std::vector<char> ind(static_cast<size_t>(half), 0);
            for (int x : delta) ind[static_cast<size_t>(x)] = 1;
            for (int x = 0; x < half; ++x)
              is.push_back(nn[static_cast<size_t>(x)].to_string() +
                           (ind[static_cast<size_t>(x)] ? "*" : ""));
            for (int x = 0; x < half; ++x)
              js.push_back(mm[static_cast<size_t>(x)].to_string());
            std::sort(is.begin(), is.end());
            std::sort(js.begin(), js.end());
            std::string si, sj;
            for (const auto& x : is) si += x + ";";
            for (const auto& x : js) sj += x + ";";
            std::string sig = famsig(f) + "|R|" + wsig + "|";
            if (ds == 0 && sj < si)
              sig += sj + "|" + si;
            else
              sig += si + "|" + sj;
            if (!seen.insert(sig).second) continue;
            rels.push_back(monodromy_relation(N, nn, mm, delta).expr);
          }
        }
      }
    }
  }
  const Mat2 shear_t{{{1, 0}, {1, 1}}};
  for (const AtomPtr& a : cols) {
    rels.push_back(raw_sl2_relation(term_of(*a->br), kPhi).expr);
    rels.push_back(raw_sl2_relation(term_of(*a->br), shear_t).expr);
  }

  note("family cluster " + b.to_string() + " families=" +
       std::to_string(fams.size()) + " cols=" + std::to_string(cols.size()) +
       " rows=" + std::to_string(rels.size()));
  StackGuard g(*this, measure_of(b));

  std::map<size_t, SparseRow> basis;  // pivot column -> reduced row
  long residuals = 0;
  for (const auto& rel : rels) {
    std::vector<std::pair<size_t, Rat>> a;
    ClassExpr rv;
    {
      std::map<size_t, Rat> acc;
      for (const auto& [atom, cf] : rel.t) {
        auto it = colix.find(atom);
        if (it != colix.end())
          acc[it->second] += cf;
        else
          rv = rv - route_atom(atom) * cf;  // strictly simpler or memoized
      }
      for (const auto& [c, x] : acc)
        if (!(x == 0)) a.emplace_back(c, x);
    }
    bool placed = false;
    while (!a.empty()) {
      const size_t lead = a.front().first;
      auto it = basis.find(lead);
      if (it == basis.end()) {
        const Rat dv = a.front().second;
        if (!(dv == 1)) {
          const Rat inv = Rat(1) / dv;
          for (auto& [c, x] : a) x *= inv;
          rv = rv * inv;
        }
        basis.emplace(lead, SparseRow{std::move(a), std::move(rv)});
        placed = true;
        break;
      }
      const Rat fc = a.front().second;
      sparse_axpy(a, fc, it->second.a);
      rv = rv - it->second.rhs * fc;
    }
    if (!placed && !rv.is_zero()) {
      // a dependent row: its leftover must be the zero value
      ++residuals;
      if (b.r == 0 && !(evaluate_expr(expand_refined(rv)) == 0))
        throw internal_error("family cluster inconsistent at " +
                             b.to_string());
    }
  }

  // pivots in descending column order; free columns stay the zero
  // expression (the row set does not see them, so any value is consistent)
  std::vector<ClassExpr> X(cols.size());
  long nfree = 0;
  for (size_t c = 0; c < cols.size(); ++c)
    if (basis.find(c) == basis.end()) {
      ++nfree;
      note("family free column zero-filled: " + cols[c]->to_string());
    }
  for (auto it = basis.rbegin(); it != basis.rend(); ++it) {
    ClassExpr v = it->second.rhs;
    for (const auto& [j, cf] : it->second.a)
      if (j != it->first && !X[j].is_zero()) v = v - X[j] * cf;
    X[it->first] = std::move(v);
  }
  for (size_t c = 0; c < cols.size(); ++c) memo_[cols[c]] = X[c];
  note("family cluster solved rank=" + std::to_string(basis.size()) +
       " free=" + std::to_string(nfree) + " residuals=" +
       std::to_string(residuals));
  return X[jb];
}

ClassExpr Reducer::absrel_determine(const Bracket& A) {
  if (A.h != 1 || A.profiles.size() != 1)
    throw precondition_error(
        "absrel_determine wants a genus-1 atom with exactly one profile");
  long ws = 0;
  for (const auto& in : A.ins)
    if (in.sym.kind == CohKind::Omega) ++ws;
  if (ws > 0 && ws % 2 == 0)
    throw precondition_error(
        "absrel_determine wants no even point block "
        "(the general family moves those to a tail first)");
  const TildeData& td = tilde(A.d);
  const size_t np = td.cols.size();
  long mcount = 0;
  for (const auto& in : A.ins)
    if (in.sym.kind == CohKind::One) ++mcount;

  std::vector<AtomPtr> unknowns(np);
  size_t ja = np;
  for (size_t j = 0; j < np; ++j) {
    BracketTerm t(1, A.d, A.r);
    t.rel(td.cols[j]);
    for (const auto& in : A.ins) t.tau(in.psi, in.sym);
    ClassExpr c = refined_canonicalize(t);
    if (c.is_zero()) continue;  // half-integral genus: the zero class
    if (c.size() != 1 || !(c.t.begin()->second == 1))
      throw internal_error("relative family member did not stay canonical");
    unknowns[j] = c.t.begin()->first;
    if (cmp(*unknowns[j]->br, A) == 0) ja = j;
  }
  if (ja == np)
    throw internal_error("requested atom missing from its own family");

  note("relative solve d=" + std::to_string(A.d) + " r=" +
       std::to_string(A.r) + " unknowns=" + std::to_string(np));
  StackGuard g(*this, measure_of(A));
  std::vector<std::vector<Rat>> mat(td.rows.size(),
                                    std::vector<Rat>(np, 0));
  std::vector<ClassExpr> rhs(td.rows.size());
  for (size_t i = 0; i < td.rows.size(); ++i) {
    const long v = td.rows[i];
    BracketTerm abs(1, A.d, A.r);
    for (const auto& in : A.ins) abs.tau(in.psi, in.sym);
    TailMove mv;
    for (long w = 0; w < v; ++w) {
      abs.tau(td.tilde, CohSymbol::omega());
      mv.ins.push_back(static_cast<int>(A.ins.size() + w));
    }
    ClassExpr ri = route_term(abs);
    for (const auto& sp : rational_tail_terms(abs, mv)) {
      const bool maximal =
          sp.left.r == A.r && term_identity_count(sp.left) == mcount;
      if (maximal) {
        if (sp.left.profiles.size() != 1)
          throw internal_error("maximal tail term with stray profiles");
        size_t j = np;
        for (size_t q = 0; q < np; ++q)
          if (td.cols[q] == sp.left.profiles[0]) {
            j = q;
            break;
          }
        if (j == np) throw internal_error("unknown splitting profile");
        mat[i][j] +=
            sp.coeff *
            evaluate_expr(expand_refined(refined_canonicalize(sp.right)));
      } else {
        ri = ri -
             glue(route_term(sp.left), route_term(sp.right), sp.pairs) *
                 sp.coeff;
      }
    }
    for (size_t j = 0; j < np; ++j)
      if (!(mat[i][j] == td.mat[i][j]))
        throw internal_error(
            "tail system disagrees with the pairing certificate");
    rhs[i] = ri;
  }
  auto X = solve_system(td.mat, rhs);
  for (size_t j = 0; j < np; ++j)
    if (unknowns[j]) memo_[unknowns[j]] = X[j];
  return X[ja];
}

ClassExpr Reducer::eliminate(const Bracket& b) {
  const TildeData& td = tilde(b.d);
  const RefinedDescendent& tld = td.tilde;
  std::vector<int> mlev;
  std::vector<RefinedDescendent> li, lj;
  long v = 0;
  for (const auto& in : b.ins) {
    switch (in.sym.kind) {
      case CohKind::One:
        mlev.push_back(in.psi.pure_level());
        break;
      case CohKind::Omega:
        ++v;
        break;
      case CohKind::Alpha:
        li.push_back(in.psi);
        break;
      case CohKind::Beta:
        lj.push_back(in.psi);
        break;
    }
  }
  const long n = static_cast<long>(li.size());
  if (n == 0 || li.size() != lj.size())
    throw internal_error("eliminate wants a balanced atom");
  if (n > cfg_.max_bijections)
    throw resource_error("sigma sum needs " + std::to_string(n) +
                         "! pairings, above max_bijections " +
                         std::to_string(cfg_.max_bijections));
  long s = 0, t = 0;
  for (const auto& p : li) {
    if (p.is_pure())
      ++s;
    else if (!(p == tld))
      throw internal_error("unexpected odd payload " + p.to_string());
  }
  for (const auto& p : lj) {
    if (p.is_pure())
      ++t;
    else if (!(p == tld))
      throw internal_error("unexpected odd payload " + p.to_string());
  }

  // slot layout: 0..n-1 alpha side, n..n+v-1 omega providers, then beta side
  DescendentAssignment l;
  l.reserve(2 * n + v);
  for (const auto& p : li) l.push_back(p);
  for (long w = 0; w < v; ++w) l.push_back(tld);
  for (const auto& p : lj) l.push_back(p);

  BracketTerm mbr(1, b.d, b.r);
  for (int k : mlev) mbr.tau(k, CohSymbol::one());

  // summed over all pairings, the Koszul-signed expansions reproduce the
  // weighted orientation sum: each (delta, T) split is hit by k!(n-k)!
  // pairings with matching parity
  ClassExpr V;
  std::vector<int> sigma(static_cast<size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    SetPartitionSpec P;
    std::vector<int> first;
    first.push_back(0);
    for (long w = 0; w < v; ++w) first.push_back(static_cast<int>(n + w));
    first.push_back(static_cast<int>(n + v + sigma[0]));
    P.parts.push_back(first);
    for (long i = 1; i < n; ++i)
      P.parts.push_back({static_cast<int>(i),
                         static_cast<int>(n + v + sigma[static_cast<size_t>(i)])});
    // the tau~ slots of the big part are interchangeable, so the target
    // orientation gets merged over its equivalent placements; divide by the
    // multiplicity, which depends on how many of its ends are plain
    const int specials = (l[0].is_pure() ? 1 : 0) +
                         (l[static_cast<size_t>(n + v + sigma[0])].is_pure()
                              ? 1
                              : 0);
    const Rat csig = specials == 2   ? Rat(1)
                     : specials == 1 ? Rat(v + 1)
                                     : Rat(binomial(v + 2, 2));
    V.add(elliptic_vanishing(mbr, P, l).expr, Rat(1) / csig);
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  // the weighted orientation sum the sigma-combination is designed to hit
  ClassExpr twe;
  for (long k = 0; k <= n; ++k) {
    Rat wk{factorial(k) * factorial(n - k)};
    if ((n - k) % 2) wk = -wk;
    for (const auto& delta :
         combinations(static_cast<int>(n), static_cast<int>(k)))
      for (const auto& T :
           combinations(static_cast<int>(n), static_cast<int>(n - k))) {
        BracketTerm t2(1, b.d, b.r);
        for (int kk : mlev) t2.tau(kk, CohSymbol::one());
        for (long w = 0; w < v; ++w) t2.tau(tld, CohSymbol::omega());
        size_t di = 0, ti = 0;
        for (long i = 0; i < n; ++i) {
          bool al = di < delta.size() && delta[di] == static_cast<int>(i);
          if (al) ++di;
          t2.tau(l[static_cast<size_t>(i)],
                 al ? CohSymbol::alpha(1) : CohSymbol::beta(1));
        }
        for (long j = 0; j < n; ++j) {
          bool al = ti < T.size() && T[ti] == static_cast<int>(j);
          if (al) ++ti;
          t2.tau(l[static_cast<size_t>(n + v + j)],
                 al ? CohSymbol::alpha(1) : CohSymbol::beta(1));
        }
        twe.add(refined_canonicalize(t2), wk);
      }
  }

  // the all-alpha-on-the-left orientation is the atom being determined
  BracketTerm tt(1, b.d, b.r);
  for (int kk : mlev) tt.tau(kk, CohSymbol::one());
  for (long w = 0; w < v; ++w) tt.tau(tld, CohSymbol::omega());
  for (const auto& p : li) tt.tau(p, CohSymbol::alpha(1));
  for (const auto& p : lj) tt.tau(p, CohSymbol::beta(1));
  ClassExpr en = refined_canonicalize(tt);
  if (en.size() != 1)
    throw internal_error("elimination target did not stay a single atom");
  const AtomPtr ba = en.t.begin()->first;
  const Rat eps = en.t.begin()->second;
  if (!(eps == 1 || eps == -1) || cmp(*ba->br, b) != 0)
    throw internal_error("elimination target mismatch");

  // leftover terms must all be strictly simpler: fewer odd insertions,
  // unbalanced, or the same odd count with fewer plain odd payloads
  auto offending = [&](const ClassExpr& D) -> std::string {
    for (const auto& [atom, cf] : D.t) {
      if (!atom->is_bracket()) return atom->to_string();
      const Bracket& x = *atom->br;
      auto [xa, xb] = odd_type(x);
      const long oc = xa + xb;
      if (oc > 2 * n) return x.to_string();
      if (oc < 2 * n) continue;
      if (xa != xb) continue;
      long plain = 0;
      for (const auto& in : x.ins)
        if (in.odd() && in.psi.is_pure()) ++plain;
      if (plain < s + t) continue;
      return x.to_string();
    }
    return std::string();
  };
  std::vector<int> cands;
  if (cfg_.sign_mode == SignMode::Auto)
    cands = {1, -1};
  else
    cands = {cfg_.sign_mode == SignMode::Plus ? 1 : -1};
  int chosen = 0;
  ClassExpr D;
  std::string off;
  for (int sg : cands) {
    D = V - twe * Rat(sg);
    off = offending(D);
    if (off.empty()) {
      chosen = sg;
      break;
    }
  }
  if (!chosen)
    throw internal_error("elimination sign validation failed at " + off +
                         " for " + b.to_string());

  note("eliminate " + b.to_string() + " v=" + std::to_string(v) + " s=" +
       std::to_string(s) + " t=" + std::to_string(t) + " sign=" +
       std::to_string(chosen));
  StackGuard g(*this, measure_of(b));
  ClassExpr dred = route_expr(D);
  const Rat cn = solve_linalg(static_cast<int>(n)).back();
  return dred * (Rat(-chosen) / (cn * eps));
}

ClassExpr Reducer::reduce_even(const BracketTerm& t) {
  check_input(t);
  for (const auto& ri : t.ins)
    for (const auto& [sym, c] : ri.cls.c)
      if (sym.odd())
        throw precondition_error("reduce_even wants even insertions only");
  ClassExpr e = refined_canonicalize(t);
  bool again = true;
  while (again) {
    again = false;
    ClassExpr next;
    for (const auto& [a, c] : e.t) {
      if (a->is_bracket() && a->br->h >= 1) {
        next.add(degenerate_irreducible(term_of(*a->br)), c);
        again = true;
      } else {
        next.add(a, c);
      }
    }
    e = next;
  }
  return e;
}

ClassExpr Reducer::genus_inner(const AtomPtr& a) {
  if (a->is_glue())
    return glue(genus_inner(a->glue->left), genus_inner(a->glue->right),
                a->glue->pairs);
  const Bracket& b = *a->br;
  if (b.h < 2) return ClassExpr::single(a);
  ClassExpr out;
  for (const auto& sp : separating_terms(term_of(b))) {
    ClassExpr right;
    for (const auto& [ra, rc] : refined_canonicalize(sp.right).t)
      right.add(genus_inner(ra), rc);
    out.add(glue(refined_canonicalize(sp.left), right, sp.pairs), sp.coeff);
  }
  return out;
}

ClassExpr Reducer::reduce_genus(const BracketTerm& t) {
  check_input(t);
  if (t.h < 2)
    throw precondition_error("reduce_genus wants target genus >= 2");
  ClassExpr out;
  for (const auto& [a, c] : refined_canonicalize(t).t)
    out.add(genus_inner(a), c);
  return out;
}

ClassExpr Reducer::reduce_balanced(const BracketTerm& t) {
  check_input(t);
  ClassExpr e = canonicalize(t);
  for (const auto& [a, c] : e.t) {
    if (!a->is_bracket() || a->br->h != 1)
      throw precondition_error("reduce_balanced wants genus-1 bracket atoms");
    auto [na, nb] = odd_type(*a->br);
    if (na != nb || na == 0)
      throw precondition_error(
          "reduce_balanced wants balanced odd type (k,k), k >= 1");
  }
  return route_expr(e);
}

}  // namespace gwpf
