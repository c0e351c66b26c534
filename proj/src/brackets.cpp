#include "gwpf/brackets.hpp"

#include <algorithm>

namespace gwpf {

RefinedDescendent& RefinedDescendent::add(int q, const Rat& v) {
  if (q < 0) throw input_error("descendent level < 0");
  if (v == 0) return *this;
  auto it = c.find(q);
  if (it == c.end()) {
    c.emplace(q, v);
  } else {
    it->second += v;
    if (it->second == 0) c.erase(it);
  }
  return *this;
}

int RefinedDescendent::pure_level() const {
  if (!is_pure()) throw internal_error("pure_level on composite payload");
  return c.begin()->first;
}

std::string RefinedDescendent::to_string() const {
  if (is_pure()) return std::to_string(pure_level());
  std::string s = "{";
  bool first = true;
  for (auto& [q, v] : c) {
    if (!first) s += ",";
    first = false;
    s += std::to_string(q) + ":" + rat_to_string(v);
  }
  return s + "}";
}

int cmp(const RefinedDescendent& a, const RefinedDescendent& b) {
  auto ia = a.c.begin(), ib = b.c.begin();
  for (; ia != a.c.end() && ib != b.c.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
    if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
  }
  if (ia != a.c.end()) return 1;
  if (ib != b.c.end()) return -1;
  return 0;
}

int cmp(const CohSymbol& a, const CohSymbol& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  if (a.handle != b.handle) return a.handle < b.handle ? -1 : 1;
  return 0;
}

int cmp(const Partition& a, const Partition& b) {
  size_t n = std::min(a.parts.size(), b.parts.size());
  for (size_t i = 0; i < n; ++i)
    if (a.parts[i] != b.parts[i]) return a.parts[i] > b.parts[i] ? -1 : 1;
  if (a.parts.size() != b.parts.size())
    return a.parts.size() > b.parts.size() ? -1 : 1;
  return 0;
}

int cmp(const Insertion& a, const Insertion& b) {
  if (int c = cmp(a.psi, b.psi)) return c;
  return cmp(a.sym, b.sym);
}

BracketTerm& BracketTerm::tau(int level, CohSymbol s) {
  ins.push_back({RefinedDescendent::pure(level), CohVector(s)});
  return *this;
}
BracketTerm& BracketTerm::tau(const RefinedDescendent& psi, CohSymbol s) {
  ins.push_back({psi, CohVector(s)});
  return *this;
}
BracketTerm& BracketTerm::tau(const RefinedDescendent& psi, const CohVector& v) {
  ins.push_back({psi, v});
  return *this;
}
BracketTerm& BracketTerm::rel(const Partition& p) {
  profiles.push_back(p);
  return *this;
}

void BracketTerm::validate() const {
  if (h < 0) throw input_error("target genus < 0");
  if (d < 0) throw input_error("degree < 0");
  if (sign != 1 && sign != -1) throw input_error("sign must be +-1");
  if (d == 0 && !profiles.empty())
    throw input_error("degree 0 with nonempty relative profile");
  for (auto& p : profiles)
    if (p.size() != d)
      throw input_error("relative profile " + p.to_string() + " has size " +
                        std::to_string(p.size()) + " != d=" + std::to_string(d));
  for (auto& i : ins)
    for (auto& [s, v] : i.cls.c)
      if (s.odd() && (s.handle < 1 || s.handle > h))
        throw input_error("class symbol " + s.to_string() +
                          " needs handle index in 1.." + std::to_string(h));
}

bool Bracket::pure() const {
  for (auto& i : ins)
    if (!i.psi.is_pure()) return false;
  return true;
}

bool Bracket::all_even() const {
  for (auto& i : ins)
    if (i.odd()) return false;
  return true;
}

std::string Bracket::to_string() const {
  std::string s = "[";
  for (auto& i : ins) {
    s += " t";
    if (i.psi.is_pure())
      s += std::to_string(i.psi.pure_level());
    else
      s += i.psi.to_string();
    s += "(" + i.sym.to_string() + ")";
  }
  if (!profiles.empty()) {
    s += " |";
    for (size_t i = 0; i < profiles.size(); ++i)
      s += (i ? ", " : " ") + profiles[i].to_string();
  }
  s += " ]_{r=" + std::to_string(r) + ", h=" + std::to_string(h) +
       ", d=" + std::to_string(d) + "}";
  return s;
}

int cmp(const Bracket& a, const Bracket& b) {
  if (a.h != b.h) return a.h < b.h ? -1 : 1;
  if (a.d != b.d) return a.d < b.d ? -1 : 1;
  if (a.r != b.r) return a.r < b.r ? -1 : 1;
  if (a.profiles.size() != b.profiles.size())
    return a.profiles.size() < b.profiles.size() ? -1 : 1;
  for (size_t i = 0; i < a.profiles.size(); ++i)
    if (int c = cmp(a.profiles[i], b.profiles[i])) return c;
  if (a.ins.size() != b.ins.size()) return a.ins.size() < b.ins.size() ? -1 : 1;
  for (size_t i = 0; i < a.ins.size(); ++i)
    if (int c = cmp(a.ins[i], b.ins[i])) return c;
  return 0;
}

GenusResult genus_of(const Bracket& t) {
  if (!t.pure()) throw precondition_error("genus_of requires a pure bracket");
  // 4g = 2r + 4 - 2d(2-2h) - 2*sum(len-d) + 2*sum(k) + sum(codim2)
  long g4 = 2 * t.r + 4 - 2 * static_cast<long>(t.d) * (2 - 2 * t.h);
  for (auto& p : t.profiles) g4 -= 2 * (p.length() - t.d);
  for (auto& i : t.ins) g4 += 2 * i.psi.pure_level() + i.sym.codim2();
  GenusResult res;
  if (((g4 % 4) + 4) % 4 != 0) {
    res.half = true;
  } else {
    res.g = g4 / 4;
  }
  return res;
}

GenusResult genus_of(const BracketTerm& t) {
  t.validate();
  Bracket b;
  b.h = t.h;
  b.d = t.d;
  b.r = t.r;
  b.profiles = t.profiles;
  for (auto& i : t.ins) {
    if (!i.psi.is_pure() || i.cls.c.size() != 1 || i.cls.c.begin()->second != 1)
      throw precondition_error("genus_of requires a pure term");
    b.ins.push_back({i.psi, i.cls.c.begin()->first});
  }
  return genus_of(b);
}

std::pair<int, int> odd_type(const Bracket& t) {
  int a = 0, b = 0;
  for (auto& i : t.ins) {
    if (i.sym.kind == CohKind::Alpha) ++a;
    if (i.sym.kind == CohKind::Beta) ++b;
  }
  return {a, b};
}

std::string Atom::to_string() const {
  if (br) return br->to_string();
  return "glue{" + std::to_string(glue->pairs) + "}(" +
         glue->left->to_string() + ", " + glue->right->to_string() + ")";
}

int cmp(const Atom& a, const Atom& b) {
  int ka = a.is_glue() ? 1 : 0, kb = b.is_glue() ? 1 : 0;
  if (ka != kb) return ka < kb ? -1 : 1;
  if (!ka) return cmp(*a.br, *b.br);
  if (a.glue->pairs != b.glue->pairs)
    return a.glue->pairs < b.glue->pairs ? -1 : 1;
  if (int c = cmp(*a.glue->left, *b.glue->left)) return c;
  return cmp(*a.glue->right, *b.glue->right);
}

AtomPtr make_atom(Bracket b) {
  auto a = std::make_shared<Atom>();
  a->br = std::move(b);
  return a;
}

AtomPtr make_glue(AtomPtr l, AtomPtr r, int pairs) {
  if (pairs < 1) throw input_error("glue needs pairs >= 1");
  auto a = std::make_shared<Atom>();
  a->glue = Atom::GlueData{std::move(l), std::move(r), pairs};
  return a;
}

ClassExpr ClassExpr::single(AtomPtr a, const Rat& c) {
  ClassExpr e;
  e.add(a, c);
  return e;
}

ClassExpr& ClassExpr::add(const AtomPtr& a, const Rat& c) {
  if (c == 0) return *this;
  auto it = t.find(a);
  if (it == t.end()) {
    t.emplace(a, c);
  } else {
    it->second += c;
    if (it->second == 0) t.erase(it);
  }
  return *this;
}

ClassExpr& ClassExpr::add(const ClassExpr& e, const Rat& c) {
  for (auto& [a, v] : e.t) add(a, v * c);
  return *this;
}

ClassExpr ClassExpr::operator+(const ClassExpr& o) const {
  ClassExpr r = *this;
  r.add(o, 1);
  return r;
}
ClassExpr ClassExpr::operator-(const ClassExpr& o) const {
  ClassExpr r = *this;
  r.add(o, -1);
  return r;
}
ClassExpr ClassExpr::operator*(const Rat& k) const {
  ClassExpr r;
  if (k == 0) return r;
  for (auto& [a, v] : t) r.t.emplace(a, v * k);
  return r;
}

bool ClassExpr::operator==(const ClassExpr& o) const {
  if (t.size() != o.t.size()) return false;
  auto ia = t.begin(), ib = o.t.begin();
  for (; ia != t.end(); ++ia, ++ib) {
    if (cmp(*ia->first, *ib->first) != 0) return false;
    if (ia->second != ib->second) return false;
  }
  return true;
}

std::string ClassExpr::to_string() const {
  if (t.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& [a, v] : t) {
    Rat av = v < 0 ? Rat(-v) : v;
    if (first) {
      if (v < 0) s += "- ";
    } else {
      s += v < 0 ? " - " : " + ";
    }
    first = false;
    if (av != 1) s += rat_to_string(av) + "*";
    s += a->to_string();
  }
  return s;
}

ClassExpr glue(const ClassExpr& l, const ClassExpr& r, int pairs) {
  ClassExpr out;
  for (auto& [la, lc] : l.t)
    for (auto& [ra, rc] : r.t) out.add(make_glue(la, ra, pairs), lc * rc);
  return out;
}

// Sorts insertions, tracking the Koszul sign of transpositions of odd pairs.
// Returns 0 when two identical odd insertions collide (the term vanishes
// under the signed marking identification).
static int koszul_sort(std::vector<Insertion>& v) {
  int sign = 1;
  for (size_t i = 1; i < v.size(); ++i)
    for (size_t j = i; j > 0 && cmp(v[j], v[j - 1]) < 0; --j) {
      if (v[j].odd() && v[j - 1].odd()) sign = -sign;
      std::swap(v[j], v[j - 1]);
    }
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i].odd() && v[i - 1].odd() && v[i] == v[i - 1]) return 0;
  return sign;
}

// Builds the canonical atom for one fully-chosen insertion list.
static void emit_term(const BracketTerm& t, std::vector<Insertion> chosen,
                      const Rat& coeff, ClassExpr& out) {
  if (t.r < 0) return;  // negative homological dimension: zero class
  int sgn = koszul_sort(chosen);
  if (sgn == 0) return;
  Bracket b;
  b.h = t.h;
  b.d = t.d;
  b.r = t.r;
  b.profiles = t.profiles;
  std::sort(b.profiles.begin(), b.profiles.end(),
            [](const Partition& a, const Partition& c) { return cmp(a, c) < 0; });
  b.ins = std::move(chosen);
  if (b.pure() && genus_of(b).half) return;
  out.add(make_atom(std::move(b)), coeff * sgn);
}

static void expand_rec(const BracketTerm& t, size_t idx, bool expand_psi,
                       std::vector<Insertion>& cur, const Rat& coeff,
                       ClassExpr& out) {
  if (idx == t.ins.size()) {
    emit_term(t, cur, coeff, out);
    return;
  }
  const RawInsertion& ri = t.ins[idx];
  for (auto& [sym, cv] : ri.cls.c) {
    if (expand_psi) {
      for (auto& [q, cq] : ri.psi.c) {
        cur.push_back({RefinedDescendent::pure(q), sym});
        expand_rec(t, idx + 1, expand_psi, cur, coeff * cv * cq, out);
        cur.pop_back();
      }
    } else {
      if (ri.psi.is_zero()) continue;
      cur.push_back({ri.psi, sym});
      expand_rec(t, idx + 1, expand_psi, cur, coeff * cv, out);
      cur.pop_back();
    }
  }
}

static ClassExpr canon_impl(const BracketTerm& t, bool expand_psi) {
  t.validate();
  ClassExpr out;
  std::vector<Insertion> cur;
  expand_rec(t, 0, expand_psi, cur, Rat(t.sign), out);
  return out;
}

ClassExpr refined_canonicalize(const BracketTerm& t) { return canon_impl(t, false); }
ClassExpr canonicalize(const BracketTerm& t) { return canon_impl(t, true); }

ClassExpr expand_refined(const ClassExpr& e) {
  ClassExpr out;
  for (auto& [a, c] : e.t) {
    if (a->is_glue()) {
      ClassExpr l = expand_refined(ClassExpr::single(a->glue->left));
      ClassExpr r = expand_refined(ClassExpr::single(a->glue->right));
      out.add(glue(l, r, a->glue->pairs), c);
    } else {
      const Bracket& b = *a->br;
      if (b.pure()) {
        if (b.r >= 0 && !genus_of(b).half) out.add(a, c);
        continue;
      }
      BracketTerm t(b.h, b.d, b.r);
      t.profiles = b.profiles;
      for (auto& i : b.ins) t.tau(i.psi, i.sym);
      out.add(canonicalize(t), c);
    }
  }
  return out;
}

}  // namespace gwpf
