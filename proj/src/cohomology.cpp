#include "gwpf/cohomology.hpp"

namespace gwpf {

std::string CohSymbol::to_string() const {
  switch (kind) {
    case CohKind::One: return "1";
    case CohKind::Omega: return "w";
    case CohKind::Alpha: return handle == 1 ? "a" : "a" + std::to_string(handle);
    case CohKind::Beta: return handle == 1 ? "b" : "b" + std::to_string(handle);
  }
  return "?";
}

CohVector& CohVector::add(CohSymbol s, const Rat& v) {
  if (v == 0) return *this;
  auto it = c.find(s);
  if (it == c.end()) {
    c.emplace(s, v);
  } else {
    it->second += v;
    if (it->second == 0) c.erase(it);
  }
  return *this;
}

CohVector CohVector::operator+(const CohVector& o) const {
  CohVector r = *this;
  for (auto& [s, v] : o.c) r.add(s, v);
  return r;
}

CohVector CohVector::operator*(const Rat& k) const {
  CohVector r;
  if (k == 0) return r;
  for (auto& [s, v] : c) r.c[s] = v * k;
  return r;
}

std::string CohVector::to_string() const {
  if (c.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& [sym, v] : c) {
    if (!first) s += " + ";
    first = false;
    if (v != 1) s += rat_to_string(v) + "*";
    s += sym.to_string();
  }
  return s;
}

CohVector cup(CohSymbol a, CohSymbol b) {
  CohVector r;
  if (a.kind == CohKind::One) return CohVector(b);
  if (b.kind == CohKind::One) return CohVector(a);
  if (a.kind == CohKind::Alpha && b.kind == CohKind::Beta && a.handle == b.handle)
    r.add(CohSymbol::omega(), 1);
  else if (a.kind == CohKind::Beta && b.kind == CohKind::Alpha &&
           a.handle == b.handle)
    r.add(CohSymbol::omega(), -1);
  return r;  // everything else vanishes
}

CohVector cup(const CohVector& a, const CohVector& b) {
  CohVector r;
  for (auto& [sa, va] : a.c)
    for (auto& [sb, vb] : b.c) {
      CohVector p = cup(sa, sb);
      for (auto& [sp, vp] : p.c) r.add(sp, vp * va * vb);
    }
  return r;
}

CohVector apply_sl2(const Mat2& m, int handle, const CohVector& v) {
  long det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (det != 1) throw input_error("apply_sl2: determinant must be 1");
  CohVector r;
  for (auto& [s, coef] : v.c) {
    if (s.handle == handle && s.kind == CohKind::Alpha) {
      r.add(CohSymbol::alpha(handle), coef * m[0][0]);
      r.add(CohSymbol::beta(handle), coef * m[1][0]);
    } else if (s.handle == handle && s.kind == CohKind::Beta) {
      r.add(CohSymbol::alpha(handle), coef * m[0][1]);
      r.add(CohSymbol::beta(handle), coef * m[1][1]);
    } else {
      r.add(s, coef);
    }
  }
  return r;
}

CohVector monodromy_phi(const CohVector& v) { return apply_sl2(kPhi, 1, v); }

TensorExpr& TensorExpr::add(const std::vector<CohSymbol>& w, const Rat& v) {
  if (v == 0) return *this;
  if (arity == 0 && words.empty())
    arity = static_cast<int>(w.size());
  else if (static_cast<int>(w.size()) != arity)
    throw input_error("TensorExpr: mixed word lengths");
  auto it = words.find(w);
  if (it == words.end()) {
    words.emplace(w, v);
  } else {
    it->second += v;
    if (it->second == 0) words.erase(it);
  }
  return *this;
}

std::string TensorExpr::to_string() const {
  if (words.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& [w, v] : words) {
    if (!first) s += " + ";
    first = false;
    if (v != 1) s += rat_to_string(v) + "*";
    for (size_t i = 0; i < w.size(); ++i) {
      if (i) s += "(x)";
      s += w[i].to_string();
    }
  }
  return s;
}

TensorExpr diagonal_even(int r) {
  if (r < 2) throw input_error("diagonal requires r >= 2");
  TensorExpr e;
  for (int i = 0; i < r; ++i) {
    std::vector<CohSymbol> w(r, CohSymbol::omega());
    w[i] = CohSymbol::one();
    e.add(w, 1);
  }
  return e;
}

TensorExpr diagonal_odd(int r) {
  if (r < 2) throw input_error("diagonal requires r >= 2");
  TensorExpr e;
  e.arity = r;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      std::vector<CohSymbol> w(r, CohSymbol::omega());
      w[i] = CohSymbol::alpha(1);
      w[j] = CohSymbol::beta(1);
      e.add(w, -1);
      w[i] = CohSymbol::beta(1);
      w[j] = CohSymbol::alpha(1);
      e.add(w, 1);
    }
  return e;
}

TensorExpr diagonal(int r) {
  TensorExpr e = diagonal_even(r);
  TensorExpr o = diagonal_odd(r);
  for (auto& [w, v] : o.words) e.add(w, v);
  return e;
}

}  // namespace gwpf
