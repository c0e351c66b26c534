#include "gwpf/p1eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace gwpf {

// ---------------------------------------------------------------------------
// Bernoulli / zeta

static Rat bernoulli_minus(long n) {
  // B_0 = 1, B_1 = -1/2 convention; cached ascending recurrence
  static std::vector<Rat> cache{1};
  while ((long)cache.size() <= n) {
    long m = cache.size();
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    Rat s = 0;
    for (long j = 0; j < m; ++j) s += Rat(binomial(m + 1, j)) * cache[j];
    cache.push_back(-s / Rat(binomial(m + 1, m)));
  }
  return cache[n];
}

Rat zeta_neg(long n) {
  if (n < 0) throw input_error("zeta_neg wants n >= 0");
  if (n == 0) return Rat(-1, 2);
  return -bernoulli_minus(n + 1) / Rat(n + 1);
}

Rat pbar(long k, const Partition& lam) {
  if (k < 1) throw input_error("pbar wants k >= 1");
  Rat s = 0;
  for (size_t i = 0; i < lam.parts.size(); ++i) {
    Rat shifted = Rat(lam.parts[i]) - Rat(i + 1) + Rat(1, 2);
    Rat base = -Rat(i + 1) + Rat(1, 2);
    s += rat_pow(shifted, k) - rat_pow(base, k);
  }
  // completion constant (1 - 2^{-k}) zeta(-k)
  s += (1 - Rat(Int(1), Int(1) << (unsigned)k)) * zeta_neg(k);
  return s;
}

// ---------------------------------------------------------------------------
// Characters of S_d via border strips on beta-numbers

static Int mn_char(std::vector<int>& beta, const std::vector<int>& mu,
                   size_t idx) {
  if (idx == mu.size()) return 1;
  int m = mu[idx];
  Int total = 0;
  for (size_t bi = 0; bi < beta.size(); ++bi) {
    int b = beta[bi];
    if (b < m) continue;
    int target = b - m;
    int height = 0;
    bool occupied = false;
    for (int c : beta) {
      if (c == target) {
        occupied = true;
        break;
      }
      if (c > target && c < b) ++height;
    }
    if (occupied) continue;
    beta[bi] = target;
    Int sub = mn_char(beta, mu, idx + 1);
    beta[bi] = b;
    total += (height % 2) ? -sub : sub;
  }
  return total;
}

static CharacterTable build_characters(int d) {
  CharacterTable T;
  T.d = d;
  T.parts = enumerate_partitions(d);
  size_t n = T.parts.size();
  T.chi.assign(n, std::vector<Int>(n));
  for (size_t li = 0; li < n; ++li) {
    // beta numbers of lambda padded to length d
    std::vector<int> beta(d);
    for (int i = 0; i < d; ++i) {
      int lam_i = i < T.parts[li].length() ? T.parts[li].parts[i] : 0;
      beta[i] = lam_i + (d - 1 - i);
    }
    for (size_t mi = 0; mi < n; ++mi)
      T.chi[li][mi] = mn_char(beta, T.parts[mi].parts, 0);
  }

  // sanity: positive dimensions, Burnside, row orthogonality
  Int burnside = 0;
  for (size_t li = 0; li < n; ++li) {
    if (T.dim(li) <= 0) throw internal_error("character table: bad dimension");
    burnside += T.dim(li) * T.dim(li);
  }
  if (burnside != factorial(d))
    throw internal_error("character table: dimension sum check failed");
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b) {
      Rat s = 0;
      for (size_t mi = 0; mi < n; ++mi)
        s += Rat(T.chi[a][mi] * T.chi[b][mi]) / Rat(zfactor(T.parts[mi]));
      if (s != Rat(a == b ? 1 : 0))
        throw internal_error("character table: orthogonality check failed");
    }
  return T;
}

const CharacterTable& characters(int d) {
  if (d < 1) throw input_error("characters wants d >= 1");
  if (d > 8) throw resource_error("character tables are capped at degree 8");
  static std::map<int, CharacterTable> cache;
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, build_characters(d)).first;
  return it->second;
}

size_t CharacterTable::index_of(const Partition& p) const {
  for (size_t i = 0; i < parts.size(); ++i)
    if (parts[i] == p) return i;
  throw input_error("partition of the wrong degree: " + p.to_string());
}

// ---------------------------------------------------------------------------
// Hurwitz oracles

Rat hurwitz_frobenius(int d, const std::vector<Partition>& profiles) {
  const CharacterTable& T = characters(d);
  for (auto& p : profiles)
    if (p.size() != d) throw input_error("profile degree mismatch");
  long m = profiles.size();
  Rat total = 0;
  Rat fd = Rat(factorial(d));
  for (size_t li = 0; li < T.parts.size(); ++li) {
    Rat term = rat_pow(Rat(T.dim(li)) / fd, 2 - m);
    for (auto& eta : profiles)
      term *= Rat(T.chi[li][T.index_of(eta)]) / Rat(zfactor(eta));
    total += term;
  }
  return total;
}

static Partition cycle_type(const std::vector<int>& p) {
  std::vector<bool> seen(p.size(), false);
  std::vector<int> cyc;
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    cyc.push_back(len);
  }
  std::sort(cyc.rbegin(), cyc.rend());
  return Partition(cyc);
}

Rat hurwitz_bruteforce(int d, const std::vector<Partition>& profiles) {
  if (d < 1) throw input_error("hurwitz_bruteforce wants d >= 1");
  if (d > 6) throw resource_error("brute-force Hurwitz counts are capped at degree 6");
  for (auto& p : profiles)
    if (p.size() != d) throw input_error("profile degree mismatch");

  std::vector<std::vector<int>> perms;
  std::vector<int> p(d);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < perms.size(); ++i) index[perms[i]] = (int)i;

  // identity is the first permutation in lex order
  std::vector<Int> count(perms.size(), 0);
  count[0] = 1;
  for (auto& eta : profiles) {
    std::vector<int> cls;
    for (size_t i = 0; i < perms.size(); ++i)
      if (cycle_type(perms[i]) == eta) cls.push_back((int)i);
    std::vector<Int> next(perms.size(), 0);
    std::vector<int> prod(d);
    for (size_t g = 0; g < perms.size(); ++g) {
      if (count[g] == 0) continue;
      for (int x : cls) {
        for (int i = 0; i < d; ++i) prod[i] = perms[g][perms[x][i]];
        next[index[prod]] += count[g];
      }
    }
    count = std::move(next);
  }
  return Rat(count[0]) / Rat(factorial(d));
}

// ---------------------------------------------------------------------------
// r = 0 evaluation over a target curve

namespace {
struct EvenIns {
  long k = 0;
  bool omega = false;  // false: identity class
};
}  // namespace

static Rat eval_even_core(int h, int d, const std::vector<Partition>& profiles,
                          std::vector<EvenIns> ins) {
  long m = profiles.size();
  for (size_t i = 0; i < ins.size(); ++i) {
    if (ins[i].omega) continue;
    long q = ins[i].k;
    std::vector<EvenIns> rest = ins;
    rest.erase(rest.begin() + i);
    if (q == 0) {
      // string: lower every remaining descendent in turn
      Rat sum = 0;
      for (size_t j = 0; j < rest.size(); ++j) {
        if (rest[j].k == 0) continue;
        auto low = rest;
        low[j].k -= 1;
        sum += eval_even_core(h, d, profiles, std::move(low));
      }
      return sum;
    }
    if (q == 1) {
      // dilaton; the factor is forced by the per-component dimension counts
      Rat f = Rat(d) * Rat(m - 2 + 2 * h);
      for (auto& e : rest) f += Rat(e.k + (e.omega ? 1 : 0));
      return f * eval_even_core(h, d, profiles, std::move(rest));
    }
    throw precondition_error(
        "identity descendents above level 1 are not evaluable");
  }

  const CharacterTable& T = characters(d);
  Rat fd = Rat(factorial(d));
  Rat total = 0;
  for (size_t li = 0; li < T.parts.size(); ++li) {
    Rat term = rat_pow(Rat(T.dim(li)) / fd, 2 - 2 * h - m);
    for (auto& eta : profiles)
      term *= Rat(T.chi[li][T.index_of(eta)]) / Rat(zfactor(eta));
    for (auto& e : ins)
      term *= pbar(e.k + 1, T.parts[li]) / Rat(factorial(e.k + 1));
    total += term;
  }
  return total;
}

static Rat eval_curve_relative(int h, const Bracket& b) {
  if (b.h != h) throw internal_error("eval_curve_relative: genus mismatch");
  if (b.d < 1) throw input_error("evaluation wants degree >= 1");
  if (b.r != 0)
    throw precondition_error("only r = 0 brackets have numeric values");
  if (!b.pure())
    throw precondition_error("evaluation wants pure descendent payloads");
  for (auto& ins : b.ins)
    if (ins.sym.odd())
      throw precondition_error("odd insertions are not directly evaluable");
  if (genus_of(b).half) return 0;

  std::vector<EvenIns> ins;
  for (auto& i : b.ins)
    ins.push_back({(long)i.psi.pure_level(), i.sym.kind == CohKind::Omega});
  return eval_even_core(h, b.d, b.profiles, std::move(ins));
}

Rat eval_p1_relative(const Bracket& b) {
  if (b.h != 0)
    throw precondition_error("eval_p1_relative wants a genus-zero target");
  return eval_curve_relative(0, b);
}

Rat eval_elliptic_even(const Bracket& b) {
  if (b.h != 1)
    throw precondition_error("eval_elliptic_even wants a genus-one target");
  return eval_curve_relative(1, b);
}

Rat eval_curve_even(const Bracket& b) { return eval_curve_relative(b.h, b); }

static Rat evaluate_atom(const Atom& a) {
  if (a.is_glue())
    return evaluate_atom(*a.glue->left) * evaluate_atom(*a.glue->right);
  if (a.br->h != 0)
    throw precondition_error(
        "only genus-zero target brackets evaluate directly; reduce first");
  return eval_p1_relative(*a.br);
}

Rat evaluate_expr(const ClassExpr& e) {
  ClassExpr x = expand_refined(e);
  Rat total = 0;
  for (auto& [atom, c] : x.t) total += c * evaluate_atom(*atom);
  return total;
}

// ---------------------------------------------------------------------------
// Pairing functions gamma_v and the descendent-system search

Rat gamma_value(const RefinedDescendent& tilde, long v, const Partition& eta) {
  if (v < 0) throw input_error("gamma_value wants v >= 0");
  int d = eta.size();
  const CharacterTable& T = characters(d);
  // the parity guard keeps exactly the tuples with
  //   sum q = d + len(eta) + v  (mod 2)
  int want = (int)((d + eta.length() + v) % 2);
  Rat fd = Rat(factorial(d));
  size_t col = T.index_of(eta);
  Rat total = 0;
  for (size_t li = 0; li < T.parts.size(); ++li) {
    Rat even_part = 0, odd_part = 0;
    for (auto& [q, cq] : tilde.c) {
      Rat piece = cq * pbar(q + 1, T.parts[li]) / Rat(factorial(q + 1));
      (q % 2 == 0 ? even_part : odd_part) += piece;
    }
    Rat plus = rat_pow(even_part + odd_part, v);
    Rat minus = rat_pow(even_part - odd_part, v);
    Rat branch = (want == 0) ? Rat((plus + minus) / 2) : Rat((plus - minus) / 2);
    total += (Rat(T.dim(li)) / fd) * (Rat(T.chi[li][col]) / Rat(zfactor(eta))) *
             branch;
  }
  return total;
}

Rat gamma_value_expanded(const RefinedDescendent& tilde, long v,
                         const Partition& eta) {
  // multiset expansion of the v-fold payload, each term through the pipeline
  std::vector<std::pair<int, Rat>> supp(tilde.c.begin(), tilde.c.end());
  Rat total = 0;
  std::vector<int> pick;  // chosen levels so far
  auto rec = [&](auto&& self, size_t si, long left, Rat coeff,
                 long slots_left) -> void {
    if (si == supp.size()) {
      if (left != 0) return;
      Bracket b;
      b.h = 0;
      b.d = eta.size();
      b.r = 0;
      b.profiles = {eta};
      for (int q : pick) b.ins.push_back({RefinedDescendent::pure(q),
                                          CohSymbol::omega()});
      total += coeff * eval_p1_relative(b);
      return;
    }
    for (long mult = 0; mult <= left; ++mult) {
      Rat c2 = coeff * Rat(binomial(slots_left, mult)) *
               rat_pow(supp[si].second, mult);
      for (long t = 0; t < mult; ++t) pick.push_back(supp[si].first);
      self(self, si + 1, left - mult, c2, slots_left - mult);
      for (long t = 0; t < mult; ++t) pick.pop_back();
    }
  };
  rec(rec, 0, v, 1, v);
  return total;
}

Rat rat_det(std::vector<std::vector<Rat>> m) {
  size_t n = m.size();
  Rat det = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (size_t r2 = col + 1; r2 < n; ++r2) {
      if (m[r2][col] == 0) continue;
      Rat f = m[r2][col] / m[col][col];
      for (size_t c2 = col; c2 < n; ++c2) m[r2][c2] -= f * m[col][c2];
    }
  }
  return det;
}

TildeData find_tilde_tau(int d, long q_cap, long v_cap, long q_min) {
  if (d < 1) throw input_error("find_tilde_tau wants d >= 1");
  if (q_min < 0 || q_min > q_cap)
    throw input_error("find_tilde_tau wants 0 <= q_min <= q_cap");
  std::vector<Partition> cols = enumerate_partitions(d);
  long n = (long)cols.size();
  if (v_cap < 0) v_cap = 2 * n;

  auto try_candidate = [&](const RefinedDescendent& cand)
      -> std::pair<bool, TildeData> {
    std::vector<long> rows;
    std::vector<std::vector<Rat>> sel;
    std::vector<std::vector<Rat>> red;  // row-echelon shadows of sel
    for (long v = 0; v <= v_cap && (long)rows.size() < n; ++v) {
      std::vector<Rat> row(n);
      for (long j = 0; j < n; ++j)
        row[j] = Rat(zfactor(cols[j])) * gamma_value(cand, v, cols[j]);
      std::vector<Rat> r2 = row;
      for (auto& e : red) {
        size_t piv = 0;
        while (piv < e.size() && e[piv] == 0) ++piv;
        if (piv < e.size() && r2[piv] != 0) {
          Rat f = r2[piv] / e[piv];
          for (size_t c2 = piv; c2 < e.size(); ++c2) r2[c2] -= f * e[c2];
        }
      }
      if (std::all_of(r2.begin(), r2.end(), [](const Rat& x) { return x == 0; }))
        continue;
      rows.push_back(v);
      sel.push_back(row);
      red.push_back(r2);
      // keep shadows sorted by pivot so elimination above stays triangular
      std::sort(red.begin(), red.end(), [](auto& a, auto& b) {
        size_t pa = 0, pb = 0;
        while (pa < a.size() && a[pa] == 0) ++pa;
        while (pb < b.size() && b[pb] == 0) ++pb;
        return pa < pb;
      });
    }
    if ((long)rows.size() < n) return {false, {}};
    TildeData td;
    td.d = d;
    td.tilde = cand;
    td.rows = rows;
    td.cols = cols;
    td.mat = sel;
    td.det = rat_det(sel);
    if (td.det == 0) throw internal_error("find_tilde_tau: rank bookkeeping lied");
    return {true, td};
  };

  for (long Q = q_min; Q <= q_cap; ++Q) {
    RefinedDescendent cand;
    for (long q = 0; q <= Q; ++q) cand.add((int)q, 1);
    auto [ok, td] = try_candidate(cand);
    if (ok) return td;
  }
  for (long bump = 2; bump <= 4; ++bump)
    for (long Q = std::max(q_min, 1L); Q <= q_cap; ++Q) {
      RefinedDescendent cand;
      for (long q = 0; q < Q; ++q) cand.add((int)q, 1);
      cand.add((int)Q, bump);
      auto [ok, td] = try_candidate(cand);
      if (ok) return td;
    }
  throw determination_error(
      "no invertible descendent pairing system within the configured caps");
}

}  // namespace gwpf
