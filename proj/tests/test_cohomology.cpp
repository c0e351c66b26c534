#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gwpf/cohomology.hpp"
#include "gwpf/common.hpp"

using namespace gwpf;

static CohSymbol A = CohSymbol::alpha(1);
static CohSymbol B = CohSymbol::beta(1);
static CohSymbol W = CohSymbol::omega();
static CohSymbol U = CohSymbol::one();

TEST_CASE("cup products") {
  CHECK(cup(A, B) == CohVector(W));
  CHECK(cup(B, A) == CohVector(W) * Rat(-1));
  CHECK(cup(U, W) == CohVector(W));
  CHECK(cup(A, A).is_zero());
  CHECK(cup(W, W).is_zero());
  CHECK(cup(W, A).is_zero());
  CHECK(cup(CohSymbol::alpha(1), CohSymbol::beta(2)).is_zero());
  CHECK(cup(CohSymbol::alpha(2), CohSymbol::beta(2)) == CohVector(W));
}

TEST_CASE("parity and codimension bookkeeping") {
  CHECK(!U.odd());
  CHECK(!W.odd());
  CHECK(A.odd());
  CHECK(B.odd());
  CHECK(U.codim2() == 0);
  CHECK(W.codim2() == 2);
  CHECK(A.codim2() == 1);
  CHECK(B.codim2() == 1);
}

TEST_CASE("apply_sl2: the monodromy matrix") {
  CHECK(monodromy_phi(CohVector(A)) == CohVector(A));
  CohVector ab;
  ab.add(A, 1).add(B, 1);
  CHECK(monodromy_phi(CohVector(B)) == ab);
  CHECK(monodromy_phi(CohVector(W)) == CohVector(W));
  CHECK(monodromy_phi(CohVector(U)) == CohVector(U));
  Mat2 id{{{1, 0}, {0, 1}}};
  CHECK(apply_sl2(id, 1, ab) == ab);
  Mat2 bad{{{2, 0}, {0, 1}}};
  CHECK_THROWS_AS(apply_sl2(bad, 1, ab), input_error);
}

TEST_CASE("apply_sl2 is a group action") {
  std::mt19937 rng(12345);
  auto rand_sl2 = [&]() {
    // random product of the standard generators
    Mat2 m{{{1, 0}, {0, 1}}};
    auto mul = [](const Mat2& x, const Mat2& y) {
      Mat2 r{};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
      return r;
    };
    Mat2 t{{{1, 1}, {0, 1}}}, s{{{0, -1}, {1, 0}}};
    for (int i = 0; i < 6; ++i) m = mul(m, (rng() & 1) ? t : s);
    return m;
  };
  auto mul = [](const Mat2& x, const Mat2& y) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
    return r;
  };
  for (int trial = 0; trial < 30; ++trial) {
    Mat2 m1 = rand_sl2(), m2 = rand_sl2();
    CohVector v;
    v.add(A, Rat(static_cast<long>(rng() % 7) - 3))
        .add(B, Rat(static_cast<long>(rng() % 7) - 3))
        .add(W, 2);
    CHECK(apply_sl2(m2, 1, apply_sl2(m1, 1, v)) == apply_sl2(mul(m2, m1), 1, v));
  }
}

TEST_CASE("diagonal: displayed r=2 expansion") {
  TensorExpr d2 = diagonal(2);
  TensorExpr expect;
  expect.add({U, W}, 1);
  expect.add({W, U}, 1);
  expect.add({A, B}, -1);
  expect.add({B, A}, 1);
  CHECK(d2.words == expect.words);
}

TEST_CASE("diagonal: r=3 structure") {
  TensorExpr d3 = diagonal(3);
  CHECK(d3.term_count() == 3 + 2 * 3);
  CHECK(d3.words.at({A, B, W}) == -1);
  CHECK(d3.words.at({B, A, W}) == 1);
  CHECK(d3.words.at({B, W, A}) == 1);   // slot pair (1,3) with +beta,alpha
  CHECK(d3.words.at({A, W, B}) == -1);
  CHECK(d3.words.count({B, W, B}) == 0);  // the two-beta word never appears
  CHECK(d3.words.at({U, W, W}) == 1);
}

TEST_CASE("diagonal: term count r + 2C(r,2) and codimension, r <= 6") {
  for (int r = 2; r <= 6; ++r) {
    TensorExpr d = diagonal(r);
    CHECK(static_cast<long>(d.term_count()) == r + r * (r - 1));
    for (auto& [w, c] : d.words) {
      int codim2 = 0;
      for (auto& s : w) codim2 += s.codim2();
      CHECK(codim2 == 2 * (r - 1));
    }
  }
  CHECK_THROWS_AS(diagonal(1), input_error);
}

// Swapping two slots with the Koszul sign for odd symbols fixes the diagonal.
// The sign counts odd-odd pairs whose relative order flips, including pairs
// formed with odd symbols strictly between the swapped slots.
TEST_CASE("diagonal: signed slot-swap symmetry, r <= 6") {
  for (int r = 2; r <= 6; ++r) {
    TensorExpr d = diagonal(r);
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) {
        TensorExpr swapped;
        swapped.arity = r;
        for (auto& [w, c] : d.words) {
          auto v = w;
          std::swap(v[i], v[j]);
          int flips = (w[i].odd() && w[j].odd()) ? 1 : 0;
          for (int k = i + 1; k < j; ++k) {
            if (w[i].odd() && w[k].odd()) ++flips;
            if (w[k].odd() && w[j].odd()) ++flips;
          }
          swapped.add(v, (flips % 2) ? -c : c);
        }
        CHECK(swapped.words == d.words);
      }
  }
}

// Applying one SL2 matrix to every slot fixes the diagonal, r <= 4.
TEST_CASE("diagonal: monodromy invariance in every slot") {
  std::vector<Mat2> ms{{{{1, 0}, {1, 1}}}, {{{1, 1}, {0, 1}}}, {{{0, -1}, {1, 0}}},
                       {{{2, 1}, {1, 1}}}};
  for (int r = 2; r <= 4; ++r) {
    TensorExpr d = diagonal(r);
    for (auto& m : ms) {
      TensorExpr image;
      image.arity = r;
      // expand the per-slot linear action word by word
      for (auto& [w, c] : d.words) {
        std::vector<CohVector> slots;
        for (auto& s : w) slots.push_back(apply_sl2(m, 1, CohVector(s)));
        std::vector<std::pair<std::vector<CohSymbol>, Rat>> acc{{{}, c}};
        for (auto& sv : slots) {
          std::vector<std::pair<std::vector<CohSymbol>, Rat>> next;
          for (auto& [pw, pc] : acc)
            for (auto& [sym, sc] : sv.c) {
              auto nw = pw;
              nw.push_back(sym);
              next.push_back({nw, pc * sc});
            }
          acc = std::move(next);
        }
        for (auto& [nw, nc] : acc) image.add(nw, nc);
      }
      CHECK(image.words == d.words);
    }
  }
}
