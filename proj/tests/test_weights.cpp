#include <doctest.h>

#include <random>

#include "lhg/moments.hpp"
#include "lhg/weights.hpp"

using namespace lhg;

namespace {

WeightSystem qj_system() {
  return make_system("qj", 1, [](int, int, int j) { return Frac(qv(j)); }, [](int) { return 0; });
}

LaurentPoly bessel_step(int i) { return -av() * qv(2 * i + 1); }

WeightSystem bessel_inf() {
  return make_system(
      "bessel-inf", std::nullopt, [](int t, int i, int j) { return Frac(bessel_step(i).pow(t) * qv(j)); },
      [](int t) { return t; });
}

WeightSystem bessel_h1() {
  return make_system(
      "bessel-h1", 1,
      [](int, int i, int j) {
        return Frac::over(qv(j) * (1 + av() * qv(i)), {1 + av() * qv(i + j), 1 + av() * qv(i + j + 1)});
      },
      [](int) { return 0; }, false);
}

LaurentPoly binom_q(int n, int k) { return qbinom(n, k); }

}  // namespace

TEST_CASE("stack") {
  auto w = stack(qj_system(), zero_system(2));
  CHECK(w.height == 3);
  CHECK(w(0, 3, 2) == Frac(qv(2)));
  CHECK(w(1, 3, 2) == Frac(0));
  CHECK(w(5, 3, 2) == Frac(0));
  for (int n = 0; n <= 5; ++n)
    for (int k = 0; k <= n; ++k) CHECK(h_value(w, n, k) == h_value(qj_system(), n, k));

  auto top = make_system("top", 1, [](int, int, int j) { return Frac(bv() * qv(j) * LaurentPoly(Rat(1, 2))); },
                         [](int) { return 1; });
  auto s = stack(qj_system(), top);
  CHECK(s(1, 4, 3) == Frac(LaurentPoly(Rat(1, 2)) * bv() * qv(3)));
  CHECK(s.row_degree_lb(0) == 0);
  CHECK(s.row_degree_lb(1) == 1);
  CHECK_THROWS_AS(stack(bessel_inf(), qj_system()), InfiniteBase);

  // associativity on values
  auto x = stack(stack(qj_system(), top), qj_system());
  auto y = stack(qj_system(), stack(top, qj_system()));
  for (int t = 0; t < 3; ++t)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j <= i; ++j) CHECK(x(t, i, j) == y(t, i, j));
}

TEST_CASE("column scaling") {
  auto row1 = scale_columns(qj_system(), [](int i) { return Frac(bessel_step(i)); }, 1);
  auto b = bessel_inf();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j <= i; ++j) CHECK(row1(0, i, j) == b(1, i, j));

  auto id = scale_columns(qj_system(), [](int) { return Frac(1); });
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j <= i; ++j) CHECK(id(0, i, j) == qj_system()(0, i, j));

  // h of the scaled system picks up one C_i per column crossed
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> ex(-2, 2), px(0, 1);
  for (int round = 0; round < 6; ++round) {
    std::vector<LaurentPoly> C;
    for (int i = 0; i < 8; ++i) C.push_back(mono(1 + px(rng), ex(rng), px(rng), px(rng), 0, 0));
    auto scaled = scale_columns(qj_system(), [C](int i) { return Frac(C[i]); });
    for (int n = 0; n <= 5; ++n)
      for (int k = 0; k <= n; ++k) {
        LaurentPoly prod(1);
        for (int i = k; i < n; ++i) prod *= C[i];
        CHECK(h_value(scaled, n, k) == prod * h_value(qj_system(), n, k));
      }
  }
}

TEST_CASE("bar") {
  auto w = bar(qj_system());
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j <= i; ++j) CHECK(w(0, i, j) == Frac(qv(i - j)));
  // reflected weights give q^{C(n−k,2)} times the q-binomial
  for (int n = 0; n <= 6; ++n)
    for (int k = 0; k <= n; ++k) CHECK(h_value(w, n, k) == qv((n - k) * (n - k - 1) / 2) * binom_q(n, k));
  auto ww = bar(w);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j <= i; ++j) CHECK(ww(0, i, j) == qj_system()(0, i, j));
  auto c = make_system("const", 1, [](int, int, int) { return Frac(av()); }, [](int) { return 1; });
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) CHECK(bar(c)(0, i, j) == c(0, i, j));
  CHECK_THROWS_AS(bar(bessel_inf()), HeightNotOne);
}

TEST_CASE("h of w equals e of its reflection") {
  auto sw = make_system("sw", 1, [](int, int i, int j) { return Frac(qv(-i - j - 1)); }, [](int) { return 0; });
  for (const auto& w : {qj_system(), sw})
    for (int n = 0; n <= 6; ++n)
      for (int k = 0; k <= n; ++k) CHECK(h_value(w, n, k) == e_value(bar(w), n, k));
}

TEST_CASE("shifts") {
  auto w = bessel_h1();
  auto col = shift(w, ShiftKind::col);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j <= i; ++j) CHECK(col(0, i, j) == w(0, i, j).substitute({{kA, av() * qv(1)}}));
  for (int n = 0; n <= 4; ++n)
    for (int k = 0; k <= n; ++k) CHECK(h_frac(col, n, k) == h_frac(w, n, k).substitute({{kA, av() * qv(1)}}));

  auto diag = shift(qj_system(), ShiftKind::diag);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j <= i; ++j) CHECK(diag(0, i, j) == Frac(qv(j + 1)));

  auto tall = stack(qj_system(), stack(qj_system(), qj_system()));
  CHECK(shift(tall, ShiftKind::row).height == 2);
  auto up = shift(bessel_inf(), ShiftKind::row);
  CHECK(up.infinite());
  CHECK(up(2, 3, 1) == bessel_inf()(3, 3, 1));
  CHECK_THROWS_AS(shift(tall, ShiftKind::col), HeightNotOne);
  CHECK_THROWS_AS(shift(tall, ShiftKind::diag), HeightNotOne);
}

TEST_CASE("row expansion keeps h") {
  RowCoefficients delta{[](int, int t) { return LaurentPoly(t == 0 ? 1 : 0); }, 1, [](int) { return 0; }};
  auto [w1, w2] = expand_rows(delta, bv());
  CHECK(w1(0, 2, 1) == Frac((1 + bv() * qv(2)) * qv(1)));
  CHECK(w2(0, 2, 1) == Frac(qv(1)));
  CHECK(w2(1, 2, 1) == Frac(bv() * qv(3)));
  for (int n = 0; n <= 5; ++n)
    for (int k = 0; k <= n; ++k) CHECK(h_value(w1, n, k) == h_value(w2, n, k));

  auto [z1, z2] = expand_rows(delta, LaurentPoly(0));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) {
      CHECK(z1(0, i, j) == z2(0, i, j));
      CHECK(z2(1, i, j) == Frac(0));
    }

  // the little-Jacobi shape: a_{i,t} = (abq^{2i+2})^t, b = −aq
  RowCoefficients geo{[](int i, int t) { return (av() * bv() * qv(2 * i + 2)).pow(t); }, std::nullopt,
                      [](int t) { return 2 * t; }};
  auto [g1, g2] = expand_rows(geo, -av() * qv(1));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) {
      CHECK(g2(2, i, j) == Frac(av() * bv() * qv(2 * i + 2 + j)));
      CHECK(g2(3, i, j) == Frac(-av().pow(2) * bv() * qv(3 * i + 3 + j)));
    }
  TruncSpec D{4};
  for (int n = 0; n <= 5; ++n)
    for (int k = 0; k <= n; ++k) CHECK(h_value(g1, n, k, D) == h_value(g2, n, k, D));
}

TEST_CASE("height-l systems") {
  auto C = [](int i) { return Frac(bessel_step(i)); };
  auto one = make_height_l(bessel_inf(), bessel_h1(), C, 1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) CHECK(one(0, i, j) == bessel_h1()(0, i, j));

  auto two = make_height_l(bessel_inf(), bessel_h1(), C, 2);
  CHECK(two.height == 2);
  CHECK(two(0, 3, 1) == Frac(qv(1)));
  CHECK(two(1, 3, 1) == Frac(bessel_step(3)) * bessel_h1()(0, 3, 1));

  for (int l : {1, 2, 3}) {
    auto w = make_height_l(bessel_inf(), bessel_h1(), C, l);
    for (int n = 0; n <= 4; ++n)
      for (int k = 0; k <= n; ++k) CHECK(h_frac(w, n, k) == h_frac(bessel_h1(), n, k));
  }

  auto broken = make_system(
      "broken", std::nullopt, [](int t, int, int j) { return Frac(av().pow(t) * qv(j + t)); }, [](int t) { return t; });
  CHECK_THROWS_AS(make_height_l(broken, bessel_h1(), [](int) { return Frac(av()); }, 2), ShiftingPropertyViolated);
}

TEST_CASE("sequence systems") {
  auto w = height1_from_sequence([](int j) { return qv(-j); });
  CHECK(w.height == 1);
  CHECK(w(0, 4, 2) == Frac(qv(-2)));
  CHECK(w(0, 1, 0) == Frac(1));
  auto zero = height1_from_sequence([](int) { return LaurentPoly(0); });
  for (int n = 0; n <= 4; ++n)
    for (int k = 0; k <= n; ++k) CHECK(h_value(zero, n, k) == LaurentPoly(n == k ? 1 : 0));
}

TEST_CASE("truncation row bound") {
  CHECK(truncation_row_bound(bessel_inf(), {4}) == 5);
  CHECK(truncation_row_bound(bessel_inf(), {3}) == 4);
  CHECK(truncation_row_bound(qj_system(), {3}) == 1);
  auto flat = make_system("flat", std::nullopt, [](int, int, int) { return Frac(1); }, [](int) { return 0; });
  CHECK_THROWS_AS(truncation_row_bound(flat, {2}), NoBound);
  // negative base rows push the cap up by the slack they can create
  auto neg = make_system(
      "neg", std::nullopt, [](int t, int, int) { return Frac(av(t - 1)); }, [](int t) { return t - 1; });
  CHECK(truncation_row_bound(neg, {2}, 1) == 4);
  CHECK(truncation_row_bound(neg, {2}, 3) == 6);
}

TEST_CASE("row degree bounds hold") {
  for (const auto& w : {bessel_inf(), qj_system()})
    for (int t = 0; t <= 12; ++t)
      for (int i = 0; i <= 6; ++i)
        for (int j = 0; j <= i; ++j) {
          Frac x = w(t, i, j);
          if (!x.is_zero()) CHECK(weight_min_deg(x) >= w.row_degree_lb(t));
        }
}

TEST_CASE("grid dumps") {
  auto g = grid_json(bessel_inf(), 2, 2);
  CHECK(g["height"] == "inf");
  CHECK(g["rows"][1]["columns"][1]["cells"][0] == (-av() * qv(3)).str());
  std::string text = grid_text(qj_system(), 1, 2);
  CHECK(text == "w(0;0,0) = 1\nw(0;1,0) = 1\nw(0;1,1) = " + qv(1).str() + "\n");
}
