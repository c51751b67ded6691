#include <doctest.h>

#include "lhg/catalog.hpp"

using namespace lhg;

namespace {

LaurentPoly half(const LaurentPoly& x) { return x * Rat(1, 2); }

bool arrays_match(const TriangularArray& x, const TriangularArray& y, int N) {
  bool ok = true;
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= n; ++k)
      if (!(x.at(n, k) == y.at(n, k))) {
        MESSAGE("mismatch at n=" << n << " k=" << k << ": " << x.at(n, k).str() << " vs " << y.at(n, k).str());
        ok = false;
      }
  return ok;
}

TriangularArray product(const TriangularArray& x, const TriangularArray& y) { return compose_mixed(x, y); }

}  // namespace

TEST_CASE("catalog lookups") {
  CHECK(families().size() == 9);
  CHECK_THROWS_AS(family("q-laguerre"), UnknownFamily);
  CHECK_THROWS_AS(weight_system("q-bessel", "height-9"), UnknownLabel);
  CHECK_THROWS_AS(closed_array("stieltjes-wigert", Target::sigma_hermite, 2), CatalogError);
  CHECK(parse_target("sigma-hermite") == Target::sigma_hermite);
  CHECK_THROWS(parse_target("tau"));
  auto m = families_manifest();
  CHECK(m.size() == 9);
  CHECK(m[1]["name"] == "q-bessel");
  CHECK(m[1]["systems"][1]["height"] == "inf");
  for (const auto& f : families())
    for (const auto& s : f.systems) CHECK(weight_system(f.name, s.label).name == f.name + "/" + s.label);
}

TEST_CASE("golden weight cells") {
  auto b = weight_system("q-bessel", "infinite");
  CHECK(b(2, 1, 0) == Frac(av(2) * qv(6)));
  CHECK(b(1, 2, 2) == Frac(-av() * qv(7)));
  CHECK(b(1, 0, 0) == Frac(-av() * qv(1)));

  auto bf = weight_system("big-qjacobi", "full");
  CHECK(bf(0, 1, 1) == Frac(cv() * qv(2)));
  CHECK(bf(2, 2, 0) == Frac(-av() * cv() * qv(4)));
  auto bt = weight_system("big-qjacobi", "factorial");
  CHECK(bt(0, 2, 0) == Frac(-qv(-2)));
  CHECK(bt(4, 1, 0) == Frac(-av() * bv() * qv(3)));

  auto tw = weight_system("askey-wilson", "factorial");
  std::vector<LaurentPoly> col0{-av(-1), dv(), cv(), -av() * cv() * dv(), bv(), -av() * bv() * dv(),
                                -av() * bv() * cv(), av(2) * bv() * cv() * dv(), -bv() * cv() * dv()};
  for (int t = 0; t < 9; ++t) CHECK(tw(t, 0, 0) == Frac(half(col0[t])));
  CHECK(tw(0, 2, 0) == Frac(half(-av(-1) * qv(-2))));
  CHECK(tw(3, 2, 2) == Frac(half(-av() * cv() * dv() * qv(4))));
  CHECK(tw(8, 2, 0) == Frac(half(-bv() * cv() * dv() * qv(2))));

  auto full = weight_system("askey-wilson", "full");
  CHECK(full(0, 3, 2) == Frac(half(av() * qv(2) + av(-1) * qv(-2))));
  CHECK(full(4, 1, 1) == tw(3, 1, 1));

  auto r = weight_system("askey-wilson", "hermite-relative-rescaled");
  CHECK(r(3, 2, 1) == Frac(av() * bv() * cv() * qv(3)));
  CHECK(r(0, 0, 0) == Frac(av()));
  CHECK(r(8, 1, 0) == Frac(bv() * cv() * dv() * qv(1)));
  auto h = weight_system("askey-wilson", "hermite-relative");
  CHECK(h(0, 4, 2) == Frac(half(av() * qv(2))));
  CHECK(h(8, 1, 0) == Frac(half(-bv() * cv() * dv() * qv(1))));

  auto H = weight_system("cts-q-hermite", "height3");
  CHECK(H(1, 1, 0) == Frac(-half(qv(-1))));
  CHECK(H(2, 1, 0) == Frac(-half(qv(1))));
  auto bH = weight_system("cts-big-q-hermite", "height2");
  CHECK(bH(1, 2, 0) == Frac(-half(av(-1) * qv(-2))));
  auto wp = weight_system("cts-big-q-hermite", "hermite-coefficients");
  CHECK(wp(0, 1, 0) == Frac(-half(av() * qv(1))));
}

TEST_CASE("row degree bounds of catalog systems") {
  for (const auto& f : families())
    for (const auto& s : f.systems) {
      auto w = weight_system(f.name, s.label);
      int rows = w.height ? *w.height : 17;
      for (int t = 0; t < rows; ++t)
        for (int i = 0; i <= 3; ++i)
          for (int j = 0; j <= i; ++j) {
            Frac x = w(t, i, j);
            if (!x.is_zero()) CHECK_MESSAGE(weight_min_deg(x) >= w.row_degree_lb(t), w.name, " t=", t);
          }
    }
}

TEST_CASE("w1..w4 stacked give the Hermite-relative weights") {
  auto chain = weight_system("askey-wilson", "w1-w4");
  auto h = weight_system("askey-wilson", "hermite-relative");
  for (int t = 0; t < 24; ++t)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j <= i; ++j) CHECK(chain(t, i, j) == h(t, i, j));
}

TEST_CASE("factorial bases") {
  auto F = factorial_powers(nu_q, 4);
  CHECK(F[2][0] == qv(-1));
  CHECK(F[2][1] == -(1 + qv(-1)));
  for (auto d : {std::function<LaurentPoly(int)>(nu_q), std::function<LaurentPoly(int)>(f_seq)}) {
    auto tau = power_to_factorial(d, 5);
    auto back = TriangularArray::build(5, [&](int n, int k) { return Frac(factorial_powers(d, 5)[n][k]); });
    auto id = product(tau, back);
    for (int n = 0; n <= 5; ++n)
      for (int k = 0; k <= n; ++k) CHECK(id.at(n, k) == Frac(n == k ? 1 : 0));
  }
}

TEST_CASE("closed sigma and nu are inverse") {
  for (const auto& f : families()) {
    int N = f.name == "askey-wilson" || f.name == "cts-dual-q-hahn" ? 3 : 4;
    auto s = closed_array(f.name, Target::sigma, N);
    auto v = closed_array(f.name, Target::nu, N);
    auto id = product(s, v);
    for (int n = 0; n <= N; ++n)
      for (int k = 0; k <= n; ++k) CHECK_MESSAGE(id.at(n, k) == Frac(n == k ? 1 : 0), f.name, " ", n, ",", k);
  }
  auto sf = closed_array("big-qjacobi", Target::sigma_factorial, 4);
  auto nf = closed_array("big-qjacobi", Target::nu_factorial, 4);
  CHECK(arrays_match(inverse_unitriangular(sf), nf, 4));
}

TEST_CASE("height-1 path sums equal closed forms") {
  struct Case {
    const char* fam;
    const char* label;
    Target target;
    int N;
  };
  for (auto c : {Case{"stieltjes-wigert", "height1", Target::sigma, 5}, Case{"q-bessel", "height1", Target::sigma, 5},
                 Case{"little-qjacobi", "height1", Target::sigma, 4},
                 Case{"big-qjacobi", "factorial-height1", Target::sigma_factorial, 4},
                 Case{"askey-wilson", "factorial-height1", Target::sigma_factorial, 3},
                 Case{"q-bessel", "height-2", Target::sigma, 4}}) {
    auto w = weight_system(c.fam, c.label);
    CHECK_MESSAGE(arrays_match(h_array(w, c.N), closed_array(c.fam, c.target, c.N), c.N), w.name);
  }
}

TEST_CASE("truncated path sums equal series of closed forms") {
  TruncSpec D{4};
  struct Case {
    const char* fam;
    const char* label;
    Target target;
    int N;
  };
  for (auto c : {Case{"q-bessel", "infinite", Target::sigma, 4}, Case{"little-qjacobi", "infinite", Target::sigma, 4},
                 Case{"big-qjacobi", "factorial", Target::sigma_factorial, 3},
                 Case{"big-qjacobi", "full", Target::sigma, 3},
                 Case{"askey-wilson", "factorial", Target::sigma_factorial, 3},
                 Case{"askey-wilson", "hermite-relative-rescaled", Target::sigma_hermite_rescaled, 3}}) {
    auto w = weight_system(c.fam, c.label);
    auto got = h_array(w, c.N, D);
    auto want = series_array(closed_array(c.fam, c.target, c.N), D);
    CHECK_MESSAGE(arrays_match(got, want, c.N), w.name);
  }
}

TEST_CASE("definitions expand to the closed nu") {
  for (const auto& f : families()) {
    int N = f.name == "askey-wilson" ? 2 : 3;
    auto nu = closed_array(f.name, Target::nu, N);
    for (int n = 0; n <= N; ++n) {
      auto p = polynomial_from_definition(f.name, n);
      REQUIRE(p.size() == size_t(n + 1));
      for (int k = 0; k <= n; ++k) CHECK_MESSAGE(p[k] == nu.at(n, k), f.name, " n=", n, " k=", k);
    }
  }
  CHECK(polynomial_from_definition("cts-q-hermite", 1)[1] == Frac(1));
  for (int n = 0; n <= 3; ++n) {
    auto x = polynomial_from_definition("cts-big-q-hermite", n, 0);
    auto y = polynomial_from_definition("cts-big-q-hermite", n, 1);
    for (int k = 0; k <= n; ++k) CHECK(x[k] == y[k]);
  }
}

TEST_CASE("connection formulas") {
  auto rep = check_connections(3);
  CHECK(rep.pass);
  for (const auto& c : rep.counterexamples) MESSAGE(c);
}

TEST_CASE("q-Hermite moments") {
  CHECK(hermite_sigma_TR(2, 0) == half(half(1 - qv(1))));
  CHECK(hermite_sigma_TR(3, 0).is_zero());
  CHECK(hermite_sigma_TR(4, 4) == LaurentPoly(1));
  auto tr = closed_array("cts-q-hermite", Target::sigma, 6);
  CHECK(arrays_match(h_array(weight_system("cts-q-hermite", "height3"), 6), tr, 6));
  CHECK(arrays_match(h_array(weight_system("cts-q-hermite", "bH-stack"), 6), tr, 6));
  // oracle: monic H_n from H_{n+1} = x H_n − (1−q^n)/4 H_{n−1}, inverted
  std::vector<std::vector<LaurentPoly>> Hp{{LaurentPoly(1)}, {LaurentPoly(), LaurentPoly(1)}};
  for (int n = 1; n < 6; ++n) {
    std::vector<LaurentPoly> next(n + 2);
    for (int k = 0; k <= n; ++k) next[k + 1] += Hp[n][k];
    for (int k = 0; k < n; ++k) next[k] -= half(half(1 - qv(n))) * Hp[n - 1][k];
    Hp.push_back(next);
  }
  auto coeff = TriangularArray::build(6, [&](int n, int k) { return Frac(Hp[n][k]); });
  CHECK(arrays_match(inverse_unitriangular(coeff), tr, 6));
}

TEST_CASE("Hermite-relative assembly") {
  auto sh = closed_array("askey-wilson", Target::sigma_hermite, 3);
  auto s = closed_array("askey-wilson", Target::sigma, 3);
  auto H = closed_array("cts-q-hermite", Target::sigma, 3);
  CHECK(arrays_match(product(H, sh), s, 3));
  CHECK(arrays_match(h_array(weight_system("askey-wilson", "hermite-relative"), 3, TruncSpec{4}),
                     series_array(sh, {4}), 3));
}

TEST_CASE("specializations") {
  struct Case {
    const char* fam;
    const char* label;
    Target target;
    int N;
  };
  for (auto c : {Case{"cts-big-q-hermite", "height2", Target::sigma, 4},
                 Case{"cts-big-q-hermite", "hermite-relative", Target::sigma_hermite, 4},
                 Case{"cts-big-q-hermite", "hermite-coefficients", Target::nu_hermite, 4},
                 Case{"cts-big-q-hermite", "full-hermite", Target::sigma, 4},
                 Case{"al-salam-chihara", "hermite-relative", Target::sigma_hermite, 4},
                 Case{"al-salam-chihara", "full", Target::sigma, 3},
                 Case{"cts-dual-q-hahn", "hermite-relative", Target::sigma_hermite, 3},
                 Case{"cts-dual-q-hahn", "full", Target::sigma, 3}}) {
    auto w = weight_system(c.fam, c.label);
    CHECK_MESSAGE(arrays_match(h_array(w, c.N), closed_array(c.fam, c.target, c.N), c.N), w.name);
  }
  auto asc = weight_system("al-salam-chihara", "full");
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j)
      for (int t : {2, 3, 4, 6}) CHECK(asc(t, i, j).is_zero());
}

TEST_CASE("unit rescaling") {
  Frac x(half(av() + bv()));
  CHECK(unit_rescale(x, 1) == Frac(av() + bv()));
  Frac y(half(half(av() * bv() * cv())));
  CHECK_THROWS_AS(unit_rescale(y, 2), CatalogError);
  CHECK(unit_rescale(y, 3) == Frac(av() * bv() * cv() * 2));
  CHECK_THROWS_AS(unit_rescale(Frac(av() * bv()), 1), CatalogError);
  auto r = closed_array("askey-wilson", Target::sigma_hermite_rescaled, 2);
  CHECK(frac_series(r.at(1, 0), {4}) == av() + bv() + cv() + dv() + av() * bv() * cv() +
                                            av() * bv() * dv() + av() * cv() * dv() + bv() * cv() * dv());
}
