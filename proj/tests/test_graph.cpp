#include <doctest.h>

#include <set>

#include "lhg/graph.hpp"

using namespace lhg;

namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int s = 1; s <= k; ++s) r = r * (n - k + s) / s;
  return r;
}

// every sequence in the box α_i < cap·i, filtered by the ratio predicate
std::set<std::vector<int>> box_filter(int n, int k, PathKind kind, int cap) {
  std::set<std::vector<int>> out;
  std::vector<int> a(n - k, 0);
  while (true) {
    LHComposition c{n, k, a, kind};
    if (c.valid()) out.insert(a);
    int pos = 0;
    while (pos < n - k) {
      if (++a[pos] < cap * (k + 1 + pos)) break;
      a[pos++] = 0;
    }
    if (pos == n - k) break;
  }
  return out;
}

std::vector<std::pair<Rat, Rat>> pts(std::initializer_list<std::pair<Rat, Rat>> l) { return l; }

}  // namespace

TEST_CASE("phi_decode examples") {
  CHECK(phi_decode(4, 4) == std::pair{1, 0});
  CHECK(phi_decode(0, 1) == std::pair{0, 0});
  CHECK(phi_decode(12, 5) == std::pair{2, 2});
  for (int i = 1; i <= 9; ++i)
    for (int a = 0; a < 60; ++a) {
      auto [t, j] = phi_decode(a, i);
      CHECK(j >= 0);
      CHECK(j < i);
      CHECK(phi_encode(t, j, i) == a);
    }
}

TEST_CASE("ratio_cmp") {
  CHECK(ratio_cmp(1, 2, 1, 3) > 0);
  CHECK(ratio_cmp(2, 4, 1, 2) == 0);
  CHECK(ratio_cmp(3, 4, 6, 5) < 0);
}

TEST_CASE("compositions read off vertex lists") {
  auto p1 = pts({{5, 0}, {5, Rat(3, 6)}, {4, Rat(3, 5)}, {4, Rat(7, 5)}, {3, Rat(6, 4)}, {2, Rat(5, 3)}, {2, 2},
                 {1, 2}, {1, 3}});
  CHECK(phi_from_vertices(p1) == std::vector<int>{4, 5, 6, 3});
  LHComposition c1{5, 1, {4, 5, 6, 3}, PathKind::SE};
  CHECK(c1.valid());

  auto p2 = pts({{1, 0}, {2, 0}, {2, Rat(1, 3)}, {3, Rat(1, 4)}, {3, Rat(7, 4)}, {4, Rat(8, 5)}, {4, Rat(12, 5)},
                 {5, Rat(14, 6)}, {5, 3}});
  CHECK(phi_from_vertices(p2) == std::vector<int>{0, 1, 7, 12});
  LHComposition c2{5, 1, {0, 1, 7, 12}, PathKind::NEstar};
  CHECK(c2.valid());

  CHECK_THROWS(phi_from_vertices(pts({{1, 0}, {2, Rat(1, 2)}})));
  CHECK_THROWS(Vertex::at(Rat(3, 2), 0));
}

TEST_CASE("small enumerations") {
  auto to_set = [](const std::vector<LHComposition>& v) {
    std::set<std::vector<int>> s;
    for (const auto& c : v) s.insert(c.alpha);
    return s;
  };
  CHECK(to_set(compositions(2, 1, PathKind::SE, 1)) == std::set<std::vector<int>>{{0}, {1}});
  CHECK(to_set(compositions(3, 1, PathKind::SE, 1)) == std::set<std::vector<int>>{{0, 0}, {1, 0}, {1, 1}});
  auto empty = compositions(4, 4, PathKind::SE, 1);
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].alpha.empty());
  CHECK(compositions(2, 3, PathKind::SE, 1).empty());
  CHECK_THROWS(compositions(3, 1, PathKind::SE, std::nullopt));
}

TEST_CASE("height-1 SE paths are counted by binomials") {
  for (int n = 0; n <= 10; ++n)
    for (int k = 0; k <= n; ++k) {
      long count = 0;
      enumerate_compositions(n, k, PathKind::SE, 1, [&](const LHComposition&) { ++count; });
      CHECK(count == binomial(n, k));
    }
}

TEST_CASE("enumeration agrees with a box filter") {
  for (int cap : {1, 2, 3})
    for (int n = 0; n <= 5; ++n)
      for (int k = 0; k <= n; ++k)
        for (auto kind : {PathKind::SE, PathKind::NEstar}) {
          if (cap == 3 && n == 5 && k == 0) continue;  // box of 3·6·9·12·15 is slow and adds nothing
          std::set<std::vector<int>> got;
          for (const auto& c : compositions(n, k, kind, cap)) {
            CHECK(c.valid());
            got.insert(c.alpha);
          }
          CHECK(got == box_filter(n, k, kind, cap));
        }
}

TEST_CASE("SE compositions have sorted ratios") {
  for (const auto& c : compositions(6, 1, PathKind::SE, 2))
    for (int i = 2; i < 6; ++i) CHECK(ratio_cmp(c.at(i), i, c.at(i + 1), i + 1) >= 0);
}

TEST_CASE("gate prunes branches") {
  // keep only compositions whose entries stay at most 1
  long count = 0;
  enumerate_compositions(
      4, 0, PathKind::SE, 2, [&](const LHComposition& c) {
        for (int a : c.alpha) CHECK(a <= 1);
        ++count;
      },
      [](const std::vector<int>& prefix, int) { return prefix.back() <= 1; });
  long expect = 0;
  for (const auto& c : compositions(4, 0, PathKind::SE, 2)) {
    bool ok = true;
    for (int a : c.alpha) ok = ok && a <= 1;
    expect += ok;
  }
  CHECK(count == expect);
}

TEST_CASE("json form") {
  LHComposition c{3, 1, {1, 0}, PathKind::SE};
  auto j = c.to_json();
  CHECK(j["kind"] == "SE");
  CHECK(j["alpha"] == nlohmann::json::array({1, 0}));
}
