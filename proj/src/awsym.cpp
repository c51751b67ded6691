#include "lhg/awsym.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>

namespace lhg {

bool Quad::valid() const {
  for (int v : t)
    if (v < 0) return false;
  if (size() % 2 == 0) return false;
  auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  return *hi - *lo <= 1;
}

std::string Quad::str() const {
  return "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + "," +
         std::to_string(t[3]) + ")";
}

int quad_cmp(const Quad& x, const Quad& y) {
  std::array<int, 4> a{x.t[3], x.t[2], x.t[1], -x.t[0]};
  std::array<int, 4> b{y.t[3], y.t[2], y.t[1], -y.t[0]};
  return a < b ? -1 : a == b ? 0 : 1;
}

Quad kappa(int t) {
  if (t < 0) throw NotInRange("kappa of a negative index");
  static const std::array<std::array<int, 4>, 8> base{{{1, 0, 0, 0},
                                                       {0, 1, 0, 0},
                                                       {0, 0, 1, 0},
                                                       {1, 1, 1, 0},
                                                       {0, 0, 0, 1},
                                                       {1, 1, 0, 1},
                                                       {1, 0, 1, 1},
                                                       {2, 1, 1, 1}}};
  int m = t / 8, r = t % 8;
  Quad q{base[r]};
  // a^{-1}(abcd)^m for the later block starts
  if (r == 0 && m > 0) q.t[0] = -1;
  for (int& v : q.t) v += m;
  return q;
}

int kappa_inv(const Quad& T) {
  if (!T.valid()) throw NotInRange("not an element of the ordered quad set: " + T.str());
  int limit = 8 * (T.size() / 4 + 2);
  for (int t = 0; t <= limit; ++t)
    if (kappa(t) == T) return t;
  throw NotInRange("no row index for " + T.str());
}

std::vector<Quad> quads_up_to(int max_size) {
  std::vector<Quad> out;
  for (int t = 0; 4 * (t / 8) - 1 <= max_size; ++t) {
    Quad q = kappa(t);
    if (q.size() <= max_size) out.push_back(q);
  }
  return out;
}

std::vector<int> chain_multiplicities(const Chain& c) {
  std::vector<int> m;
  for (size_t i = 0; i < c.size(); ++i) {
    if (i > 0 && c[i] == c[i - 1])
      ++m.back();
    else
      m.push_back(1);
  }
  return m;
}

long chain_norm(const Chain& c, int k) {
  long s = 0;
  for (size_t i = 0; i < c.size(); ++i) s += long(k + int(i)) * (c[i].size() - 1) / 2;
  return s;
}

Quad chain_sum(const Chain& c) {
  Quad s;
  for (const auto& T : c)
    for (int v = 0; v < 4; ++v) s.t[v] += T.t[v];
  return s;
}

LaurentPoly chain_term(const Chain& c, int n, int k) {
  Quad s = chain_sum(c);
  return mono(1, int(chain_norm(c, k)), s.t[0], s.t[1], s.t[2], s.t[3]) * qmultinom(n, k, chain_multiplicities(c));
}

void enumerate_chains(int length, int max_deg, const std::vector<Quad>& pool,
                      const std::function<void(const Chain&)>& visit) {
  Chain c;
  // indices into pool are nonincreasing along the chain
  std::function<void(int, int)> rec = [&](int top, int budget) {
    if (int(c.size()) == length) {
      visit(c);
      return;
    }
    int rest = length - int(c.size()) - 1;
    for (int i = top; i >= 0; --i) {
      int sz = pool[i].size();
      if (sz + rest > budget) continue;
      c.push_back(pool[i]);
      rec(i, budget - sz);
      c.pop_back();
    }
  };
  if (length == 0) {
    visit(c);
    return;
  }
  if (!pool.empty()) rec(int(pool.size()) - 1, max_deg);
}

LaurentPoly tuple_sigma(int n, int k, const TruncSpec& trunc) {
  if (k < 0 || k > n) return LaurentPoly();
  if (n == k) return trunc.D >= 0 ? LaurentPoly(1) : LaurentPoly();
  LaurentPoly sum;
  auto pool = quads_up_to(trunc.D - (n - k - 1));
  enumerate_chains(n - k, trunc.D, pool, [&](const Chain& c) { sum += chain_term(c, n, k); });
  return sum;
}

namespace {

Interval make_interval(std::string name, std::function<bool(const Quad&)> f) { return {std::move(name), std::move(f)}; }

std::vector<Interval> meeting(std::vector<Interval> all, int max_size) {
  auto quads = quads_up_to(max_size);
  std::vector<Interval> out;
  for (auto& I : all)
    if (std::any_of(quads.begin(), quads.end(), [&](const Quad& q) { return I.contains(q); })) out.push_back(std::move(I));
  return out;
}

bool pair_is(const Quad& T, int x, int y) {
  return (T.t[1] == x && T.t[2] == y) || (T.t[1] == y && T.t[2] == x);
}

std::vector<Interval> intervals_34(int max_size) {
  std::vector<Interval> all;
  for (int t = 0; 4 * t - 1 <= max_size; ++t) {
    auto ts = std::to_string(t);
    all.push_back(make_interval("I_" + ts, [t](const Quad& T) { return T.t[2] == t && T.t[3] == t; }));
    all.push_back(make_interval("I_" + ts + "^+", [t](const Quad& T) {
      return (T.t[2] == t && T.t[3] == t + 1) || (T.t[2] == t + 1 && T.t[3] == t);
    }));
  }
  return meeting(std::move(all), max_size);
}

}  // namespace

IntervalPartition partition_23() {
  return {"(23)", [](int max_size) {
            std::vector<Interval> all;
            for (int t = 0; 4 * t - 3 <= max_size; ++t) {
              auto ts = std::to_string(t);
              const std::array<std::pair<int, int>, 5> keys{
                  {{t - 1, t - 1}, {t - 1, t}, {t, t}, {t, t + 1}, {t + 1, t + 1}}};
              for (auto [x, y] : keys) {
                if (x < 0) continue;
                all.push_back(make_interval(
                    "t4=" + ts + ",{" + std::to_string(x) + "," + std::to_string(y) + "}",
                    [t, x, y](const Quad& T) { return T.t[3] == t && pair_is(T, x, y); }));
              }
            }
            return meeting(std::move(all), max_size);
          }};
}

IntervalPartition partition_23_literal() {
  return {"(23)-literal", [](int max_size) {
            std::vector<Interval> all;
            auto level = [](int t) {
              return make_interval("I_" + std::to_string(t), [t](const Quad& T) {
                return T.t[1] == t && T.t[2] == t && T.t[3] == t;
              });
            };
            auto plus = [](int t) {
              return make_interval("I_" + std::to_string(t) + "^+",
                                   [t](const Quad& T) { return T.t[3] == t && pair_is(T, t, t + 1); });
            };
            auto minus = [](int t) {
              return make_interval("I_" + std::to_string(t) + "^-",
                                   [t](const Quad& T) { return T.t[3] == t && pair_is(T, t, t - 1); });
            };
            for (int t = 0; 4 * t - 3 <= max_size; ++t) {
              if (t > 0) all.push_back(minus(t));
              all.push_back(level(t));
              all.push_back(plus(t));
            }
            return meeting(std::move(all), max_size);
          }};
}

IntervalPartition partition_34() { return {"(34)", intervals_34}; }
IntervalPartition partition_12() { return {"(12)", intervals_34}; }

void validate_partition(const IntervalPartition& p, int max_size) {
  auto intervals = p.intervals(max_size);
  int last = -1;
  for (const auto& T : quads_up_to(max_size)) {
    int found = -1;
    for (int i = 0; i < int(intervals.size()); ++i) {
      if (!intervals[i].contains(T)) continue;
      if (found >= 0)
        throw InvalidPartition(p.name + ": " + T.str() + " lies in " + intervals[found].name + " and " +
                               intervals[i].name);
      found = i;
    }
    if (found < 0) throw InvalidPartition(p.name + ": " + T.str() + " lies in no interval");
    if (found < last)
      throw InvalidPartition(p.name + ": " + intervals[found].name + " is not an interval after " +
                             intervals[last].name);
    last = found;
  }
}

LaurentPoly interval_sigma(const Interval& I, int n, int k, const TruncSpec& trunc) {
  if (k < 0 || k > n) return LaurentPoly();
  if (n == k) return trunc.D >= 0 ? LaurentPoly(1) : LaurentPoly();
  std::vector<Quad> pool;
  for (const auto& T : quads_up_to(trunc.D)) {
    if (I.contains(T)) pool.push_back(T);
  }
  LaurentPoly sum;
  enumerate_chains(n - k, trunc.D, pool, [&](const Chain& c) { sum += chain_term(c, n, k); });
  return sum;
}

LaurentPoly partition_compose(const IntervalPartition& p, int n, int k, const TruncSpec& trunc) {
  validate_partition(p, trunc.D);
  if (k < 0 || k > n) return LaurentPoly();
  // intervals beyond the degree bound only contribute with n_j = n_{j+1}
  auto intervals = p.intervals(trunc.D);
  int J = int(intervals.size());
  std::map<std::tuple<int, int, int>, LaurentPoly> memo;
  auto factor = [&](int j, int r, int s) -> const LaurentPoly& {
    auto key = std::make_tuple(j, r, s);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, interval_sigma(intervals[j], r, s, trunc)).first;
    return it->second;
  };
  LaurentPoly total;
  std::function<void(int, int, const LaurentPoly&)> rec = [&](int j, int cur, const LaurentPoly& acc) {
    if (j == J) {
      if (cur == k) total += acc;
      return;
    }
    for (int next = cur; next >= k; --next) {
      const LaurentPoly& f = factor(j, cur, next);
      if (f.is_zero()) continue;
      rec(j + 1, next, acc.mul_trunc(f, trunc.D));
    }
  };
  rec(0, n, LaurentPoly(1));
  return total;
}

LaurentPoly permute_params(const LaurentPoly& f, const Perm4& tau) {
  std::vector<Term> out;
  for (const auto& term : f.terms()) {
    Term t = term;
    for (int v = 0; v < 4; ++v) t.m.e[kA + tau[v]] = term.m.e[kA + v];
    out.push_back(t);
  }
  return LaurentPoly::from_terms(std::move(out));
}

std::vector<Perm4> all_perms4() {
  std::vector<Perm4> out;
  Perm4 p{0, 1, 2, 3};
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::string perm_str(const Perm4& tau) {
  std::string s;
  for (int v : tau) s += std::to_string(v + 1);
  return s;
}

Chain theta_23(const Chain& c, const std::vector<Interval>& intervals) {
  auto index_of = [&](const Quad& T) {
    for (int i = 0; i < int(intervals.size()); ++i)
      if (intervals[i].contains(T)) return i;
    throw InvalidPartition("quad " + T.str() + " outside the partition");
  };
  Chain out;
  size_t i = 0;
  while (i < c.size()) {
    int idx = index_of(c[i]);
    size_t j = i;
    Chain block;
    while (j < c.size() && index_of(c[j]) == idx) {
      Quad s = c[j];
      std::swap(s.t[1], s.t[2]);
      block.push_back(s);
      ++j;
    }
    std::sort(block.begin(), block.end(), [](const Quad& x, const Quad& y) { return quad_cmp(x, y) > 0; });
    out.insert(out.end(), block.begin(), block.end());
    i = j;
  }
  return out;
}

namespace {

bool is_transposition(const Perm4& tau, int x, int y) {
  Perm4 p{0, 1, 2, 3};
  std::swap(p[x], p[y]);
  return p == tau;
}

Quad permute_quad(const Quad& s, const Perm4& tau) {
  Quad r;
  for (int v = 0; v < 4; ++v) r.t[tau[v]] = s.t[v];
  return r;
}

}  // namespace

CheckReport symmetry_check(int n, int k, const TruncSpec& trunc, const Perm4& tau) {
  CheckReport rep;
  rep.check = "symmetry";
  rep.range = {{"n", n}, {"k", k}, {"D", trunc.D}, {"tau", perm_str(tau)}};
  std::string at = " n=" + std::to_string(n) + " k=" + std::to_string(k) + " tau=" + perm_str(tau);
  LaurentPoly s = tuple_sigma(n, k, trunc);
  if (permute_params(s, tau) != s) rep.fail("sigma not invariant" + at);

  // per-interval invariance for the simple transpositions
  std::optional<IntervalPartition> part;
  if (is_transposition(tau, 1, 2)) part = partition_23();
  if (is_transposition(tau, 2, 3)) part = partition_34();
  if (is_transposition(tau, 0, 1)) part = partition_12();
  if (part) {
    validate_partition(*part, trunc.D);
    auto intervals = part->intervals(trunc.D);
    for (const auto& I : intervals)
      for (int len = 1; len <= n - k; ++len) {
        LaurentPoly x = interval_sigma(I, k + len, k, trunc);
        if (permute_params(x, tau) != x)
          rep.fail("interval " + I.name + " not invariant, length " + std::to_string(len) + at);
      }
  }

  // the chain-level bijection behind the (2,3) case
  if (is_transposition(tau, 1, 2) && n > k) {
    auto intervals = partition_23().intervals(trunc.D);
    auto pool = quads_up_to(trunc.D - (n - k - 1));
    std::set<std::vector<std::array<int, 4>>> images;
    long count = 0;
    enumerate_chains(n - k, trunc.D, pool, [&](const Chain& c) {
      ++count;
      Chain img = theta_23(c, intervals);
      std::string what;
      for (size_t i = 1; i < img.size(); ++i)
        if (quad_cmp(img[i - 1], img[i]) < 0) what = "image not decreasing";
      if (chain_sum(img) != permute_quad(chain_sum(c), tau)) what = "sum not permuted";
      if (chain_norm(img, k) != chain_norm(c, k)) what = "norm changed";
      // block sizes may come back in another order; the q-multinomial does not see it
      auto mi = chain_multiplicities(img), mc = chain_multiplicities(c);
      std::sort(mi.begin(), mi.end());
      std::sort(mc.begin(), mc.end());
      if (mi != mc) what = "multiplicities changed";
      if (theta_23(img, intervals) != c) what = "not an involution";
      if (!what.empty()) {
        std::string cs;
        for (const auto& T : c) cs += T.str();
        rep.fail(what + " for chain " + cs + at);
      }
      std::vector<std::array<int, 4>> key;
      for (const auto& T : img) key.push_back(T.t);
      images.insert(key);
    });
    if (long(images.size()) != count) rep.fail("theta not injective" + at);
    rep.range["theta_chains"] = count;
  }
  return rep;
}

LaurentPoly inv_gf(int r, int s) {
  LaurentPoly sum;
  int len = r + s;
  for (unsigned mask = 0; mask < (1u << len); ++mask) {
    if (__builtin_popcount(mask) != s) continue;
    int inv = 0, ones = 0;
    for (int i = 0; i < len; ++i) {
      if (mask >> i & 1)
        ++ones;
      else
        inv += ones;  // every earlier 1 forms an inversion with this 0
    }
    sum += qv(inv);
  }
  return sum;
}

LaurentPoly g_function(int M1, int M2, int N) {
  LaurentPoly sum;
  for (int m1 = 0; m1 <= M1; ++m1) {
    int m2 = M1 - m1, m3 = N - m1;
    if (m3 < 0 || m3 > M2) continue;
    sum += qv(m2 * m3) * qbinom(M1, m1) * qbinom(M2, m3);
  }
  return sum;
}

namespace {

LaurentPoly det_trunc(const std::vector<std::vector<LaurentPoly>>& m, int D) {
  int r = int(m.size());
  if (r == 1) return m[0][0];
  LaurentPoly sum;
  for (int c = 0; c < r; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<LaurentPoly>> sub;
    for (int i = 1; i < r; ++i) {
      std::vector<LaurentPoly> row;
      for (int j = 0; j < r; ++j)
        if (j != c) row.push_back(m[i][j]);
      sub.push_back(row);
    }
    LaurentPoly t = m[0][c].mul_trunc(det_trunc(sub, D), D);
    if (c % 2) t = -t;
    sum += t;
  }
  return sum;
}

void subsets(int n, int r, std::vector<std::vector<int>>& out, std::vector<int>& cur, int start) {
  if (int(cur.size()) == r) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, r, out, cur, i + 1);
    cur.pop_back();
  }
}

}  // namespace

CheckReport total_positivity_check(int max_n, int minor_size, const TruncSpec& trunc) {
  CheckReport rep;
  rep.check = "total-positivity";
  rep.range = {{"max_n", max_n}, {"minor_size", minor_size}, {"D", trunc.D}};
  int dim = max_n + 1;
  std::vector<std::vector<LaurentPoly>> M(dim, std::vector<LaurentPoly>(dim));
  for (int n = 0; n < dim; ++n)
    for (int k = 0; k <= n; ++k) M[n][k] = tuple_sigma(n, k, trunc);
  long minors = 0;
  for (int r = 1; r <= minor_size; ++r) {
    std::vector<std::vector<int>> sets;
    std::vector<int> cur;
    subsets(dim, r, sets, cur, 0);
    for (const auto& rows : sets)
      for (const auto& cols : sets) {
        std::vector<std::vector<LaurentPoly>> sub(r, std::vector<LaurentPoly>(r));
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j) sub[i][j] = M[rows[i]][cols[j]];
        LaurentPoly d = series_truncate(det_trunc(sub, trunc.D), trunc);
        ++minors;
        for (const auto& t : d.terms())
          if (t.c < 0 || t.c.get_den() != 1) {
            std::string rs, cs;
            for (int x : rows) rs += std::to_string(x);
            for (int x : cols) cs += std::to_string(x);
            rep.fail("minor rows " + rs + " cols " + cs + " has coefficient " + rat_str(t.c));
            break;
          }
      }
  }
  rep.range["minors"] = minors;
  return rep;
}

namespace {

LaurentPoly coefficient_of(const LaurentPoly& f, const Quad& s) {
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    bool match = true;
    for (int v = 0; v < 4; ++v) match = match && t.m.e[kA + v] == s.t[v];
    if (!match) continue;
    Term r;
    r.m.e[kQ] = t.m.e[kQ];
    r.c = t.c;
    out.push_back(r);
  }
  return LaurentPoly::from_terms(std::move(out));
}

}  // namespace

CheckReport shifting_check(int n, int k, int j, const Quad& s, const TruncSpec& trunc, bool printed) {
  CheckReport rep;
  rep.check = printed ? "shifting-printed-exponent" : "shifting";
  rep.range = {{"n", n}, {"k", k}, {"j", j}, {"s", s.str()}, {"D", trunc.D}};
  if (s.size() > trunc.D) throw AWSymError("coefficient degree exceeds the truncation");
  LaurentPoly lhs = coefficient_of(tuple_sigma(n + j, k + j, trunc), s);
  LaurentPoly base = coefficient_of(tuple_sigma(n, k, trunc), s);
  int twice = j * (s.size() - (printed ? 1 : n - k));
  if (twice % 2) {
    if (!lhs.is_zero() || !base.is_zero()) rep.fail("half-integer exponent with nonzero coefficient");
    return rep;
  }
  LaurentPoly rhs = base * qv(twice / 2) * qpoch(qv(n + 1), j);
  if (lhs * qpoch(qv(k + 1), j) != rhs) rep.fail("coefficient relation fails for s=" + s.str());
  return rep;
}

}  // namespace lhg
