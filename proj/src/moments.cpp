#include "lhg/moments.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

namespace lhg {

namespace {

struct Plan {
  int rows = 0;
  bool trunc = false;
  int d_inner = 0;  // truncation degree for partial products
  int d_final = 0;
};

Plan make_plan(const WeightSystem& w, int steps, const OptTrunc& trunc) {
  Plan p;
  if (!trunc) {
    if (w.infinite()) throw UnboundedSum(w.name + ": infinite height needs a truncation degree");
    p.rows = *w.height;
    return p;
  }
  p.trunc = true;
  p.rows = truncation_row_bound(w, *trunc, steps);
  int floor_deg = std::min(0, w.row_degree_lb(0));
  p.d_final = trunc->D;
  p.d_inner = trunc->D - steps * floor_deg;
  return p;
}

template <class R>
struct Ring;

template <>
struct Ring<LaurentPoly> {
  static LaurentPoly weight(const WeightSystem& w, int t, int i, int j) { return w.poly(t, i, j); }
  static LaurentPoly mul(const LaurentPoly& x, const LaurentPoly& y, const Plan& p) {
    return p.trunc ? x.mul_trunc(y, p.d_inner) : x * y;
  }
  static LaurentPoly finish(const LaurentPoly& x, const Plan& p) {
    return p.trunc ? series_truncate(x, {p.d_final}) : x;
  }
  static bool zero(const LaurentPoly& x) { return x.is_zero(); }
};

template <>
struct Ring<Frac> {
  static Frac weight(const WeightSystem& w, int t, int i, int j) { return w(t, i, j); }
  static Frac mul(const Frac& x, const Frac& y, const Plan&) { return x * y; }
  static Frac finish(const Frac& x, const Plan&) { return x.reduced(); }
  static bool zero(const Frac& x) { return x.is_zero(); }
};

// W[i][α] for the east step α_i, i in k+1..n
template <class R>
std::vector<std::vector<R>> weight_table(const WeightSystem& w, int n, int k, int rows) {
  std::vector<std::vector<R>> W(n + 1);
  for (int i = k + 1; i <= n; ++i) {
    W[i].resize(size_t(rows) * i);
    for (int a = 0; a < rows * i; ++a) W[i][a] = Ring<R>::weight(w, a / i, i - 1, a % i);
  }
  return W;
}

template <class R>
R h_dp(const WeightSystem& w, int n, int k, const OptTrunc& trunc) {
  if (n < k) return R(0);
  if (n == k) return R(1);
  Plan p = make_plan(w, n - k, trunc);
  if (p.rows == 0) return R(0);
  auto W = weight_table<R>(w, n, k, p.rows);
  std::vector<R> F(size_t(p.rows) * n, R(1));
  for (int i = n;; --i) {
    int width = p.rows * i;
    std::vector<R> P(width);
    R acc(0);
    for (int a = 0; a < width; ++a) {
      if (!Ring<R>::zero(W[i][a]) && !Ring<R>::zero(F[a])) acc += Ring<R>::mul(W[i][a], F[a], p);
      P[a] = acc;
    }
    if (i == k + 1) return Ring<R>::finish(acc, p);
    // α_{i−1}/(i−1) ≥ α_i/i  ⇔  α_i ≤ α_{i−1}·i/(i−1)
    std::vector<R> next(size_t(p.rows) * (i - 1));
    for (int a = 0; a < p.rows * (i - 1); ++a) {
      long idx = std::min<long>(width - 1, long(a) * i / (i - 1));
      next[a] = P[idx];
    }
    F = std::move(next);
  }
}

template <class R>
R e_dp(const WeightSystem& w, int n, int k, const OptTrunc& trunc) {
  if (n < k) return R(0);
  if (n == k) return R(1);
  Plan p = make_plan(w, n - k, trunc);
  if (p.rows == 0) return R(0);
  auto W = weight_table<R>(w, n, k, p.rows);
  std::vector<R> E(size_t(p.rows) * n, R(1));
  for (int i = n;; --i) {
    int width = p.rows * i;
    std::vector<R> S(width + 1, R(0));
    for (int a = width - 1; a >= 0; --a) {
      S[a] = S[a + 1];
      if (!Ring<R>::zero(W[i][a]) && !Ring<R>::zero(E[a])) S[a] += Ring<R>::mul(W[i][a], E[a], p);
    }
    if (i == k + 1) return Ring<R>::finish(S[0], p);
    // α_i/i > α_{i−1}/(i−1)
    std::vector<R> next(size_t(p.rows) * (i - 1));
    for (int a = 0; a < p.rows * (i - 1); ++a) {
      long lo = long(a) * i / (i - 1) + 1;
      next[a] = lo < width ? S[lo] : R(0);
    }
    E = std::move(next);
  }
}

template <class R>
R enumerate_sum(const WeightSystem& w, int n, int k, PathKind kind, const OptTrunc& trunc) {
  if (n < k) return R(0);
  if (n == k) return R(1);
  Plan p = make_plan(w, n - k, trunc);
  if (p.rows == 0) return R(0);
  auto W = weight_table<R>(w, n, k, p.rows);
  DegreeGate gate;
  std::vector<std::vector<int>> mindeg(n + 1);
  int floor_deg = 0;
  if (p.trunc) {
    floor_deg = std::min(0, w.row_degree_lb(0));
    for (int i = k + 1; i <= n; ++i)
      for (const auto& x : W[i]) mindeg[i].push_back(weight_min_deg(Frac(x)));
    gate = [&](const std::vector<int>& prefix, int column) {
      long total = 0;
      for (int c = k + 1; c <= column; ++c) total += mindeg[c][prefix[c - k - 1]];
      return total + long(n - column) * floor_deg <= p.d_final;
    };
  }
  R sum(0);
  enumerate_compositions(
      n, k, kind, p.rows,
      [&](const LHComposition& c) {
        R prod(1);
        for (int i = k + 1; i <= n; ++i) {
          const R& x = W[i][c.at(i)];
          if (Ring<R>::zero(x)) return;
          prod = Ring<R>::mul(prod, x, p);
        }
        sum += prod;
      },
      gate);
  return Ring<R>::finish(sum, p);
}

void require_laurent(const WeightSystem& w) {
  if (!w.laurent) throw MomentError(w.name + ": rational weights need the fraction engine");
}

}  // namespace

LaurentPoly h_value(const WeightSystem& w, int n, int k, OptTrunc trunc) {
  require_laurent(w);
  return h_dp<LaurentPoly>(w, n, k, trunc);
}

LaurentPoly e_value(const WeightSystem& w, int n, int k, OptTrunc trunc) {
  require_laurent(w);
  return e_dp<LaurentPoly>(w, n, k, trunc);
}

LaurentPoly h_enumerate(const WeightSystem& w, int n, int k, OptTrunc trunc) {
  require_laurent(w);
  return enumerate_sum<LaurentPoly>(w, n, k, PathKind::SE, trunc);
}

LaurentPoly e_enumerate(const WeightSystem& w, int n, int k, OptTrunc trunc) {
  require_laurent(w);
  return enumerate_sum<LaurentPoly>(w, n, k, PathKind::NEstar, trunc);
}

Frac h_frac(const WeightSystem& w, int n, int k) { return h_dp<Frac>(w, n, k, std::nullopt); }
Frac e_frac(const WeightSystem& w, int n, int k) { return e_dp<Frac>(w, n, k, std::nullopt); }
Frac h_frac_enumerate(const WeightSystem& w, int n, int k) {
  return enumerate_sum<Frac>(w, n, k, PathKind::SE, std::nullopt);
}

// ---- triangular arrays ----

TriangularArray::TriangularArray(int n) : N(n), rows(n + 1) {
  for (int r = 0; r <= n; ++r) rows[r].assign(r + 1, Frac(0));
}

TriangularArray TriangularArray::build(int N, const std::function<Frac(int, int)>& f, bool unitriangular) {
  TriangularArray a(N);
  a.unitriangular = unitriangular;
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= n; ++k) a.rows[n][k] = f(n, k);
  return a;
}

Frac TriangularArray::at(int n, int k) const {
  if (k < 0 || n < k || n > N) return Frac(0);
  return rows[n][k];
}

nlohmann::json TriangularArray::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= n; ++k)
      entries.push_back({{"n", n}, {"k", k}, {"num", rows[n][k].num().to_json()},
                         {"den", rows[n][k].den().to_json()}});
  return {{"N", N}, {"entries", entries}};
}

std::string TriangularArray::to_csv() const {
  std::ostringstream os;
  os << "n,k,polynomial\n";
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= n; ++k) os << n << "," << k << ",\"" << rows[n][k].str() << "\"\n";
  return os.str();
}

bool operator==(const TriangularArray& x, const TriangularArray& y) {
  if (x.N != y.N) return false;
  for (int n = 0; n <= x.N; ++n)
    for (int k = 0; k <= n; ++k)
      if (x.at(n, k) != y.at(n, k)) return false;
  return true;
}

TriangularArray h_array(const WeightSystem& w, int N, OptTrunc trunc) {
  return TriangularArray::build(N, [&](int n, int k) {
    if (!w.laurent) {
      if (trunc) return Frac(frac_series(h_frac(w, n, k), *trunc));
      return h_frac(w, n, k);
    }
    return Frac(h_value(w, n, k, trunc));
  });
}

TriangularArray e_array(const WeightSystem& w, int N, OptTrunc trunc) {
  return TriangularArray::build(N, [&](int n, int k) {
    if (!w.laurent) {
      if (trunc) return Frac(frac_series(e_frac(w, n, k), *trunc));
      return e_frac(w, n, k);
    }
    return Frac(e_value(w, n, k, trunc));
  });
}

nlohmann::json CheckReport::to_json() const {
  return {{"check", check}, {"range", range}, {"pass", pass}, {"counterexamples", counterexamples}};
}

CheckReport check_duality(const WeightSystem& w, int N, OptTrunc trunc) {
  CheckReport rep;
  rep.check = "duality:" + w.name;
  rep.range = {{"N", N}};
  if (trunc) rep.range["D"] = trunc->D;
  int floor_deg = w.laurent ? std::min(0, w.row_degree_lb(0)) : 0;
  TriangularArray H, E;
  if (!w.laurent) {
    H = h_array(w, N);
    E = e_array(w, N);
  }
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= n; ++m) {
      bool ok;
      if (!w.laurent) {
        Frac s(0);
        for (int r = m; r <= n; ++r) {
          Frac term = H.at(n, r) * E.at(r, m);
          s += (r - m) % 2 ? -term : term;
        }
        ok = s == Frac(n == m ? 1 : 0);
      } else {
        OptTrunc inner;
        if (trunc) inner = TruncSpec{trunc->D - (n - m) * floor_deg};
        LaurentPoly s;
        for (int r = m; r <= n; ++r) {
          LaurentPoly h = h_value(w, n, r, inner), e = e_value(w, r, m, inner);
          LaurentPoly term = trunc ? h.mul_trunc(e, trunc->D) : h * e;
          if ((r - m) % 2) s -= term;
          else s += term;
        }
        if (trunc) s = series_truncate(s, *trunc);
        ok = s == LaurentPoly(n == m ? 1 : 0);
      }
      if (!ok) rep.fail("n=" + std::to_string(n) + " m=" + std::to_string(m));
    }
  return rep;
}

TriangularArray compose_mixed(const TriangularArray& tau, const TriangularArray& sigma) {
  int N = std::min(tau.N, sigma.N);
  return TriangularArray::build(N, [&](int n, int k) {
    Frac s(0);
    for (int r = k; r <= n; ++r) {
      const Frac& x = tau.rows[n][r];
      const Frac& y = sigma.rows[r][k];
      if (!x.is_zero() && !y.is_zero()) s += x * y;
    }
    return s;
  });
}

TriangularArray inverse_unitriangular(const TriangularArray& a) {
  TriangularArray b(a.N);
  for (int n = 0; n <= a.N; ++n) {
    if (a.rows[n][n] != Frac(1)) throw MomentError("inverse_unitriangular: diagonal entry is not 1");
    b.rows[n][n] = Frac(1);
    for (int k = n - 1; k >= 0; --k) {
      Frac s(0);
      for (int r = k; r < n; ++r)
        if (!a.rows[n][r].is_zero() && !b.rows[r][k].is_zero()) s += a.rows[n][r] * b.rows[r][k];
      b.rows[n][k] = -s;
    }
  }
  return b;
}

TriangularArray diagonal_conjugate(const TriangularArray& a, const std::function<Frac(int)>& z) {
  std::vector<Frac> zs;
  for (int n = 0; n <= a.N; ++n) {
    zs.push_back(z(n));
    if (zs.back().is_zero()) throw ZeroScale("diagonal_conjugate: z_" + std::to_string(n) + " is zero");
  }
  auto r = TriangularArray::build(a.N, [&](int n, int k) { return a.at(n, k) * zs[n] / zs[k]; });
  r.unitriangular = a.unitriangular;
  return r;
}

TriangularArray signed_array(const TriangularArray& a) {
  return TriangularArray::build(a.N, [&](int n, int k) { return (n - k) % 2 ? -a.at(n, k) : a.at(n, k); });
}

TriangularArray series_array(const TriangularArray& a, const TruncSpec& t) {
  return TriangularArray::build(a.N, [&](int n, int k) { return Frac(frac_series(a.at(n, k), t)); });
}

Frac minor(const TriangularArray& a, int r, int i, int j) {
  if (r == 0) return Frac(1);
  // Laplace expansion along rows, memoized on the set of used columns
  std::vector<Frac> det(size_t(1) << r, Frac(0));
  std::vector<bool> done(size_t(1) << r, false);
  det[0] = Frac(1);
  done[0] = true;
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    int row = __builtin_popcount(mask) - 1;
    Frac s(0);
    int above = 0;  // used columns to the right of c
    for (int c = r - 1; c >= 0; --c) {
      if (!(mask & (1u << c))) continue;
      Frac entry = a.at(i + row, j + c);
      const Frac& sub = det[mask & ~(1u << c)];
      if (!entry.is_zero() && !sub.is_zero()) {
        Frac term = entry * sub;
        s += above % 2 ? -term : term;
      }
      ++above;
    }
    det[mask] = s.reduced();
  }
  return det[(1u << r) - 1];
}

std::vector<std::vector<Frac>> extract_height1(const TriangularArray& a) {
  std::map<std::pair<int, int>, Frac> memo;
  auto A = [&](int r, int i) -> const Frac& {
    auto it = memo.find({r, i});
    if (it == memo.end()) it = memo.emplace(std::pair{r, i}, minor(a, r, i, 0)).first;
    return it->second;
  };
  std::vector<std::vector<Frac>> table(a.N);
  for (int i = 0; i < a.N; ++i)
    for (int j = 0; j <= i; ++j) {
      const Frac& lo = A(j + 1, i - j);
      const Frac& hi = A(j, i - j + 1);
      if (lo.is_zero() || hi.is_zero())
        throw SingularMinor("zero minor at i=" + std::to_string(i) + ", j=" + std::to_string(j));
      // two ratios of neighbouring minors, each much smaller than the full quotient
      Frac x = (A(j + 1, i - j + 1) / lo).reduced();
      Frac y = (A(j, i - j) / hi).reduced();
      table[i].push_back((x * y).reduced());
    }
  return table;
}

// ---- guessing from moments ----

MonomialOrder MonomialOrder::parse(const std::string& spec) {
  MonomialOrder o;
  for (char ch : spec) {
    if (ch == '<' || ch == ' ') continue;
    const char* p = std::char_traits<char>::find(kVarNames, kVars, ch);
    if (!p) throw std::invalid_argument("unknown variable in order: " + spec);
    Var v = Var(p - kVarNames);
    if (std::find(o.precedence.begin(), o.precedence.end(), v) != o.precedence.end())
      throw std::invalid_argument("variable listed twice in order: " + spec);
    o.precedence.push_back(v);
  }
  return o;
}

int MonomialOrder::compare(const Mono& x, const Mono& y) const {
  for (auto it = precedence.rbegin(); it != precedence.rend(); ++it)
    if (x.e[*it] != y.e[*it]) return x.e[*it] < y.e[*it] ? -1 : 1;
  return 0;
}

std::string MonomialOrder::str() const {
  std::string s;
  for (size_t i = 0; i < precedence.size(); ++i) {
    if (i) s += "<";
    s += kVarNames[precedence[i]];
  }
  return s;
}

namespace {

std::vector<Term> ordered_terms(const Frac& f, const MonomialOrder& order, int D) {
  LaurentPoly s = frac_series(f, {D});
  std::vector<Term> terms = s.terms();
  std::stable_sort(terms.begin(), terms.end(),
                   [&](const Term& x, const Term& y) { return order.compare(x.m, y.m) < 0; });
  for (size_t i = 0; i + 1 < terms.size(); ++i)
    if (order.compare(terms[i].m, terms[i + 1].m) == 0)
      throw AmbiguousOrder("terms " + LaurentPoly(terms[i].c, terms[i].m).str() + " and " +
                           LaurentPoly(terms[i + 1].c, terms[i + 1].m).str() + " compare equal under " +
                           order.str());
  return terms;
}

bool same_prefix(const std::vector<Term>& x, const std::vector<Term>& y, size_t len) {
  if (x.size() < len || y.size() < len) return false;
  for (size_t i = 0; i < len; ++i)
    if (x[i].m != y[i].m || x[i].c != y[i].c) return false;
  return true;
}

}  // namespace

GuessTable guess_infinite(const std::function<Frac(int n)>& col_provider, const MonomialOrder& order, int steps,
                          int cols) {
  GuessTable table(cols);
  for (int i = 0; i < cols; ++i) {
    Frac sigma = col_provider(i + 1);
    // grow the truncation until the leading terms stop moving
    std::vector<Term> prev = ordered_terms(sigma, order, 0);
    bool settled = false;
    for (int D = 1; D <= 40 && !settled; ++D) {
      std::vector<Term> cur = ordered_terms(sigma, order, D);
      std::vector<Term> ahead = ordered_terms(sigma, order, D + 2);
      if (same_prefix(cur, ahead, steps) && same_prefix(prev, cur, steps)) {
        settled = true;
        for (int s = 0; s < steps; ++s) table[i].push_back(LaurentPoly(cur[s].c, cur[s].m));
      }
      prev = std::move(cur);
    }
    if (!settled) throw MomentError("guess_infinite: series terms did not settle for column " + std::to_string(i));
  }
  return table;
}

std::vector<LaurentPoly> factorial_expand(const std::function<LaurentPoly(int)>& d, int n) {
  WeightSystem w1 = height1_from_sequence(d, -kNoTerms);
  std::vector<LaurentPoly> out;
  for (int k = 0; k <= n; ++k) out.push_back(h_value(w1, n, k));
  return out;
}

}  // namespace lhg
