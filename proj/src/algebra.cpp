#include "lhg/algebra.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace lhg {

bool canonical_less(const Mono& x, const Mono& y) {
  int dx = x.deg(), dy = y.deg();
  if (dx != dy) return dx < dy;
  for (int v = kA; v <= kD; ++v)
    if (x.e[v] != y.e[v]) return x.e[v] > y.e[v];
  return x.e[kQ] < y.e[kQ];
}

std::string rat_str(const Rat& r) { return r.get_str(); }

LaurentPoly::LaurentPoly(long c) {
  if (c != 0) terms_.push_back({Mono{}, Rat(c)});
}

LaurentPoly::LaurentPoly(const Rat& c) {
  if (c != 0) terms_.push_back({Mono{}, c});
}

LaurentPoly::LaurentPoly(const Rat& c, const Mono& m) {
  if (c != 0) terms_.push_back({m, c});
}

LaurentPoly mono(const Rat& c, int eq, int ea, int eb, int ec, int ed) {
  Mono m;
  m.e = {eq, ea, eb, ec, ed};
  return LaurentPoly(c, m);
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& x, const Term& y) { return canonical_less(x.m, y.m); });
  LaurentPoly r;
  for (auto& t : terms) {
    if (!r.terms_.empty() && r.terms_.back().m == t.m) {
      r.terms_.back().c += t.c;
    } else {
      if (!r.terms_.empty() && r.terms_.back().c == 0) r.terms_.pop_back();
      r.terms_.push_back(std::move(t));
    }
  }
  if (!r.terms_.empty() && r.terms_.back().c == 0) r.terms_.pop_back();
  return r;
}

Rat LaurentPoly::coeff(const Mono& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Mono& x) { return canonical_less(t.m, x); });
  if (it != terms_.end() && it->m == m) return it->c;
  return 0;
}

int LaurentPoly::min_deg() const { return terms_.front().m.deg(); }
int LaurentPoly::max_deg() const { return terms_.back().m.deg(); }

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.c = -t.c;
  return r;
}

static std::vector<Term> merge_terms(const std::vector<Term>& x, const std::vector<Term>& y, int sign) {
  std::vector<Term> out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && canonical_less(x[i].m, y[j].m))) {
      out.push_back(x[i++]);
    } else if (i == x.size() || canonical_less(y[j].m, x[i].m)) {
      out.push_back({y[j].m, sign > 0 ? y[j].c : Rat(-y[j].c)});
      ++j;
    } else {
      Rat c = sign > 0 ? Rat(x[i].c + y[j].c) : Rat(x[i].c - y[j].c);
      if (c != 0) out.push_back({x[i].m, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, 1);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, -1);
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) { return *this = *this * o; }

LaurentPoly& LaurentPoly::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.c *= c;
  return *this;
}

static LaurentPoly multiply(const LaurentPoly& x, const LaurentPoly& y, int D, bool trunc) {
  if (x.is_zero() || y.is_zero()) return {};
  const auto& xs = x.terms();
  const auto& ys = y.terms();
  if (xs.size() == 1 && !trunc) return y.mul_mono(xs[0].m, xs[0].c);
  if (ys.size() == 1 && !trunc) return x.mul_mono(ys[0].m, ys[0].c);
  std::unordered_map<Mono, Rat, MonoHash> acc;
  acc.reserve(xs.size() * ys.size() / 2 + 8);
  Rat tmp;
  for (const auto& s : xs) {
    int ds = s.m.deg();
    for (const auto& t : ys) {
      if (trunc && ds + t.m.deg() > D) break;  // ys is sorted by degree
      Mono m = s.m * t.m;
      mpq_mul(tmp.get_mpq_t(), s.c.get_mpq_t(), t.c.get_mpq_t());
      auto [it, fresh] = acc.try_emplace(m, tmp);
      if (!fresh) it->second += tmp;
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) out.push_back({m, std::move(c)});
  return LaurentPoly::from_terms(std::move(out));
}

LaurentPoly operator*(const LaurentPoly& x, const LaurentPoly& y) { return multiply(x, y, 0, false); }

LaurentPoly LaurentPoly::mul_trunc(const LaurentPoly& o, int D) const { return multiply(*this, o, D, true); }

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].m != o.terms_[i].m || terms_[i].c != o.terms_[i].c) return false;
  return true;
}

LaurentPoly LaurentPoly::mul_mono(const Mono& m, const Rat& c) const {
  LaurentPoly r;
  if (c == 0) return r;
  r.terms_.reserve(terms_.size());
  // shifting every exponent by the same vector keeps the canonical order
  for (const auto& t : terms_) r.terms_.push_back({t.m * m, t.c * c});
  return r;
}

LaurentPoly LaurentPoly::pow(int e) const {
  if (e < 0) {
    if (!is_monomial()) throw AlgebraError("negative power of a non-monomial");
    const Term& t = terms_[0];
    Rat c = 1;
    for (int i = 0; i < -e; ++i) c /= t.c;
    Mono m;
    for (int v = 0; v < kVars; ++v) m.e[v] = t.m.e[v] * e;
    return LaurentPoly(c, m);
  }
  LaurentPoly r(1), base = *this;
  while (e > 0) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

std::string LaurentPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (i) out += " + ";
    out += rat_str(terms_[i].c);
    if (terms_[i].m.is_one()) continue;
    out += " *";
    for (int v = 0; v < kVars; ++v) {
      int e = terms_[i].m.e[v];
      if (e == 0) continue;
      out += ' ';
      out += kVarNames[v];
      out += '^';
      out += std::to_string(e);
    }
  }
  return out;
}

nlohmann::json LaurentPoly::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms_) {
    arr.push_back({{"num", t.c.get_num().get_str()},
                   {"den", t.c.get_den().get_str()},
                   {"exp", std::vector<int>(t.m.e.begin(), t.m.e.end())}});
  }
  return arr;
}

LaurentPoly LaurentPoly::from_json(const nlohmann::json& j) {
  std::vector<Term> terms;
  for (const auto& t : j) {
    Mono m;
    auto exps = t.at("exp").get<std::vector<int>>();
    if (exps.size() != kVars) throw ParseError("exp must have five entries");
    for (int v = 0; v < kVars; ++v) m.e[v] = exps[v];
    Rat c(mpz_class(t.at("num").get<std::string>()), mpz_class(t.at("den").get<std::string>()));
    c.canonicalize();
    terms.push_back({m, c});
  }
  return from_terms(std::move(terms));
}

static Rat parse_rat(const std::string& s) {
  if (s.empty()) throw ParseError("empty coefficient");
  Rat r;
  if (r.set_str(s, 10) != 0) throw ParseError("bad coefficient: " + s);
  r.canonicalize();
  return r;
}

LaurentPoly LaurentPoly::parse(const std::string& s) {
  if (s == "0") return {};
  std::vector<Term> terms;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t next = s.find(" + ", pos);
    std::string piece = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    Mono m;
    std::string coeff = piece;
    size_t star = piece.find(" * ");
    if (star != std::string::npos) {
      coeff = piece.substr(0, star);
      std::istringstream fs(piece.substr(star + 3));
      std::string f;
      while (fs >> f) {
        if (f.size() < 3 || f[1] != '^') throw ParseError("bad factor: " + f);
        const char* p = std::char_traits<char>::find(kVarNames, kVars, f[0]);
        if (!p) throw ParseError("unknown variable in: " + f);
        m.e[p - kVarNames] += std::stoi(f.substr(2));
      }
    }
    terms.push_back({m, parse_rat(coeff)});
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  return from_terms(std::move(terms));
}

bool poly_less(const LaurentPoly& x, const LaurentPoly& y) {
  const auto& a = x.terms();
  const auto& b = y.terms();
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a[i].m != b[i].m) return canonical_less(a[i].m, b[i].m);
    if (a[i].c != b[i].c) return a[i].c < b[i].c;
  }
  return a.size() < b.size();
}

LaurentPoly substitute(const LaurentPoly& x, const std::map<Var, LaurentPoly>& repl) {
  // cache powers of each replacement
  std::map<std::pair<int, int>, LaurentPoly> powers;
  auto power = [&](Var v, int e) -> const LaurentPoly& {
    auto key = std::make_pair(int(v), e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    return powers.emplace(key, repl.at(v).pow(e)).first->second;
  };
  LaurentPoly out;
  std::vector<Term> simple;
  for (const auto& t : x.terms()) {
    Mono rest = t.m;
    LaurentPoly factor(t.c);
    bool is_mono = true;
    for (const auto& [v, r] : repl) {
      int e = rest.e[v];
      if (e == 0) continue;
      rest.e[v] = 0;
      const LaurentPoly& p = power(v, e);
      if (p.is_zero()) {
        factor = LaurentPoly();
        break;
      }
      if (is_mono && p.is_monomial()) {
        factor = factor.mul_mono(p.terms()[0].m, p.terms()[0].c);
      } else {
        factor = factor * p;
        is_mono = false;
      }
    }
    if (factor.is_zero()) continue;
    if (is_mono) {
      simple.push_back({factor.terms()[0].m * rest, factor.terms()[0].c});
    } else {
      out += factor.mul_mono(rest);
    }
  }
  out += LaurentPoly::from_terms(std::move(simple));
  return out;
}

LaurentPoly substitute(const LaurentPoly& x, Var v, const LaurentPoly& replacement) {
  return substitute(x, std::map<Var, LaurentPoly>{{v, replacement}});
}

LaurentPoly series_truncate(const LaurentPoly& x, const TruncSpec& t) {
  std::vector<Term> kept;
  for (const auto& term : x.terms())
    if (term.m.deg() <= t.D) kept.push_back(term);
  return LaurentPoly::from_terms(std::move(kept));
}

LaurentPoly qpoch(const LaurentPoly& base, int n) {
  LaurentPoly r(1);
  for (int i = 0; i < n; ++i) r *= LaurentPoly(1) - base * qv(i);
  return r;
}

// q-binomial coefficients as integer coefficient vectors, built row by row
static std::vector<mpz_class> qbinom_coeffs(int n, int k) {
  std::vector<std::vector<std::vector<mpz_class>>> rows(n + 1);
  for (int m = 0; m <= n; ++m) {
    rows[m].resize(m + 1);
    rows[m][0] = {1};
    rows[m][m] = {1};
    for (int j = 1; j < m; ++j) {
      // [m j] = q^j [m-1 j] + [m-1 j-1]
      const auto& x = rows[m - 1][j];
      const auto& y = rows[m - 1][j - 1];
      std::vector<mpz_class> c(j * (m - j) + 1);
      for (size_t e = 0; e < x.size(); ++e) c[e + j] += x[e];
      for (size_t e = 0; e < y.size(); ++e) c[e] += y[e];
      rows[m][j] = std::move(c);
    }
  }
  return rows[n][k];
}

LaurentPoly qbinom(int n, int k) {
  if (n < 0 || k < 0 || k > n) return {};
  auto c = qbinom_coeffs(n, k);
  std::vector<Term> terms;
  for (size_t e = 0; e < c.size(); ++e)
    if (c[e] != 0) terms.push_back({Mono::var(kQ, int(e)), Rat(c[e])});
  return LaurentPoly::from_terms(std::move(terms));
}

LaurentPoly qint(int n) {
  LaurentPoly r;
  for (int e = 0; e < n; ++e) r += qv(e);
  return r;
}

LaurentPoly qmultinom(int n, int k, const std::vector<int>& parts) {
  int total = k;
  for (int p : parts) total += p;
  if (total != n) throw AlgebraError("q-multinomial parts do not sum to n");
  LaurentPoly r = qbinom(n, k);
  int rest = n - k;
  for (int p : parts) {
    r *= qbinom(rest, p);
    rest -= p;
  }
  return r;
}

// ---- Frac ----

Frac::Frac(const LaurentPoly& num, const LaurentPoly& den) : num_(num) { divide_by(den, 1); }

Frac Frac::over(const LaurentPoly& num, const std::vector<LaurentPoly>& den_factors) {
  Frac f(num);
  for (const auto& p : den_factors) f.divide_by(p, 1);
  return f;
}

void Frac::divide_by(const LaurentPoly& p, int mult) {
  if (p.is_zero()) throw AlgebraError("division by zero");
  if (mult == 0) return;
  const Term& lead = p.terms().front();
  Rat cinv = 1 / lead.c;
  Mono minv = lead.m.inverse();
  // move the unit lead.c * lead.m into the numerator
  Rat unit = 1;
  Mono unit_m;
  for (int i = 0; i < mult; ++i) {
    unit *= cinv;
    unit_m = unit_m * minv;
  }
  num_ = num_.mul_mono(unit_m, unit);
  if (p.is_monomial()) return;
  LaurentPoly normalized = p.mul_mono(minv, cinv);
  den_[normalized] += mult;
}

LaurentPoly Frac::den() const {
  LaurentPoly r(1);
  for (const auto& [f, m] : den_) r *= f.pow(m);
  return r;
}

Frac Frac::operator-() const {
  Frac r = *this;
  r.num_ = -r.num_;
  return r;
}

// numerator scaled by the factors of `target` missing from `own`
static LaurentPoly lift(const LaurentPoly& num, const FactorMap& own, const FactorMap& target) {
  LaurentPoly r = num;
  for (const auto& [f, m] : target) {
    auto it = own.find(f);
    int have = it == own.end() ? 0 : it->second;
    for (int i = have; i < m; ++i) r *= f;
  }
  return r;
}

static FactorMap lcm(const FactorMap& x, const FactorMap& y) {
  FactorMap r = x;
  for (const auto& [f, m] : y) {
    auto& slot = r[f];
    slot = std::max(slot, m);
  }
  return r;
}

Frac operator+(const Frac& x, const Frac& y) {
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  Frac r;
  if (x.den_.size() == y.den_.size() && std::equal(x.den_.begin(), x.den_.end(), y.den_.begin(),
                                                   [](const auto& p, const auto& s) {
                                                     return p.second == s.second && p.first == s.first;
                                                   })) {
    r.num_ = x.num_ + y.num_;
    r.den_ = x.den_;
  } else {
    r.den_ = lcm(x.den_, y.den_);
    r.num_ = lift(x.num_, x.den_, r.den_) + lift(y.num_, y.den_, r.den_);
  }
  if (r.num_.is_zero()) r.den_.clear();
  return r;
}

Frac operator-(const Frac& x, const Frac& y) { return x + (-y); }

Frac operator*(const Frac& x, const Frac& y) {
  Frac r;
  r.num_ = x.num_ * y.num_;
  if (r.num_.is_zero()) return r;
  r.den_ = x.den_;
  for (const auto& [f, m] : y.den_) r.den_[f] += m;
  return r;
}

Frac operator/(const Frac& x, const Frac& y) {
  if (y.is_zero()) throw AlgebraError("division by zero fraction");
  Frac r;
  r.num_ = x.num_;
  for (const auto& [f, m] : y.den_) r.num_ *= f.pow(m);
  if (r.num_.is_zero()) return r;
  r.den_ = x.den_;
  r.divide_by(y.num_, 1);
  return r;
}

bool Frac::operator==(const Frac& o) const {
  if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
  FactorMap L = lcm(den_, o.den_);
  return lift(num_, den_, L) == lift(o.num_, o.den_, L);
}

Frac Frac::substitute(const std::map<Var, LaurentPoly>& repl) const {
  Frac r(lhg::substitute(num_, repl));
  if (r.num_.is_zero()) return r;
  for (const auto& [f, m] : den_) r.divide_by(lhg::substitute(f, repl), m);
  return r;
}

Frac Frac::reduced() const {
  if (den_.empty()) return *this;
  Frac r;
  r.num_ = num_;
  for (const auto& [f, m] : den_) {
    int left = m;
    while (left > 0) {
      auto q = exact_divide(r.num_, f);
      if (!q) break;
      r.num_ = std::move(*q);
      --left;
    }
    if (left > 0) r.den_[f] = left;
  }
  return r;
}

std::string Frac::str() const {
  if (den_.empty()) return num_.str();
  std::string s = "(" + num_.str() + ") / (";
  bool first = true;
  for (const auto& [f, m] : den_) {
    if (!first) s += " ";
    first = false;
    s += "(" + f.str() + ")";
    if (m > 1) s += "^" + std::to_string(m);
  }
  return s + ")";
}

// The canonical order is compatible with multiplication, so the lowest
// remaining term always comes from the lowest term of f.
std::optional<LaurentPoly> exact_divide(const LaurentPoly& p, const LaurentPoly& f) {
  if (f.is_zero()) throw AlgebraError("division by zero");
  if (p.is_zero()) return LaurentPoly();
  auto less = [](const Mono& x, const Mono& y) { return canonical_less(x, y); };
  std::map<Mono, Rat, decltype(less)> rem(less);
  for (const auto& t : p.terms()) rem.emplace(t.m, t.c);
  const Term& lo = f.terms().front();
  const Term& hi = f.terms().back();
  Mono lo_inv = lo.m.inverse();
  const Mono top = p.terms().back().m;
  std::vector<Term> quot;
  while (!rem.empty()) {
    auto first = rem.begin();
    Mono m = first->first * lo_inv;
    if (canonical_less(top, m * hi.m)) return std::nullopt;
    Rat c = first->second / lo.c;
    for (const auto& t : f.terms()) {
      Mono key = t.m * m;
      Rat v = t.c * c;
      auto [it, fresh] = rem.try_emplace(key, -v);
      if (!fresh) {
        it->second -= v;
        if (it->second == 0) rem.erase(it);
      } else if (canonical_less(top, key)) {
        return std::nullopt;
      }
    }
    quot.push_back({m, std::move(c)});
  }
  return LaurentPoly::from_terms(std::move(quot));
}

LaurentPoly frac_series(const Frac& f, const TruncSpec& t) {
  if (f.is_zero()) return {};
  const LaurentPoly& num = f.num();
  int budget = t.D - num.min_deg();  // degree needed from the inverted denominator
  if (budget < 0) return {};
  LaurentPoly inv(1);
  for (const auto& [fac, mult] : f.den_factors()) {
    // fac = 1 + r with every term of r of positive parameter degree
    LaurentPoly r = fac - LaurentPoly(1);
    for (const auto& term : r.terms())
      if (term.m.deg() < 1)
        throw NonUnitDenominator("denominator factor " + fac.str() + " is not 1 + (positive degree)");
    LaurentPoly geo(1), power(1), neg_r = -r;
    for (int j = 1; j <= budget; ++j) {
      power = power.mul_trunc(neg_r, budget);
      if (power.is_zero()) break;
      geo += power;
    }
    for (int m = 0; m < mult; ++m) inv = inv.mul_trunc(geo, budget);
  }
  return num.mul_trunc(inv, t.D);
}

std::array<LaurentPoly, 4> unit_substitute(const LaurentPoly& x, const std::array<int, 4>& units) {
  std::array<std::vector<Term>, 4> parts;
  for (const auto& t : x.terms()) {
    long cls = 0;
    for (int v = 0; v < 4; ++v) cls += long(t.m.e[kA + v]) * units[v];
    cls = ((cls % 4) + 4) % 4;
    // i^2 = -1 is folded into the class, so coefficients are unchanged
    parts[cls].push_back(t);
  }
  std::array<LaurentPoly, 4> out;
  for (int c = 0; c < 4; ++c) out[c] = LaurentPoly::from_terms(std::move(parts[c]));
  return out;
}

}  // namespace lhg
