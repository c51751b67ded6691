#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace lhg {

using Rat = mpq_class;

enum Var : int { kQ = 0, kA = 1, kB = 2, kC = 3, kD = 4 };
inline constexpr int kVars = 5;
inline constexpr const char* kVarNames = "qabcd";

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonUnitDenominator : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct ParseError : AlgebraError {
  using AlgebraError::AlgebraError;
};

struct Mono {
  std::array<int, kVars> e{};

  static Mono var(Var v, int power = 1) {
    Mono m;
    m.e[v] = power;
    return m;
  }
  // total degree in the parameters a,b,c,d; q is never graded
  int deg() const { return e[kA] + e[kB] + e[kC] + e[kD]; }
  bool is_one() const { return e == std::array<int, kVars>{}; }
  Mono operator*(const Mono& o) const {
    Mono r;
    for (int v = 0; v < kVars; ++v) r.e[v] = e[v] + o.e[v];
    return r;
  }
  Mono inverse() const {
    Mono r;
    for (int v = 0; v < kVars; ++v) r.e[v] = -e[v];
    return r;
  }
  bool operator==(const Mono& o) const { return e == o.e; }
  bool operator!=(const Mono& o) const { return e != o.e; }
};

// Canonical order: parameter degree ascending, then (a,b,c,d) exponents
// descending, then the q exponent ascending.
bool canonical_less(const Mono& x, const Mono& y);

struct MonoHash {
  size_t operator()(const Mono& m) const {
    uint64_t h = 1469598103934665603ull;
    for (int v : m.e) {
      h ^= static_cast<uint64_t>(static_cast<uint32_t>(v));
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

struct Term {
  Mono m;
  Rat c;
};

struct TruncSpec {
  int D = 4;
};

class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(long c);  // NOLINT: constants convert implicitly
  LaurentPoly(const Rat& c);
  LaurentPoly(const Rat& c, const Mono& m);

  static LaurentPoly monomial(const Mono& m, const Rat& c = 1) { return LaurentPoly(c, m); }
  static LaurentPoly var(Var v, int power = 1) { return LaurentPoly(Rat(1), Mono::var(v, power)); }
  static LaurentPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  Rat coeff(const Mono& m) const;
  // minimum / maximum parameter degree; undefined on zero
  int min_deg() const;
  int max_deg() const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  LaurentPoly& operator*=(const Rat& c);
  friend LaurentPoly operator+(LaurentPoly x, const LaurentPoly& y) { return x += y; }
  friend LaurentPoly operator-(LaurentPoly x, const LaurentPoly& y) { return x -= y; }
  friend LaurentPoly operator*(const LaurentPoly& x, const LaurentPoly& y);
  friend LaurentPoly operator*(LaurentPoly x, const Rat& c) { return x *= c; }
  friend LaurentPoly operator*(LaurentPoly x, int c) { return x *= Rat(c); }
  friend LaurentPoly operator*(int c, LaurentPoly x) { return x *= Rat(c); }
  bool operator==(const LaurentPoly& o) const;
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  LaurentPoly mul_mono(const Mono& m, const Rat& c = 1) const;
  LaurentPoly pow(int e) const;  // e ≥ 0, or e < 0 for monomials
  // multiply and drop every term of parameter degree > D
  LaurentPoly mul_trunc(const LaurentPoly& o, int D) const;

  std::string str() const;
  nlohmann::json to_json() const;
  static LaurentPoly parse(const std::string& s);
  static LaurentPoly from_json(const nlohmann::json& j);

 private:
  std::vector<Term> terms_;  // canonical order, no zero coefficients
};

bool poly_less(const LaurentPoly& x, const LaurentPoly& y);
struct PolyLess {
  bool operator()(const LaurentPoly& x, const LaurentPoly& y) const { return poly_less(x, y); }
};
using FactorMap = std::map<LaurentPoly, int, PolyLess>;

// v ↦ replacement in every term. Negative powers of v require a monomial replacement.
LaurentPoly substitute(const LaurentPoly& x, Var v, const LaurentPoly& replacement);
// several substitutions applied simultaneously
LaurentPoly substitute(const LaurentPoly& x, const std::map<Var, LaurentPoly>& repl);

LaurentPoly series_truncate(const LaurentPoly& x, const TruncSpec& t);

LaurentPoly qpoch(const LaurentPoly& base, int n);
LaurentPoly qbinom(int n, int k);
LaurentPoly qmultinom(int n, int k, const std::vector<int>& parts);
LaurentPoly qint(int n);  // 1 + q + ... + q^{n-1}

// Quotient with the denominator kept as a product of normalized factors,
// each factor having 1 as its least term. Units live in the numerator.
class Frac {
 public:
  Frac() : num_(0) {}
  Frac(const LaurentPoly& p) : num_(p) {}  // NOLINT
  Frac(long c) : num_(c) {}                // NOLINT
  Frac(const LaurentPoly& num, const LaurentPoly& den);
  static Frac over(const LaurentPoly& num, const std::vector<LaurentPoly>& den_factors);

  const LaurentPoly& num() const { return num_; }
  LaurentPoly den() const;
  const FactorMap& den_factors() const { return den_; }
  bool is_laurent() const { return den_.empty(); }
  bool is_zero() const { return num_.is_zero(); }

  Frac operator-() const;
  friend Frac operator+(const Frac& x, const Frac& y);
  friend Frac operator-(const Frac& x, const Frac& y);
  friend Frac operator*(const Frac& x, const Frac& y);
  friend Frac operator/(const Frac& x, const Frac& y);
  Frac& operator+=(const Frac& o) { return *this = *this + o; }
  Frac& operator*=(const Frac& o) { return *this = *this * o; }
  // cross-multiplication equality
  bool operator==(const Frac& o) const;
  bool operator!=(const Frac& o) const { return !(*this == o); }

  Frac substitute(const std::map<Var, LaurentPoly>& repl) const;
  // cancels every denominator factor that divides the numerator
  Frac reduced() const;
  std::string str() const;

 private:
  void divide_by(const LaurentPoly& p, int mult);
  LaurentPoly num_;
  FactorMap den_;
};

LaurentPoly frac_series(const Frac& f, const TruncSpec& t);

// p / f when f divides p exactly
std::optional<LaurentPoly> exact_divide(const LaurentPoly& p, const LaurentPoly& f);

// Splits x after v ↦ i^{units[v]}·v (units indexed by a,b,c,d; values mod 4)
// by the resulting power of the imaginary unit.
std::array<LaurentPoly, 4> unit_substitute(const LaurentPoly& x, const std::array<int, 4>& units);

// Shorthands used all over the catalog.
inline LaurentPoly qv(int e) { return LaurentPoly::var(kQ, e); }
inline LaurentPoly av(int e = 1) { return LaurentPoly::var(kA, e); }
inline LaurentPoly bv(int e = 1) { return LaurentPoly::var(kB, e); }
inline LaurentPoly cv(int e = 1) { return LaurentPoly::var(kC, e); }
inline LaurentPoly dv(int e = 1) { return LaurentPoly::var(kD, e); }
LaurentPoly mono(const Rat& c, int eq, int ea = 0, int eb = 0, int ec = 0, int ed = 0);

std::string rat_str(const Rat& r);

}  // namespace lhg
