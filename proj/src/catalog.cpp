#include "lhg/catalog.hpp"

#include <algorithm>
#include <mutex>

namespace lhg {

namespace {

const char* const kStieltjes = "stieltjes-wigert";
const char* const kBessel = "q-bessel";
const char* const kLittle = "little-qjacobi";
const char* const kBig = "big-qjacobi";
const char* const kAW = "askey-wilson";
const char* const kHermite = "cts-q-hermite";
const char* const kBigHermite = "cts-big-q-hermite";
const char* const kASC = "al-salam-chihara";
const char* const kDualHahn = "cts-dual-q-hahn";

LaurentPoly sgn(int e) { return LaurentPoly(e % 2 == 0 ? 1 : -1); }
int c2(int n) { return n * (n - 1) / 2; }
LaurentPoly half() { return LaurentPoly(Rat(1, 2)); }
LaurentPoly rat_pow(const Rat& c, int e) {
  Rat r = 1;
  for (int i = 0; i < std::abs(e); ++i) r *= c;
  return LaurentPoly(e >= 0 ? r : Rat(1 / r));
}
LaurentPoly abcd() { return av() * bv() * cv() * dv(); }

// ∏_{m<n} (1 − base·q^m) pushed onto a factor list
void poch_factors(std::vector<LaurentPoly>& out, const LaurentPoly& base, int n) {
  for (int m = 0; m < n; ++m) out.push_back(LaurentPoly(1) - base * qv(m));
}

Frac poch_ratio(const LaurentPoly& num, const std::vector<std::pair<LaurentPoly, int>>& up,
                const std::vector<std::pair<LaurentPoly, int>>& down) {
  LaurentPoly top = num;
  for (const auto& [b, n] : up) top *= qpoch(b, n);
  std::vector<LaurentPoly> den;
  for (const auto& [b, n] : down) poch_factors(den, b, n);
  return Frac::over(top, den);
}

DegreeFn window_lb(std::function<int(int)> deg, int period) {
  return [deg = std::move(deg), period](int t) {
    int m = kNoTerms;
    for (int s = t; s < t + period; ++s) m = std::min(m, deg(s));
    return m;
  };
}

DegreeFn finite_lb(int height, int value) {
  return [height, value](int t) { return t < height ? value : kNoTerms; };
}

// zeroing parameters keeps the degree bounds; other substitutions pass their own
WeightSystem specialize(const WeightSystem& w, std::string name, std::map<Var, LaurentPoly> repl,
                        std::optional<int> height, DegreeFn lb = nullptr) {
  auto fn = w.fn;
  return make_system(
      std::move(name), height, [fn, repl](int t, int i, int j) { return fn(t, i, j).substitute(repl); },
      lb ? lb : w.lb, w.laurent);
}

WeightSystem renamed(WeightSystem w, std::string name) {
  w.name = std::move(name);
  return w;
}

std::string sys_name(const char* fam, const char* label) { return std::string(fam) + "/" + label; }

// ---- weight systems ----

WeightSystem sw_height1() {
  return make_system(
      sys_name(kStieltjes, "height1"), 1, [](int, int i, int j) { return Frac(qv(-i - j - 1)); },
      finite_lb(1, 0));
}

LaurentPoly bessel_C(int i) { return -av() * qv(2 * i + 1); }

WeightSystem bessel_h1() {
  return make_system(
      sys_name(kBessel, "height1"), 1,
      [](int, int i, int j) {
        return Frac::over(qv(j) * (1 + av() * qv(i)), {1 + av() * qv(i + j), 1 + av() * qv(i + j + 1)});
      },
      finite_lb(1, 0), false);
}

WeightSystem bessel_inf() {
  return make_system(
      sys_name(kBessel, "infinite"), std::nullopt, [](int t, int i, int j) { return Frac(bessel_C(i).pow(t) * qv(j)); },
      [](int t) { return t; });
}

WeightSystem bessel_height(int l) {
  auto w = make_height_l(bessel_inf(), bessel_h1(), [](int i) { return Frac(bessel_C(i)); }, l);
  return renamed(w, std::string(kBessel) + "/height-" + std::to_string(l));
}

WeightSystem little_h1() {
  return make_system(
      sys_name(kLittle, "height1"), 1,
      [](int, int i, int j) {
        LaurentPoly ab = av() * bv();
        return Frac::over(qv(j) * (1 - ab * qv(i + 1)) * (1 - av() * qv(i + 1)),
                          {1 - ab * qv(i + j + 1), 1 - ab * qv(i + j + 2)});
      },
      finite_lb(1, 0), false);
}

WeightSystem little_inf() {
  return make_system(
      sys_name(kLittle, "infinite"), std::nullopt,
      [](int t, int i, int j) {
        // (−a)^{⌈t/2⌉} (−b)^{⌊t/2⌋} q^{(i+1)t+j}
        return Frac((-av()).pow((t + 1) / 2) * (-bv()).pow(t / 2) * qv((i + 1) * t + j));
      },
      [](int t) { return t; });
}

WeightSystem big_fact_h1() {
  return make_system(
      sys_name(kBig, "factorial-height1"), 1,
      [](int, int i, int j) {
        LaurentPoly ab = av() * bv();
        return Frac::over(-qv(j - i) * (1 - ab * qv(i + 1)) * (1 - av() * qv(i + 1)) * (1 - cv() * qv(i + 1)),
                          {1 - ab * qv(i + j + 1), 1 - ab * qv(i + j + 2)});
      },
      finite_lb(1, 0), false);
}

WeightSystem big_fact_inf() {
  return make_system(
      sys_name(kBig, "factorial"), std::nullopt,
      [](int t, int i, int j) {
        LaurentPoly block = (av() * bv() * qv(2 * i + 2)).pow(t / 4) * qv(j);
        switch (t % 4) {
          case 0: return Frac(-block * qv(-i));
          case 1: return Frac(block * cv() * qv(1));
          case 2: return Frac(block * av() * qv(1));
          default: return Frac(-block * av() * cv() * qv(i + 2));
        }
      },
      window_lb([](int t) { return 2 * (t / 4) + std::array{0, 1, 1, 2}[t % 4]; }, 4));
}

WeightSystem big_full() {
  return make_system(
      sys_name(kBig, "full"), std::nullopt,
      [](int t, int i, int j) {
        LaurentPoly block = (av() * bv() * qv(2 * i + 2)).pow(t / 4) * qv(j);
        switch (t % 4) {
          case 0: return Frac(block * cv() * qv(1));
          case 1: return Frac(block * av() * qv(1));
          case 2: return Frac(-block * av() * cv() * qv(i + 2));
          default: return Frac(-block * av() * bv() * qv(i + 2));
        }
      },
      window_lb([](int t) { return 2 * (t / 4) + std::array{1, 1, 2, 2}[t % 4]; }, 4));
}

WeightSystem aw_fact_h1() {
  return make_system(
      sys_name(kAW, "factorial-height1"), 1,
      [](int, int i, int j) {
        LaurentPoly top = qv(j - i) * (1 - av() * bv() * qv(i)) * (1 - av() * cv() * qv(i)) *
                          (1 - av() * dv() * qv(i)) * (1 - abcd() * qv(i - 1));
        return Frac::over(top * av(-1) * LaurentPoly(Rat(-1, 2)),
                          {1 - abcd() * qv(i + j - 1), 1 - abcd() * qv(i + j)});
      },
      finite_lb(1, -1), false);
}

int aw_tw_deg(int t) { return 4 * (t / 8) + std::array{-1, 1, 1, 3, 1, 3, 3, 5}[t % 8]; }

LaurentPoly aw_tw_value(int t, int i, int j) {
  LaurentPoly block = (abcd() * qv(2 * i)).pow(t / 8) * qv(j) * half();
  LaurentPoly a = av(), b = bv(), c = cv(), d = dv();
  switch (t % 8) {
    case 0: return -block * av(-1) * qv(-i);
    case 1: return block * d;
    case 2: return block * c;
    case 3: return -block * a * c * d * qv(i);
    case 4: return block * b;
    case 5: return -block * a * b * d * qv(i);
    case 6: return -block * a * b * c * qv(i);
    default: return block * a * a * b * c * d * qv(2 * i);
  }
}

WeightSystem aw_fact_inf() {
  return make_system(
      sys_name(kAW, "factorial"), std::nullopt, [](int t, int i, int j) { return Frac(aw_tw_value(t, i, j)); },
      window_lb(aw_tw_deg, 8));
}

LaurentPoly f_value(int j) { return (av() * qv(j) + av(-1) * qv(-j)) * half(); }

WeightSystem aw_full() {
  return make_system(
      sys_name(kAW, "full"), std::nullopt,
      [](int t, int i, int j) { return Frac(t == 0 ? f_value(j) : aw_tw_value(t - 1, i, j)); },
      window_lb([](int t) { return t == 0 ? -1 : aw_tw_deg(t - 1); }, 8));
}

int aw_h_deg(int t) {
  int m = t / 8, r = t % 8;
  if (r == 0) return m == 0 ? 1 : 4 * m - 1;
  return 4 * m + std::array{0, 1, 1, 3, 1, 3, 3, 5}[r];
}

// positive = false: the Hermite-relative weights; true: their rescaled form
LaurentPoly aw_h_value(int t, int i, int j, bool rescaled) {
  int m = t / 8, r = t % 8;
  LaurentPoly block = (abcd() * qv(2 * i)).pow(m) * qv(j);
  if (!rescaled) block *= Rat(1, 2);
  LaurentPoly a = av(), b = bv(), c = cv(), d = dv();
  LaurentPoly v;
  bool neg = false;
  switch (r) {
    case 0:
      if (m == 0) {
        v = a;
      } else {
        v = av(-1) * qv(-i);
        neg = true;
      }
      break;
    case 1: v = b; break;
    case 2: v = c; break;
    case 3: v = a * b * c * qv(i); neg = true; break;
    case 4: v = d; break;
    case 5: v = a * b * d * qv(i); neg = true; break;
    case 6: v = a * c * d * qv(i); neg = true; break;
    default: v = a * a * b * c * d * qv(2 * i); break;
  }
  v *= block;
  return neg && !rescaled ? -v : v;
}

WeightSystem aw_hermite(bool rescaled) {
  return make_system(
      sys_name(kAW, rescaled ? "hermite-relative-rescaled" : "hermite-relative"), std::nullopt,
      [rescaled](int t, int i, int j) { return Frac(aw_h_value(t, i, j, rescaled)); }, window_lb(aw_h_deg, 8));
}

WeightSystem w1_sys() {
  return make_system(sys_name(kAW, "w1"), 1, [](int, int, int j) { return Frac(av() * qv(j) * half()); },
                     finite_lb(1, 1));
}
WeightSystem w2_sys() {
  return make_system(sys_name(kAW, "w2"), 1, [](int, int, int j) { return Frac(bv() * qv(j) * half()); },
                     finite_lb(1, 1));
}
WeightSystem w3_sys() {
  return make_system(
      sys_name(kAW, "w3"), 2,
      [](int t, int i, int j) {
        return Frac(t == 0 ? cv() * qv(j) * half() : -av() * bv() * cv() * qv(i + j) * half());
      },
      [](int t) { return t == 0 ? 1 : t == 1 ? 3 : kNoTerms; });
}

int w4_deg(int t) { return 4 * (t / 8) + std::array{1, 3, 3, 5, 3, 5, 5, 7}[t % 8]; }

WeightSystem w4_sys() {
  return make_system(
      sys_name(kAW, "w4"), std::nullopt,
      [](int t, int i, int j) {
        LaurentPoly v = dv() * half() * (abcd() * qv(2 * i)).pow(t / 8) * qv(j);
        // one factor per odd bit of ⌊t/4⌋, ⌊t/2⌋, t
        if ((t / 4) % 2) v *= -bv() * cv() * qv(i);
        if ((t / 2) % 2) v *= -av() * cv() * qv(i);
        if (t % 2) v *= -av() * bv() * qv(i);
        return Frac(v);
      },
      window_lb(w4_deg, 8));
}

WeightSystem hermite_h3() {
  return make_system(
      sys_name(kHermite, "height3"), 3,
      [](int t, int i, int j) {
        if (t == 0) return Frac((qv(j) + qv(-j)) * half());
        if (t == 1) return Frac(-qv(j - i) * half());
        return Frac(-qv(i - j) * half());
      },
      finite_lb(3, 0));
}

WeightSystem big_hermite_h2() {
  return make_system(
      sys_name(kBigHermite, "height2"), 2,
      [](int t, int i, int j) {
        if (t == 0) return Frac(f_value(j));
        return Frac(-av(-1) * qv(j - i) * half());
      },
      finite_lb(2, -1));
}

WeightSystem big_hermite_prime() {
  return make_system(
      sys_name(kBigHermite, "hermite-coefficients"), 1,
      [](int, int i, int j) { return Frac(-av() * qv(i - j) * half()); }, finite_lb(1, 1));
}

WeightSystem hermite_from_big() {
  auto s = stack(big_hermite_h2(), big_hermite_prime());
  return specialize(s, sys_name(kHermite, "bH-stack"), {{kA, LaurentPoly(1)}}, 3, finite_lb(3, 0));
}

WeightSystem aw_w_chain() { return stack(w1_sys(), stack(w2_sys(), stack(w3_sys(), w4_sys()))); }

WeightSystem build_system(const std::string& fam, const std::string& label) {
  auto name = [&](const char* l) { return fam + "/" + l; };
  if (fam == kStieltjes) {
    if (label == "height1") return sw_height1();
  } else if (fam == kBessel) {
    if (label == "height1") return bessel_h1();
    if (label == "infinite") return bessel_inf();
    if (label == "height-2") return bessel_height(2);
    if (label == "height-3") return bessel_height(3);
  } else if (fam == kLittle) {
    if (label == "height1") return little_h1();
    if (label == "infinite") return little_inf();
  } else if (fam == kBig) {
    if (label == "factorial-height1") return big_fact_h1();
    if (label == "factorial") return big_fact_inf();
    if (label == "full") return big_full();
  } else if (fam == kAW) {
    if (label == "factorial-height1") return aw_fact_h1();
    if (label == "factorial") return aw_fact_inf();
    if (label == "full") return aw_full();
    if (label == "hermite-relative") return aw_hermite(false);
    if (label == "hermite-relative-rescaled") return aw_hermite(true);
    if (label == "full-hermite") return renamed(stack(hermite_h3(), aw_hermite(false)), name("full-hermite"));
    if (label == "w1") return w1_sys();
    if (label == "w2") return w2_sys();
    if (label == "w3") return w3_sys();
    if (label == "w4") return w4_sys();
    if (label == "w1-w4") return renamed(aw_w_chain(), name("w1-w4"));
  } else if (fam == kHermite) {
    if (label == "height3") return hermite_h3();
    if (label == "bH-stack") return hermite_from_big();
  } else if (fam == kBigHermite) {
    if (label == "height2") return big_hermite_h2();
    if (label == "hermite-relative") return renamed(w1_sys(), name("hermite-relative"));
    if (label == "hermite-coefficients") return big_hermite_prime();
    if (label == "full-hermite") return renamed(stack(hermite_h3(), w1_sys()), name("full-hermite"));
  } else if (fam == kASC) {
    auto rel = stack(w1_sys(), w2_sys());
    if (label == "hermite-relative") return renamed(rel, name("hermite-relative"));
    if (label == "full") return specialize(aw_full(), name("full"), {{kC, 0}, {kD, 0}}, 6);
    if (label == "full-hermite") return renamed(stack(hermite_h3(), rel), name("full-hermite"));
  } else if (fam == kDualHahn) {
    auto rel = stack(w1_sys(), stack(w2_sys(), w3_sys()));
    if (label == "hermite-relative") return renamed(rel, name("hermite-relative"));
    if (label == "full") return specialize(aw_full(), name("full"), {{kD, 0}}, 8);
    if (label == "full-hermite") return renamed(stack(hermite_h3(), rel), name("full-hermite"));
  } else {
    throw UnknownFamily("unknown family: " + fam);
  }
  throw UnknownLabel("unknown system " + label + " for family " + fam);
}

// ---- family table ----

std::vector<FamilySpec> make_families() {
  using T = Target;
  const std::vector<T> plain{T::sigma, T::nu};
  const std::vector<T> factorial{T::sigma, T::nu, T::sigma_factorial, T::nu_factorial};
  const std::vector<T> relative{T::sigma, T::nu, T::sigma_hermite, T::nu_hermite};
  std::vector<FamilySpec> out;
  out.push_back({kStieltjes, "", "monomial", plain, {{"height1", T::sigma, "w(0;i,j) = q^{-i-j-1}"}}});
  out.push_back({kBessel,
                 "a",
                 "monomial",
                 plain,
                 {{"height1", T::sigma, "rational height-1 weights"},
                  {"infinite", T::sigma, "(-aq^{2i+1})^t q^j"},
                  {"height-2", T::sigma, "height-1 weights lifted with C_i = -aq^{2i+1}"},
                  {"height-3", T::sigma, "height-1 weights lifted with C_i = -aq^{2i+1}"}}});
  out.push_back({kLittle,
                 "ab",
                 "monomial",
                 plain,
                 {{"height1", T::sigma, "rational height-1 weights"},
                  {"infinite", T::sigma, "(-a)^{ceil(t/2)} (-b)^{floor(t/2)} q^{(i+1)t+j}"}}});
  out.push_back({kBig,
                 "abc",
                 "factorial d_j = q^{-j}",
                 factorial,
                 {{"factorial-height1", T::sigma_factorial, "rational height-1 weights"},
                  {"factorial", T::sigma_factorial, "4-row blocks scaled by (abq^{2i+2})^m"},
                  {"full", T::sigma, "4-row blocks scaled by (abq^{2i+2})^m"}}});
  std::vector<T> aw_targets{T::sigma,     T::nu,         T::sigma_factorial,       T::nu_factorial,
                            T::sigma_hermite, T::nu_hermite, T::sigma_hermite_rescaled, T::cc1,
                            T::cc2,       T::cc3,        T::cc4};
  out.push_back({kAW,
                 "abcd",
                 "factorial d_j = (aq^j + a^{-1}q^{-j})/2",
                 aw_targets,
                 {{"factorial-height1", T::sigma_factorial, "rational height-1 weights"},
                  {"factorial", T::sigma_factorial, "8-row blocks scaled by (abcdq^{2i})^m"},
                  {"full", T::sigma, "row of d_j under the factorial system"},
                  {"hermite-relative", T::sigma_hermite, "8-row blocks scaled by (abcdq^{2i})^m"},
                  {"hermite-relative-rescaled", T::sigma_hermite_rescaled, "positive 8-row blocks"},
                  {"full-hermite", T::sigma, "q-Hermite rows under the Hermite-relative system"},
                  {"w1", T::cc1, "aq^j/2"},
                  {"w2", T::cc2, "bq^j/2"},
                  {"w3", T::cc3, "cq^j/2 and -abcq^{i+j}/2"},
                  {"w4", T::cc4, "8-row blocks led by dq^j/2"},
                  {"w1-w4", T::sigma_hermite, "w1 under w2 under w3 under w4"}}});
  out.push_back({kHermite,
                 "",
                 "monomial",
                 plain,
                 {{"height3", T::sigma, "(q^j+q^{-j})/2, -q^{j-i}/2, -q^{i-j}/2"},
                  {"bH-stack", T::sigma, "big q-Hermite rows under the coefficient row, at a = 1"}}});
  out.push_back({kBigHermite,
                 "a",
                 "monomial",
                 relative,
                 {{"height2", T::sigma, "(aq^j+a^{-1}q^{-j})/2 and -1/(2aq^{i-j})"},
                  {"hermite-relative", T::sigma_hermite, "aq^j/2"},
                  {"hermite-coefficients", T::nu_hermite, "-aq^{i-j}/2"},
                  {"full-hermite", T::sigma, "q-Hermite rows under aq^j/2"}}});
  out.push_back({kASC,
                 "ab",
                 "monomial",
                 relative,
                 {{"hermite-relative", T::sigma_hermite, "aq^j/2 under bq^j/2"},
                  {"full", T::sigma, "full Askey-Wilson system at c = d = 0"},
                  {"full-hermite", T::sigma, "q-Hermite rows under the Hermite-relative system"}}});
  out.push_back({kDualHahn,
                 "abc",
                 "monomial",
                 relative,
                 {{"hermite-relative", T::sigma_hermite, "aq^j/2 under bq^j/2 under the c rows"},
                  {"full", T::sigma, "full Askey-Wilson system at d = 0"},
                  {"full-hermite", T::sigma, "q-Hermite rows under the Hermite-relative system"}}});
  return out;
}

// ---- closed forms ----

Frac direct_value(const std::string& fam, Target t, int n, int k) {
  int s = n - k;
  LaurentPoly qb = qbinom(n, k);
  LaurentPoly a = av(), b = bv(), c = cv(), d = dv();
  if (fam == kStieltjes) {
    if (t == Target::sigma) return Frac(qv(k * k - n * n + c2(s)) * qb);
    if (t == Target::nu) return Frac(sgn(s) * qv(k * k - n * n) * qb);
  } else if (fam == kBessel) {
    if (t == Target::sigma) return poch_ratio(qb, {}, {{-a * qv(2 * k + 1), s}});
    if (t == Target::nu) return poch_ratio(sgn(s) * qv(c2(s)) * qb, {}, {{-a * qv(n + k), s}});
  } else if (fam == kLittle) {
    if (t == Target::sigma) return poch_ratio(qb, {{a * qv(k + 1), s}}, {{a * b * qv(2 * k + 2), s}});
    if (t == Target::nu)
      return poch_ratio(sgn(s) * qv(c2(s)) * qb, {{a * qv(k + 1), s}}, {{a * b * qv(n + k + 1), s}});
  } else if (fam == kBig) {
    if (t == Target::sigma_factorial)
      return poch_ratio(sgn(s) * qv(c2(k) - c2(n)) * qb, {{a * qv(k + 1), s}, {c * qv(k + 1), s}},
                        {{a * b * qv(2 * k + 2), s}});
    if (t == Target::nu_factorial)
      return poch_ratio(qv(k * (k - n)) * qb, {{a * qv(k + 1), s}, {c * qv(k + 1), s}},
                        {{a * b * qv(n + k + 1), s}});
  } else if (fam == kAW) {
    std::vector<std::pair<LaurentPoly, int>> up{{a * b * qv(k), s}, {a * c * qv(k), s}, {a * d * qv(k), s}};
    switch (t) {
      case Target::sigma_factorial:
        return poch_ratio(rat_pow(-2, k - n) * av(k - n) * qv(c2(k) - c2(n)) * qb, up, {{abcd() * qv(2 * k), s}});
      case Target::nu_factorial:
        return poch_ratio(rat_pow(2, k - n) * av(k - n) * qv(k * (k - n)) * qb, up,
                          {{abcd() * qv(n + k - 1), s}});
      case Target::cc1: return Frac(qb * (a * half()).pow(s));
      case Target::cc2: return Frac(qb * (b * half()).pow(s));
      case Target::cc3: return Frac(qb * (c * half()).pow(s) * qpoch(a * b * qv(k), s));
      case Target::cc4:
        return poch_ratio(qb * (d * half()).pow(s), {{a * b * qv(k), s}, {a * c * qv(k), s}, {b * c * qv(k), s}},
                          {{abcd() * qv(2 * k), s}});
      default: break;
    }
  } else if (fam == kHermite) {
    if (t == Target::sigma) return Frac(hermite_sigma_TR(n, k));
  }
  throw CatalogError("no closed form " + target_name(t) + " for " + fam);
}

TriangularArray build_direct(const std::string& fam, Target t, int N) {
  return TriangularArray::build(N, [&](int n, int k) { return direct_value(fam, t, n, k); });
}

TriangularArray matrix_of(const std::vector<std::vector<LaurentPoly>>& rows) {
  int N = int(rows.size()) - 1;
  return TriangularArray::build(N, [&](int n, int k) { return Frac(rows[n][k]); });
}

TriangularArray substituted(const TriangularArray& a, const std::map<Var, LaurentPoly>& repl) {
  return TriangularArray::build(a.N, [&](int n, int k) { return a.at(n, k).substitute(repl); });
}

std::map<Var, LaurentPoly> specialization(const std::string& fam) {
  if (fam == kBigHermite) return {{kB, 0}, {kC, 0}, {kD, 0}};
  if (fam == kASC) return {{kC, 0}, {kD, 0}};
  return {{kD, 0}};
}

TriangularArray compute_closed(const std::string& fam, Target t, int N);

TriangularArray cached_closed(const std::string& fam, Target t, int N) {
  static std::mutex mu;
  static std::map<std::pair<std::string, int>, TriangularArray> cache;
  auto key = std::make_pair(fam, int(t));
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end() && it->second.N >= N)
      return TriangularArray::build(N, [&](int n, int k) { return it->second.at(n, k); },
                                    it->second.unitriangular);
  }
  TriangularArray a = compute_closed(fam, t, N);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (slot.N <= N) slot = a;
  return a;
}

TriangularArray compute_closed(const std::string& fam, Target t, int N) {
  const auto& spec = family(fam);
  if (std::find(spec.closed.begin(), spec.closed.end(), t) == spec.closed.end())
    throw CatalogError("no closed form " + target_name(t) + " for " + fam);
  if (fam == kStieltjes || fam == kBessel || fam == kLittle) return build_direct(fam, t, N);
  if (fam == kBig || fam == kAW) {
    std::function<LaurentPoly(int)> d = fam == kBig ? nu_q : f_seq;
    switch (t) {
      case Target::sigma_factorial:
      case Target::nu_factorial:
      case Target::cc1:
      case Target::cc2:
      case Target::cc3:
      case Target::cc4: return build_direct(fam, t, N);
      case Target::sigma: return compose_mixed(power_to_factorial(d, N), cached_closed(fam, Target::sigma_factorial, N));
      case Target::nu: return compose_mixed(cached_closed(fam, Target::nu_factorial, N), matrix_of(factorial_powers(d, N)));
      case Target::sigma_hermite: {
        auto x = compose_mixed(build_direct(fam, Target::cc1, N), build_direct(fam, Target::cc2, N));
        x = compose_mixed(x, build_direct(fam, Target::cc3, N));
        return compose_mixed(x, build_direct(fam, Target::cc4, N));
      }
      case Target::nu_hermite: return inverse_unitriangular(cached_closed(fam, Target::sigma_hermite, N));
      case Target::sigma_hermite_rescaled: {
        auto s = cached_closed(fam, Target::sigma_hermite, N);
        return TriangularArray::build(N, [&](int n, int k) { return unit_rescale(s.at(n, k), n - k); });
      }
      default: break;
    }
  }
  if (fam == kHermite) {
    if (t == Target::sigma) return build_direct(fam, t, N);
    return inverse_unitriangular(cached_closed(fam, Target::sigma, N));
  }
  // the remaining families are Askey–Wilson with parameters set to zero
  return substituted(cached_closed(kAW, t, N), specialization(fam));
}

// ---- definitions ----

// polynomial in one auxiliary variable (x, or z with x = (z + 1/z)/2)
using Aux = std::map<int, LaurentPoly>;

Aux aux_mul(const Aux& x, const Aux& y) {
  Aux r;
  for (const auto& [e1, c1] : x)
    for (const auto& [e2, c2v] : y) {
      LaurentPoly p = c1 * c2v;
      if (p.is_zero()) continue;
      auto& slot = r[e1 + e2];
      slot += p;
      if (slot.is_zero()) r.erase(e1 + e2);
    }
  return r;
}

void aux_add(Aux& x, const Aux& y) {
  for (const auto& [e, c] : y) {
    auto& slot = x[e];
    slot += c;
    if (slot.is_zero()) x.erase(e);
  }
}

// an upper parameter c·u^power with u the auxiliary variable
struct AuxParam {
  LaurentPoly c;
  int power;
};

struct Hyper {
  std::vector<LaurentPoly> upper;
  std::vector<AuxParam> aux_upper;
  std::vector<LaurentPoly> lower;
  Aux arg;
};

// Σ_k terms of the terminating series, each multiplied by the common
// denominator (q;q)_n ∏_b (b;q)_n; returns the numerator and that denominator.
std::pair<Aux, std::vector<LaurentPoly>> hyper_numerator(int n, const Hyper& h) {
  int r = int(h.upper.size() + h.aux_upper.size());
  int s = int(h.lower.size());
  std::vector<LaurentPoly> den;
  for (int m = 1; m <= n; ++m) den.push_back(1 - qv(m));
  for (const auto& b : h.lower) poch_factors(den, b, n);
  // drop trivial factors from zero lower parameters
  den.erase(std::remove_if(den.begin(), den.end(), [](const LaurentPoly& p) { return p == LaurentPoly(1); }),
            den.end());

  Aux total;
  Aux arg_pow{{0, LaurentPoly(1)}};
  std::vector<Aux> aux_poch(h.aux_upper.size(), Aux{{0, LaurentPoly(1)}});
  for (int k = 0; k <= n; ++k) {
    LaurentPoly c(1);
    for (const auto& a : h.upper) c *= qpoch(a, k);
    c *= qpoch(qv(k + 1), n - k);
    for (const auto& b : h.lower) c *= qpoch(b * qv(k), n - k);
    c *= (sgn(k) * qv(c2(k))).pow(1 + s - r);
    if (!c.is_zero()) {
      Aux term{{0, c}};
      for (const auto& p : aux_poch) term = aux_mul(term, p);
      aux_add(total, aux_mul(term, arg_pow));
    }
    arg_pow = aux_mul(arg_pow, h.arg);
    for (size_t m = 0; m < h.aux_upper.size(); ++m) {
      const auto& p = h.aux_upper[m];
      aux_poch[m] = aux_mul(aux_poch[m], Aux{{0, LaurentPoly(1)}, {p.power, -p.c * qv(k)}});
    }
  }
  return {total, den};
}

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int s = 1; s <= k; ++s) r = r * (n - k + s) / s;
  return r;
}

// symmetric Laurent polynomial in z ↦ polynomial in x = (z + 1/z)/2
std::vector<LaurentPoly> z_to_x(Aux p) {
  int top = 0;
  for (const auto& [e, c] : p) {
    auto it = p.find(-e);
    if (it == p.end() || it->second != c) throw CatalogError("definition is not symmetric in z and 1/z");
    top = std::max(top, e);
  }
  std::vector<LaurentPoly> x(top + 1);
  for (int m = top; m >= 1; --m) {
    auto it = p.find(m);
    if (it == p.end()) continue;
    LaurentPoly c = it->second;
    // (z + 1/z)^m = (2x)^m
    x[m] = c * rat_pow(2, m);
    for (int j = 0; j <= m; ++j) aux_add(p, Aux{{m - 2 * j, -c * binom(m, j)}});
  }
  if (p.count(0)) x[0] = p[0];
  return x;
}

std::vector<Frac> assemble(int n, const std::pair<Aux, std::vector<LaurentPoly>>& part, const Frac& prefactor,
                           bool in_z) {
  std::vector<LaurentPoly> coeffs;
  if (in_z) {
    coeffs = z_to_x(part.first);
  } else {
    int top = 0;
    for (const auto& [e, c] : part.first) {
      if (e < 0) throw CatalogError("negative power of x in a definition");
      top = std::max(top, e);
    }
    coeffs.assign(top + 1, LaurentPoly());
    for (const auto& [e, c] : part.first) coeffs[e] = c;
  }
  coeffs.resize(std::max<size_t>(coeffs.size(), n + 1));
  if (int(coeffs.size()) > n + 1) throw CatalogError("definition has degree above n");
  std::vector<Frac> out;
  for (int k = 0; k <= n; ++k) out.push_back(Frac::over(coeffs[k], part.second) * prefactor);
  return out;
}

Frac inverse_poch(const LaurentPoly& base, int n, const LaurentPoly& num = LaurentPoly(1)) {
  std::vector<LaurentPoly> den;
  poch_factors(den, base, n);
  return Frac::over(num, den);
}

// q-Pochhammer of the pair a·z, a/z for the Askey–Wilson style families
std::vector<AuxParam> pair_params(const LaurentPoly& a) { return {{a, 1}, {a, -1}}; }

}  // namespace

std::string target_name(Target t) {
  switch (t) {
    case Target::sigma: return "sigma";
    case Target::nu: return "nu";
    case Target::sigma_factorial: return "sigma-factorial";
    case Target::nu_factorial: return "nu-factorial";
    case Target::sigma_hermite: return "sigma-hermite";
    case Target::nu_hermite: return "nu-hermite";
    case Target::sigma_hermite_rescaled: return "sigma-hermite-rescaled";
    case Target::cc1: return "cc1";
    case Target::cc2: return "cc2";
    case Target::cc3: return "cc3";
    case Target::cc4: return "cc4";
  }
  return "?";
}

Target parse_target(const std::string& s) {
  for (int i = 0; i <= int(Target::cc4); ++i)
    if (target_name(Target(i)) == s) return Target(i);
  throw CatalogError("unknown target: " + s);
}

const std::vector<FamilySpec>& families() {
  static const std::vector<FamilySpec> table = make_families();
  return table;
}

const FamilySpec& family(const std::string& name) {
  for (const auto& f : families())
    if (f.name == name) return f;
  throw UnknownFamily("unknown family: " + name);
}

const SystemEntry& system_entry(const std::string& fam, const std::string& label) {
  for (const auto& s : family(fam).systems)
    if (s.label == label) return s;
  throw UnknownLabel("unknown system " + label + " for family " + fam);
}

WeightSystem weight_system(const std::string& fam, const std::string& label) {
  system_entry(fam, label);
  return build_system(fam, label);
}

nlohmann::json families_manifest() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : families()) {
    nlohmann::json fj;
    fj["name"] = f.name;
    fj["parameters"] = nlohmann::json::array();
    for (char c : f.params) fj["parameters"].push_back(std::string(1, c));
    fj["basis"] = f.basis;
    fj["closed_forms"] = nlohmann::json::array();
    for (auto t : f.closed) fj["closed_forms"].push_back(target_name(t));
    fj["systems"] = nlohmann::json::array();
    for (const auto& s : f.systems) {
      auto w = build_system(f.name, s.label);
      nlohmann::json sj;
      sj["label"] = s.label;
      sj["target"] = target_name(s.target);
      sj["height"] = w.height ? nlohmann::json(*w.height) : nlohmann::json("inf");
      sj["rational_weights"] = !w.laurent;
      int rows = w.height ? *w.height : 12;
      sj["row_degree_lb"] = nlohmann::json::array();
      for (int t = 0; t < rows; ++t) sj["row_degree_lb"].push_back(w.row_degree_lb(t));
      sj["construction"] = s.construction;
      fj["systems"].push_back(sj);
    }
    out.push_back(fj);
  }
  return out;
}

TriangularArray closed_array(const std::string& fam, Target t, int N) {
  family(fam);
  return cached_closed(fam, t, N);
}

Frac closed_value(const std::string& fam, Target t, int n, int k) {
  if (k < 0 || k > n) return Frac(0);
  return closed_array(fam, t, n).at(n, k);
}

LaurentPoly nu_q(int j) { return qv(-j); }
LaurentPoly f_seq(int j) { return f_value(j); }

std::vector<std::vector<LaurentPoly>> factorial_powers(const std::function<LaurentPoly(int)>& d, int N) {
  std::vector<std::vector<LaurentPoly>> rows(N + 1);
  rows[0] = {LaurentPoly(1)};
  for (int r = 1; r <= N; ++r) {
    rows[r].assign(r + 1, LaurentPoly());
    LaurentPoly dr = d(r - 1);
    for (int k = 0; k < r; ++k) {
      rows[r][k + 1] += rows[r - 1][k];
      rows[r][k] -= dr * rows[r - 1][k];
    }
  }
  return rows;
}

TriangularArray power_to_factorial(const std::function<LaurentPoly(int)>& d, int N) {
  auto F = factorial_powers(d, N);
  TriangularArray tau(N);
  for (int n = 0; n <= N; ++n) {
    // residual x^n − Σ_{r>m} τ_{n,r}(x|d)^r, peeled from the top degree down
    std::vector<LaurentPoly> res(n + 1);
    res[n] = 1;
    for (int r = n; r >= 0; --r) {
      LaurentPoly c = res[r];
      tau.ref(n, r) = Frac(c);
      if (c.is_zero()) continue;
      for (int k = 0; k <= r; ++k) res[k] -= c * F[r][k];
    }
  }
  return tau;
}

LaurentPoly hermite_sigma_TR(int n, int k) {
  if (k < 0 || k > n || (n - k) % 2) return LaurentPoly();
  LaurentPoly sum;
  for (int r = k; r <= n; ++r) {
    if ((n - r) % 2 || (r - k) % 2) continue;
    int h = (n - r) / 2, m = (r - k) / 2;
    long ballot = binom(n, h) - binom(n, h - 1);
    if (ballot == 0) continue;
    sum += sgn(m) * LaurentPoly(ballot) * qv(m * (m + 1) / 2) * qbinom((r + k) / 2, m);
  }
  return sum * rat_pow(2, k - n);
}

Frac unit_rescale(const Frac& s, int steps) {
  for (const auto& [f, m] : s.den_factors()) {
    auto parts = unit_substitute(f, {1, 1, 1, 1});
    if (parts[0] != f) throw CatalogError("denominator factor " + f.str() + " is not invariant under a,b,c,d -> i*");
  }
  auto parts = unit_substitute(s.num(), {1, 1, 1, 1});
  LaurentPoly num;
  for (int c = 0; c < 4; ++c) {
    if (parts[c].is_zero()) continue;
    int e = (((c - steps) % 4) + 4) % 4;
    if (e % 2) throw CatalogError("rescaled value is not real: " + s.str());
    num += e == 0 ? parts[c] : -parts[c];
  }
  std::vector<LaurentPoly> den;
  for (const auto& [f, m] : s.den_factors()) den.insert(den.end(), m, f);
  return Frac::over(num * rat_pow(2, steps), den);
}

std::vector<Frac> polynomial_from_definition(const std::string& fam, int n, int form) {
  LaurentPoly a = av(), b = bv(), c = cv(), d = dv();
  LaurentPoly qn = qv(-n);
  Hyper h;
  Frac pre(1);
  bool in_z = false;
  if (fam == kStieltjes) {
    h.upper = {qn};
    h.lower = {LaurentPoly()};
    h.arg = {{1, -qv(n + 1)}};
    pre = Frac(sgn(n) * qv(-n * n));
  } else if (fam == kBessel) {
    h.upper = {qn, -a * qv(n)};
    h.lower = {LaurentPoly()};
    h.arg = {{1, qv(1)}};
    pre = inverse_poch(-a * qv(n), n, sgn(n) * qv(c2(n)));
  } else if (fam == kLittle) {
    h.upper = {qn, a * b * qv(n + 1)};
    h.lower = {a * qv(1)};
    h.arg = {{1, qv(1)}};
    pre = inverse_poch(a * b * qv(n + 1), n, sgn(n) * qv(c2(n)) * qpoch(a * qv(1), n));
  } else if (fam == kBig) {
    h.upper = {qn, a * b * qv(n + 1)};
    h.aux_upper = {{LaurentPoly(1), 1}};
    h.lower = {a * qv(1), c * qv(1)};
    h.arg = {{0, qv(1)}};
    pre = inverse_poch(a * b * qv(n + 1), n, qpoch(a * qv(1), n) * qpoch(c * qv(1), n));
  } else if (fam == kAW) {
    in_z = true;
    h.upper = {qn, abcd() * qv(n - 1)};
    h.aux_upper = pair_params(a);
    h.lower = {a * b, a * c, a * d};
    h.arg = {{0, qv(1)}};
    pre = inverse_poch(abcd() * qv(n - 1), n,
                       qpoch(a * b, n) * qpoch(a * c, n) * qpoch(a * d, n) * rat_pow(2, -n) * av(-n));
  } else if (fam == kHermite) {
    in_z = true;
    h.upper = {qn, LaurentPoly()};
    h.arg = {{-2, qv(n)}};
    auto part = hyper_numerator(n, h);
    part.first = aux_mul(part.first, Aux{{n, LaurentPoly(1)}});
    return assemble(n, part, Frac(rat_pow(2, -n)), true);
  } else if (fam == kBigHermite) {
    in_z = true;
    if (form == 1) {
      h.upper = {qn};
      h.aux_upper = {{a, 1}};
      h.arg = {{-2, qv(n)}};
      auto part = hyper_numerator(n, h);
      part.first = aux_mul(part.first, Aux{{n, LaurentPoly(1)}});
      return assemble(n, part, Frac(rat_pow(2, -n)), true);
    }
    h.upper = {qn};
    h.aux_upper = pair_params(a);
    h.lower = {LaurentPoly(), LaurentPoly()};
    h.arg = {{0, qv(1)}};
    pre = Frac(rat_pow(2, -n) * av(-n));
  } else if (fam == kASC) {
    in_z = true;
    h.upper = {qn};
    h.aux_upper = pair_params(a);
    h.lower = {a * b, LaurentPoly()};
    h.arg = {{0, qv(1)}};
    pre = Frac(qpoch(a * b, n) * rat_pow(2, -n) * av(-n));
  } else if (fam == kDualHahn) {
    in_z = true;
    h.upper = {qn};
    h.aux_upper = pair_params(a);
    h.lower = {a * b, a * c};
    h.arg = {{0, qv(1)}};
    pre = Frac(qpoch(a * b, n) * qpoch(a * c, n) * rat_pow(2, -n) * av(-n));
  } else {
    throw UnknownFamily("unknown family: " + fam);
  }
  return assemble(n, hyper_numerator(n, h), pre, in_z);
}

CheckReport check_connections(int N) {
  CheckReport rep;
  rep.check = "connection-formulas";
  rep.range = {{"max_n", N}};
  const std::vector<std::pair<const char*, const char*>> chain{
      {kHermite, kBigHermite}, {kBigHermite, kASC}, {kASC, kDualHahn}, {kDualHahn, kAW}};
  const Target targets[] = {Target::cc1, Target::cc2, Target::cc3, Target::cc4};
  for (size_t step = 0; step < chain.size(); ++step) {
    auto cc = closed_array(kAW, targets[step], N);
    std::vector<std::vector<Frac>> lower;
    for (int k = 0; k <= N; ++k) lower.push_back(polynomial_from_definition(chain[step].second, k));
    for (int n = 0; n <= N; ++n) {
      auto lhs = polynomial_from_definition(chain[step].first, n);
      std::vector<Frac> rhs(n + 1, Frac(0));
      for (int k = 0; k <= n; ++k)
        for (int e = 0; e <= k; ++e) rhs[e] += cc.at(n, k) * lower[k][e];
      for (int e = 0; e <= n; ++e)
        if (!(lhs[e] == rhs[e]))
          rep.fail(target_name(targets[step]) + " n=" + std::to_string(n) + " [x^" + std::to_string(e) + "]");
    }
  }
  return rep;
}

}  // namespace lhg
