#include "lhg/weights.hpp"

#include <algorithm>
#include <sstream>

namespace lhg {

Frac WeightSystem::operator()(int t, int i, int j) const {
  if (t < 0 || j < 0 || j > i) throw WeightError("weight index out of range");
  if (height && t >= *height) return Frac(0);
  return fn(t, i, j);
}

LaurentPoly WeightSystem::poly(int t, int i, int j) const {
  Frac f = (*this)(t, i, j);
  if (!f.is_laurent()) throw WeightError(name + ": weight is not a Laurent polynomial");
  return f.num();
}

int WeightSystem::row_degree_lb(int t) const {
  if (height && t >= *height) return kNoTerms;
  return lb(t);
}

WeightSystem make_system(std::string name, std::optional<int> height, WeightFn fn, DegreeFn lb, bool laurent) {
  WeightSystem w;
  w.name = std::move(name);
  w.height = height;
  w.fn = std::move(fn);
  w.lb = std::move(lb);
  w.laurent = laurent;
  return w;
}

WeightSystem zero_system(int height) {
  return make_system("zero", height, [](int, int, int) { return Frac(0); }, [](int) { return kNoTerms; });
}

int weight_min_deg(const Frac& f) { return f.is_zero() ? kNoTerms : f.num().min_deg(); }

WeightSystem stack(const WeightSystem& w1, const WeightSystem& w2) {
  if (w1.infinite()) throw InfiniteBase("stack: base system " + w1.name + " has infinite height");
  int l = *w1.height;
  std::optional<int> h;
  if (w2.height) h = l + *w2.height;
  return make_system(
      w1.name + "+" + w2.name, h,
      [w1, w2, l](int t, int i, int j) { return t < l ? w1(t, i, j) : w2(t - l, i, j); },
      [w1, w2, l](int t) {
        return t < l ? std::min(w1.row_degree_lb(t), w2.row_degree_lb(0)) : w2.row_degree_lb(t - l);
      },
      w1.laurent && w2.laurent);
}

WeightSystem scale_columns(const WeightSystem& w, const ColumnFn& C, int c_min_deg) {
  bool laurent = w.laurent;
  if (laurent)
    for (int i = 0; i < 8; ++i) laurent = laurent && C(i).is_laurent();
  return make_system(
      w.name + "*C", w.height, [w, C](int t, int i, int j) { return C(i) * w(t, i, j); },
      [w, c_min_deg](int t) {
        int b = w.row_degree_lb(t);
        return b >= kNoTerms ? b : b + c_min_deg;
      },
      laurent);
}

WeightSystem bar(const WeightSystem& w) {
  if (w.height != 1) throw HeightNotOne("bar needs a height-1 system");
  return make_system("bar(" + w.name + ")", 1, [w](int, int i, int j) { return w(0, i, i - j); }, w.lb, w.laurent);
}

WeightSystem shift(const WeightSystem& w, ShiftKind kind) {
  switch (kind) {
    case ShiftKind::col:
      if (w.height != 1) throw HeightNotOne("column shift needs a height-1 system");
      return make_system(w.name + "'", 1, [w](int, int i, int j) { return w(0, i + 1, j); }, w.lb, w.laurent);
    case ShiftKind::diag:
      if (w.height != 1) throw HeightNotOne("diagonal shift needs a height-1 system");
      return make_system(w.name + "+", 1, [w](int, int i, int j) { return w(0, i + 1, j + 1); }, w.lb, w.laurent);
    case ShiftKind::row: {
      std::optional<int> h;
      if (w.height) h = std::max(0, *w.height - 1);
      return make_system(
          w.name + "^", h, [w](int t, int i, int j) { return w(t + 1, i, j); },
          [w](int t) { return w.row_degree_lb(t + 1); }, w.laurent);
    }
  }
  throw WeightError("unknown shift");
}

std::pair<WeightSystem, WeightSystem> expand_rows(const RowCoefficients& a, const LaurentPoly& b) {
  if (!b.is_zero() && !b.is_monomial()) throw WeightError("expand_rows: b must be a monomial");
  int bdeg = b.is_zero() ? 0 : std::min(0, b.min_deg());
  std::optional<int> h1 = a.height, h2;
  if (a.height) h2 = 2 * *a.height;
  auto w1 = make_system(
      "expand1", h1,
      [a, b](int t, int i, int j) { return Frac(a.value(i, t) * (LaurentPoly(1) + b * qv(i)) * qv(j)); },
      [a, bdeg](int t) { return a.lb(t) + bdeg; });
  auto w2 = make_system(
      "expand2", h2,
      [a, b](int t, int i, int j) {
        LaurentPoly v = a.value(i, t / 2) * qv(j);
        if (t % 2) v *= b * qv(i);
        return Frac(v);
      },
      [a, bdeg](int t) { return a.lb(t / 2) + bdeg; });
  return {w1, w2};
}

WeightSystem make_height_l(const WeightSystem& w_inf, const WeightSystem& w1, const ColumnFn& C, int l) {
  if (l < 1) throw WeightError("make_height_l: l must be positive");
  if (w1.height != 1) throw HeightNotOne("make_height_l: bottom system must have height 1");
  for (int t = 0; t <= 3; ++t)
    for (int i = 0; i <= 4; ++i) {
      Frac ct(1);
      for (int s = 0; s < t; ++s) ct = ct * C(i);
      for (int j = 0; j <= i; ++j)
        if (w_inf(t, i, j) != ct * w_inf(0, i, j))
          throw ShiftingPropertyViolated(w_inf.name + ": w(t;i,j) != C_i^t w(0;i,j) at t=" + std::to_string(t) +
                                         ", i=" + std::to_string(i) + ", j=" + std::to_string(j));
    }
  return make_system(
      w_inf.name + "|h" + std::to_string(l), l,
      [w_inf, w1, C, l](int t, int i, int j) {
        if (t < l - 1) return w_inf(t, i, j);
        Frac ct(1);
        for (int s = 0; s < l - 1; ++s) ct = ct * C(i);
        return ct * w1(0, i, j);
      },
      [w_inf, w1, l](int t) { return std::min(w_inf.row_degree_lb(std::min(t, l - 1)), w1.row_degree_lb(0)); },
      w_inf.laurent && w1.laurent);
}

WeightSystem height1_from_sequence(const std::function<LaurentPoly(int j)>& d, int lb, std::string name) {
  return make_system(std::move(name), 1, [d](int, int, int j) { return Frac(d(j)); }, [lb](int) { return lb; });
}

int truncation_row_bound(const WeightSystem& w, const TruncSpec& t) { return truncation_row_bound(w, t, 1); }

int truncation_row_bound(const WeightSystem& w, const TruncSpec& t, int steps) {
  int floor_deg = std::min(0, w.row_degree_lb(0));
  int target = t.D - std::max(0, steps - 1) * floor_deg;
  int limit = w.height ? *w.height : 100000;
  for (int r = 0; r < limit; ++r)
    if (w.row_degree_lb(r) > target) return r;
  if (w.height) return *w.height;
  throw NoBound(w.name + ": row degree bound does not grow");
}

nlohmann::json grid_json(const WeightSystem& w, int rows, int cols) {
  nlohmann::json out;
  out["system"] = w.name;
  out["height"] = w.height ? nlohmann::json(*w.height) : nlohmann::json("inf");
  nlohmann::json rs = nlohmann::json::array();
  for (int t = 0; t < rows; ++t) {
    nlohmann::json row = {{"t", t}, {"columns", nlohmann::json::array()}};
    for (int i = 0; i < cols; ++i) {
      nlohmann::json cells = nlohmann::json::array();
      for (int j = 0; j <= i; ++j) cells.push_back(w(t, i, j).str());
      row["columns"].push_back({{"i", i}, {"cells", cells}});
    }
    rs.push_back(row);
  }
  out["rows"] = rs;
  return out;
}

std::string grid_text(const WeightSystem& w, int rows, int cols) {
  std::ostringstream os;
  for (int t = 0; t < rows; ++t)
    for (int i = 0; i < cols; ++i)
      for (int j = 0; j <= i; ++j) os << "w(" << t << ";" << i << "," << j << ") = " << w(t, i, j).str() << "\n";
  return os.str();
}

}  // namespace lhg
