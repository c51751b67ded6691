#pragma once

#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "lhg/algebra.hpp"

namespace lhg {

struct WeightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfiniteBase : WeightError {
  using WeightError::WeightError;
};
struct HeightNotOne : WeightError {
  using WeightError::WeightError;
};
struct ShiftingPropertyViolated : WeightError {
  using WeightError::WeightError;
};
struct NoBound : WeightError {
  using WeightError::WeightError;
};

// degree bound reported for rows that carry no weight at all
inline constexpr int kNoTerms = 1 << 28;

using WeightFn = std::function<Frac(int t, int i, int j)>;
using DegreeFn = std::function<int(int t)>;
using ColumnFn = std::function<Frac(int i)>;

struct WeightSystem {
  std::string name;
  std::optional<int> height;  // nullopt: infinite
  WeightFn fn;
  // lower bound on the parameter degree of every weight in rows ≥ t
  // (rational weights are graded by their series expansion)
  DegreeFn lb;
  bool laurent = true;  // every weight has a trivial denominator

  bool infinite() const { return !height.has_value(); }
  Frac operator()(int t, int i, int j) const;
  LaurentPoly poly(int t, int i, int j) const;
  int row_degree_lb(int t) const;
};

WeightSystem make_system(std::string name, std::optional<int> height, WeightFn fn, DegreeFn lb,
                         bool laurent = true);
WeightSystem zero_system(int height = 1);

WeightSystem stack(const WeightSystem& w1, const WeightSystem& w2);
// c_min_deg: lower bound on the parameter degree of every C_i
WeightSystem scale_columns(const WeightSystem& w, const ColumnFn& C, int c_min_deg = 0);
WeightSystem bar(const WeightSystem& w);

enum class ShiftKind { col, diag, row };
WeightSystem shift(const WeightSystem& w, ShiftKind kind);

struct RowCoefficients {
  std::function<LaurentPoly(int i, int t)> value;
  std::optional<int> height;
  DegreeFn lb;
};
std::pair<WeightSystem, WeightSystem> expand_rows(const RowCoefficients& a, const LaurentPoly& b);

WeightSystem make_height_l(const WeightSystem& w_inf, const WeightSystem& w1, const ColumnFn& C, int l);
WeightSystem height1_from_sequence(const std::function<LaurentPoly(int j)>& d, int lb = 0,
                                   std::string name = "sequence");

int truncation_row_bound(const WeightSystem& w, const TruncSpec& t);
// rows needed so that any path of `steps` east steps touching a higher row
// lands beyond degree D, allowing negative-degree rows elsewhere on the path
int truncation_row_bound(const WeightSystem& w, const TruncSpec& t, int steps);

// minimal parameter degree of a weight (numerator degree for fractions)
int weight_min_deg(const Frac& f);

nlohmann::json grid_json(const WeightSystem& w, int rows, int cols);
std::string grid_text(const WeightSystem& w, int rows, int cols);

}  // namespace lhg
