#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lhg/algebra.hpp"
#include "lhg/graph.hpp"
#include "lhg/weights.hpp"

namespace lhg {

struct MomentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnboundedSum : MomentError {
  using MomentError::MomentError;
};
struct SingularMinor : MomentError {
  using MomentError::MomentError;
};
struct AmbiguousOrder : MomentError {
  using MomentError::MomentError;
};
struct ZeroScale : MomentError {
  using MomentError::MomentError;
};

using OptTrunc = std::optional<TruncSpec>;

// Memoized DP over (column, previous α). Laurent systems only.
LaurentPoly h_value(const WeightSystem& w, int n, int k, OptTrunc trunc = std::nullopt);
LaurentPoly e_value(const WeightSystem& w, int n, int k, OptTrunc trunc = std::nullopt);
// Direct enumeration of compositions; the oracle for the DP.
LaurentPoly h_enumerate(const WeightSystem& w, int n, int k, OptTrunc trunc = std::nullopt);
LaurentPoly e_enumerate(const WeightSystem& w, int n, int k, OptTrunc trunc = std::nullopt);
// Exact sums for finite-height systems with rational weights.
Frac h_frac(const WeightSystem& w, int n, int k);
Frac e_frac(const WeightSystem& w, int n, int k);
Frac h_frac_enumerate(const WeightSystem& w, int n, int k);

struct TriangularArray {
  int N = 0;
  std::vector<std::vector<Frac>> rows;  // rows[n][k], k ≤ n
  bool unitriangular = true;

  TriangularArray() = default;
  explicit TriangularArray(int n);
  static TriangularArray build(int N, const std::function<Frac(int, int)>& f, bool unitriangular = true);
  Frac at(int n, int k) const;
  Frac& ref(int n, int k) { return rows[n][k]; }
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

bool operator==(const TriangularArray& x, const TriangularArray& y);

// h-array of any catalog system; truncated entries come back as series
TriangularArray h_array(const WeightSystem& w, int N, OptTrunc trunc = std::nullopt);
TriangularArray e_array(const WeightSystem& w, int N, OptTrunc trunc = std::nullopt);

struct CheckReport {
  std::string check;
  nlohmann::json range;
  bool pass = true;
  std::vector<std::string> counterexamples;
  double seconds = 0;

  void fail(std::string what) {
    pass = false;
    if (counterexamples.size() < 20) counterexamples.push_back(std::move(what));
  }
  void merge(const CheckReport& o) {
    for (const auto& c : o.counterexamples) fail(c);
    pass = pass && o.pass;
  }
  nlohmann::json to_json() const;
};

CheckReport check_duality(const WeightSystem& w, int N, OptTrunc trunc = std::nullopt);

TriangularArray compose_mixed(const TriangularArray& tau, const TriangularArray& sigma_rel);
TriangularArray inverse_unitriangular(const TriangularArray& a);
TriangularArray diagonal_conjugate(const TriangularArray& a, const std::function<Frac(int)>& z);
TriangularArray signed_array(const TriangularArray& a);  // (−1)^{n−k} a_{n,k}
TriangularArray series_array(const TriangularArray& a, const TruncSpec& t);

// r×r minor on rows i..i+r−1 and columns j..j+r−1
Frac minor(const TriangularArray& a, int r, int i, int j);
// table[i][j] = w(0;i,j) for 0 ≤ j ≤ i ≤ a.N − 1
std::vector<std::vector<Frac>> extract_height1(const TriangularArray& a);

struct MonomialOrder {
  std::vector<Var> precedence;  // least significant first
  static MonomialOrder parse(const std::string& spec);  // "q<c<a<b"
  // −1, 0, 1; 0 also when the monomials differ only outside the precedence
  int compare(const Mono& x, const Mono& y) const;
  std::string str() const;
};

// weights[i][s] is the s-th east step from the bottom of column i
using GuessTable = std::vector<std::vector<LaurentPoly>>;
GuessTable guess_infinite(const std::function<Frac(int n)>& col_provider, const MonomialOrder& order, int steps,
                          int cols);

std::vector<LaurentPoly> factorial_expand(const std::function<LaurentPoly(int)>& d, int n);

}  // namespace lhg
