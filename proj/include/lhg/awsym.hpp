#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "lhg/moments.hpp"

namespace lhg {

struct AWSymError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInRange : AWSymError {
  using AWSymError::AWSymError;
};
struct InvalidPartition : AWSymError {
  using AWSymError::AWSymError;
};

// exponents of a1..a4 (= a, b, c, d)
struct Quad {
  std::array<int, 4> t{};
  int size() const { return t[0] + t[1] + t[2] + t[3]; }
  // odd sum, nonnegative, pairwise within one
  bool valid() const;
  std::string str() const;
  bool operator==(const Quad& o) const { return t == o.t; }
  bool operator!=(const Quad& o) const { return t != o.t; }
};

// order by (t4, t3, t2, −t1) lexicographically
int quad_cmp(const Quad& x, const Quad& y);
Quad kappa(int t);
int kappa_inv(const Quad& T);
// all quads with |T| ≤ max_size, increasing
std::vector<Quad> quads_up_to(int max_size);

// (T_k, ..., T_{n−1}), weakly decreasing
using Chain = std::vector<Quad>;
std::vector<int> chain_multiplicities(const Chain& c);
long chain_norm(const Chain& c, int k);  // Σ i(|T_i| − 1)/2
Quad chain_sum(const Chain& c);
LaurentPoly chain_term(const Chain& c, int n, int k);
// every chain of the given length drawn from `pool` (increasing) with Σ|T_i| ≤ max_deg
void enumerate_chains(int length, int max_deg, const std::vector<Quad>& pool,
                      const std::function<void(const Chain&)>& visit);

LaurentPoly tuple_sigma(int n, int k, const TruncSpec& trunc);

struct Interval {
  std::string name;
  std::function<bool(const Quad&)> contains;
};

struct IntervalPartition {
  std::string name;
  // the intervals meeting quads of size ≤ max_size, in increasing order
  std::function<std::vector<Interval>(int max_size)> intervals;
};

IntervalPartition partition_23();          // keyed by t4 and the multiset {t2, t3}
IntervalPartition partition_23_literal();  // I_t, I_t^+, I_t^- only; has gaps
IntervalPartition partition_34();
IntervalPartition partition_12();

// throws InvalidPartition on overlaps, gaps or order violations among quads of size ≤ max_size
void validate_partition(const IntervalPartition& p, int max_size);
LaurentPoly interval_sigma(const Interval& I, int n, int k, const TruncSpec& trunc);
LaurentPoly partition_compose(const IntervalPartition& p, int n, int k, const TruncSpec& trunc);

// images of 0..3, acting by τ·f(a1,a2,a3,a4) = f(a_{τ(1)}, ..., a_{τ(4)})
using Perm4 = std::array<int, 4>;
LaurentPoly permute_params(const LaurentPoly& f, const Perm4& tau);
std::vector<Perm4> all_perms4();
std::string perm_str(const Perm4& tau);

// swap t2 and t3 inside each interval block, then sort decreasing
Chain theta_23(const Chain& c, const std::vector<Interval>& intervals);

CheckReport symmetry_check(int n, int k, const TruncSpec& trunc, const Perm4& tau);

LaurentPoly inv_gf(int r, int s);
LaurentPoly g_function(int M1, int M2, int N);

CheckReport total_positivity_check(int max_n, int minor_size, const TruncSpec& trunc);
// exponent j(|s| − (n − k))/2; `printed` uses j(|s| − 1)/2 instead
CheckReport shifting_check(int n, int k, int j, const Quad& s, const TruncSpec& trunc, bool printed = false);

}  // namespace lhg
