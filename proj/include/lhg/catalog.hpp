#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lhg/moments.hpp"

namespace lhg {

struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownFamily : CatalogError {
  using CatalogError::CatalogError;
};
struct UnknownLabel : CatalogError {
  using CatalogError::CatalogError;
};

// Which array a weight system (or closed form) produces.
//   sigma / nu                 monomial basis x^n against p_k, and its inverse
//   sigma_factorial / nu_...   factorial basis (x|d)^n for the family's d
//   sigma_hermite / nu_...     continuous q-Hermite basis H_n(x|q)
//   sigma_hermite_rescaled     (2/i)^{n-k} sigma_hermite(ia,ib,ic,id)
//   cc1..cc4                   one-step connection coefficients
enum class Target {
  sigma,
  nu,
  sigma_factorial,
  nu_factorial,
  sigma_hermite,
  nu_hermite,
  sigma_hermite_rescaled,
  cc1,
  cc2,
  cc3,
  cc4
};
std::string target_name(Target t);
Target parse_target(const std::string& s);

struct SystemEntry {
  std::string label;
  Target target;
  std::string construction;
};

struct FamilySpec {
  std::string name;
  std::string params;  // subset of "abcd"
  std::string basis;
  std::vector<Target> closed;
  std::vector<SystemEntry> systems;
};

const std::vector<FamilySpec>& families();
const FamilySpec& family(const std::string& name);
const SystemEntry& system_entry(const std::string& family, const std::string& label);
nlohmann::json families_manifest();

WeightSystem weight_system(const std::string& family, const std::string& label);

TriangularArray closed_array(const std::string& family, Target target, int N);
Frac closed_value(const std::string& family, Target target, int n, int k);
inline Frac closed_sigma(const std::string& f, int n, int k) { return closed_value(f, Target::sigma, n, k); }
inline Frac closed_nu(const std::string& f, int n, int k) { return closed_value(f, Target::nu, n, k); }

// d_j = q^{-j} and d_j = (aq^j + a^{-1}q^{-j})/2
LaurentPoly nu_q(int j);
LaurentPoly f_seq(int j);
// rows[r][k] = [x^k] (x|d)^r for r ≤ N
std::vector<std::vector<LaurentPoly>> factorial_powers(const std::function<LaurentPoly(int)>& d, int N);
// τ with x^n = Σ_r τ_{n,r} (x|d)^r, by peeling leading coefficients
TriangularArray power_to_factorial(const std::function<LaurentPoly(int)>& d, int N);

LaurentPoly hermite_sigma_TR(int n, int k);

// (2/i)^{steps} · s with a,b,c,d ↦ i·a, i·b, i·c, i·d; throws if the result is not real
Frac unit_rescale(const Frac& s, int steps);

// Coefficients of x^0..x^n in the n-th polynomial expanded from its
// basic hypergeometric definition. `form` picks between equivalent
// definitions where there are two (0 = primary).
std::vector<Frac> polynomial_from_definition(const std::string& family, int n, int form = 0);

// H_n(x|q) → H_n(x;a|q) → Q_n → p^{dH}_n → p_n(AW) connection formulas,
// checked on the definitions expanded in x
CheckReport check_connections(int N);

}  // namespace lhg
