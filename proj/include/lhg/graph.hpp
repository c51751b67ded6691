#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lhg/algebra.hpp"

namespace lhg {

// v^t_{i,j} drawn at (i, t + j/(i+1))
struct Vertex {
  int t = 0, i = 0, j = 0;
  std::pair<Rat, Rat> coords() const { return {Rat(i), Rat(t) + Rat(j, i + 1)}; }
  static Vertex at(const Rat& x, const Rat& y);  // throws if (x,y) is not a vertex
};

enum class PathKind { SE, NEstar };

struct LHComposition {
  int n = 0, k = 0;
  std::vector<int> alpha;  // alpha[0] is α_{k+1}
  PathKind kind = PathKind::SE;

  int at(int i) const { return alpha[i - k - 1]; }
  bool valid() const;
  nlohmann::json to_json() const;
};

// nullopt means no cap
using HeightCap = std::optional<int>;

std::pair<int, int> phi_decode(int alpha, int i);
int phi_encode(int t, int j, int i);

// sign of α/i − β/j
int ratio_cmp(long alpha, long i, long beta, long j);

// Gate sees the prefix α_{k+1..m} just extended at column m; returning
// false prunes the branch.
using DegreeGate = std::function<bool(const std::vector<int>& prefix, int column)>;

void enumerate_compositions(int n, int k, PathKind kind, HeightCap cap,
                            const std::function<void(const LHComposition&)>& visit,
                            const DegreeGate& gate = nullptr);
std::vector<LHComposition> compositions(int n, int k, PathKind kind, HeightCap cap);

// Reads the composition off a vertex list: every east step is recorded at
// its right end x = i as α_i = t·i + j.
std::vector<int> phi_from_vertices(const std::vector<std::pair<Rat, Rat>>& path);

}  // namespace lhg
