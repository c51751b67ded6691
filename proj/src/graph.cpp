#include "lhg/graph.hpp"

#include <algorithm>
#include <map>

namespace lhg {

Vertex Vertex::at(const Rat& x, const Rat& y) {
  if (x.get_den() != 1 || x < 0) throw std::invalid_argument("vertex x must be a nonnegative integer");
  int i = int(x.get_num().get_si());
  mpz_class t = y.get_num() / y.get_den();  // floor for y ≥ 0
  if (y < 0) throw std::invalid_argument("vertex y must be nonnegative");
  Rat frac = (y - Rat(t)) * (i + 1);
  if (frac.get_den() != 1) throw std::invalid_argument("not a lecture hall vertex");
  return {int(t.get_si()), i, int(frac.get_num().get_si())};
}

std::pair<int, int> phi_decode(int alpha, int i) {
  if (i < 1) throw std::invalid_argument("phi_decode needs i >= 1");
  int t = alpha / i;
  return {t, alpha - i * t};
}

int phi_encode(int t, int j, int i) { return t * i + j; }

int ratio_cmp(long alpha, long i, long beta, long j) {
  long l = alpha * j, r = beta * i;
  return (l > r) - (l < r);
}

bool LHComposition::valid() const {
  if (int(alpha.size()) != n - k) return false;
  for (int v : alpha)
    if (v < 0) return false;
  for (int i = k + 1; i < n; ++i) {
    int c = ratio_cmp(at(i), i, at(i + 1), i + 1);
    if (kind == PathKind::SE ? c < 0 : c >= 0) return false;
  }
  return true;
}

nlohmann::json LHComposition::to_json() const {
  return {{"n", n}, {"k", k}, {"kind", kind == PathKind::SE ? "SE" : "NEstar"}, {"alpha", alpha}};
}

namespace {

struct Enumerator {
  int n, k;
  PathKind kind;
  int cap;  // rows
  const std::function<void(const LHComposition&)>& visit;
  const DegreeGate& gate;
  LHComposition cur;

  // admissible α at column i given the previous column
  std::pair<long, long> range(int i) const {
    long hi = long(cap) * i - 1;
    long lo = 0;
    if (i > k + 1) {
      long prev = cur.alpha.back();
      if (kind == PathKind::SE) {
        // α_i/i ≤ prev/(i−1)
        long bound = (prev * i) / (i - 1);
        hi = std::min(hi, bound);
      } else {
        // α_i/i > prev/(i−1)
        lo = (prev * i) / (i - 1) + 1;
      }
    }
    return {lo, hi};
  }

  void go(int i) {
    if (i > n) {
      visit(cur);
      return;
    }
    auto [lo, hi] = range(i);
    for (long a = lo; a <= hi; ++a) {
      cur.alpha.push_back(int(a));
      if (!gate || gate(cur.alpha, i)) go(i + 1);
      cur.alpha.pop_back();
    }
  }
};

}  // namespace

void enumerate_compositions(int n, int k, PathKind kind, HeightCap cap,
                            const std::function<void(const LHComposition&)>& visit, const DegreeGate& gate) {
  if (k > n) return;
  // an unbounded cap makes the family infinite; callers truncate first
  if (!cap) throw std::invalid_argument("enumeration needs a finite height cap");
  if (*cap < 1) throw std::invalid_argument("height cap must be positive");
  Enumerator e{n, k, kind, *cap, visit, gate, {}};
  e.cur.n = n;
  e.cur.k = k;
  e.cur.kind = kind;
  e.go(k + 1);
}

std::vector<LHComposition> compositions(int n, int k, PathKind kind, HeightCap cap) {
  std::vector<LHComposition> out;
  enumerate_compositions(n, k, kind, cap, [&](const LHComposition& c) { out.push_back(c); });
  return out;
}

std::vector<int> phi_from_vertices(const std::vector<std::pair<Rat, Rat>>& path) {
  std::map<int, int> alpha;
  for (size_t s = 0; s + 1 < path.size(); ++s) {
    const auto& [x0, y0] = path[s];
    const auto& [x1, y1] = path[s + 1];
    Vertex u = Vertex::at(x0, y0), v = Vertex::at(x1, y1);
    if (u.i == v.i) continue;  // vertical step
    if (std::abs(u.i - v.i) != 1 || u.t != v.t || u.j != v.j)
      throw std::invalid_argument("not an edge of the lecture hall graph");
    const Vertex& right = u.i > v.i ? u : v;
    if (right.j > right.i - 1) throw std::invalid_argument("east step with j out of range");
    alpha[right.i] = phi_encode(right.t, right.j, right.i);
  }
  std::vector<int> out;
  for (auto& [i, a] : alpha) out.push_back(a);
  return out;
}

}  // namespace lhg
