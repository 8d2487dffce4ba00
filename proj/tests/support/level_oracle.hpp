#pragma once
// Independent Cantor-Bendixson level oracle for [0, lambda], lambda < w^w.
// Works on raw coefficient tuples (tup[e] = coefficient of w^e) and computes
// derivatives by the topological definition: a point survives stage s+1 iff
// it survives stage s and is not isolated there, isolation being probed with
// explicit shrinking neighborhoods. No ordinal arithmetic from the library
// under test is used.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

using Tup = std::vector<std::uint64_t>;

inline int tup_cmp(const Tup& a, const Tup& b) {
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = n; i-- > 0;) {
    std::uint64_t av = i < a.size() ? a[i] : 0;
    std::uint64_t bv = i < b.size() ? b[i] : 0;
    if (av != bv) return av < bv ? -1 : 1;
  }
  return 0;
}

class LevelOracle {
 public:
  explicit LevelOracle(Tup lambda) : lambda_(std::move(lambda)) {}

  // Membership of p in the stage-th derivative of [0, lambda].
  bool in_derivative(const Tup& p, int stage) {
    if (stage == 0) return tup_cmp(p, lambda_) <= 0;
    auto key = std::make_pair(p, stage);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool r = in_derivative(p, stage - 1) && !isolated_in(p, stage - 1);
    memo_.emplace(std::move(key), r);
    return r;
  }

  // Exact level: the last stage whose derivative still contains p.
  int level(const Tup& p) {
    int s = 0;
    while (in_derivative(p, s + 1)) ++s;
    return s;
  }

 private:
  // Whether p, assumed to lie in the stage-th derivative, is isolated there.
  // Zero and points with a finite part are isolated outright ((p-1, p] works).
  // Otherwise p is a limit approached through its least nonzero position j;
  // we take approach points a_n just below p and ask whether the gap (a_n, p)
  // still meets the derivative, probing it with points a_n + w^i * m for all
  // positions i below j. If some gap misses, p is isolated by that interval.
  bool isolated_in(const Tup& p, int stage) {
    bool zero = true;
    for (std::uint64_t c : p) zero = zero && c == 0;
    if (zero) return true;
    if (!p.empty() && p[0] > 0) return true;
    std::size_t j = 0;
    while (p[j] == 0) ++j;
    for (std::uint64_t n = 1; n <= 3; ++n) {
      Tup a = p;
      a[j] -= 1;
      a[j - 1] = n;
      bool gap_meets = false;
      for (std::size_t i = 0; i < j && !gap_meets; ++i) {
        for (std::uint64_t m = 1; m <= 2 && !gap_meets; ++m) {
          Tup q = a;
          q[i] += m;
          gap_meets = in_derivative(q, stage);
        }
      }
      if (!gap_meets) return true;
    }
    return false;
  }

  Tup lambda_;
  std::map<std::pair<Tup, int>, bool> memo_;
};

}  // namespace oracle
