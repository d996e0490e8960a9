#pragma once

#include "lamqsd/rational.hpp"
#include "lamqsd/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lamqsd::branching {

// One-step law of a child's label given the parent's, on the k-ary tree.
//
// A parent labeled m hands out (1+m_1, ..., 1+m_k) where (m_1,...,m_k) is a
// uniform composition of m into k nonnegative parts. The marginal of a single
// child is
//
//   P_k(x, y) = C(x-y+k-1, k-2) / C(x+k-1, k-1)   for 1 <= y <= x+1,
//
// which reduces to 1/(x+1) for k=2 and 2(x+2-y)/((x+1)(x+2)) for k=3.
struct LabelKernel {
  int k;

  explicit LabelKernel(int arity);

  Rat prob(long x, long y) const;      // exact
  double prob_d(long x, long y) const; // double boundary

  Rat row_sum(long x) const;           // == 1
  Rat mean(long x) const;              // == 1 + x/k
};

Rat kernel_prob(int k, long x, long y);
double kernel_prob_d(int k, long x, long y);

// Uniform composition of m into k nonnegative parts, by choosing a uniform
// (k-1)-subset of the m+k-1 star/bar slots with Floyd's algorithm. O(k) per
// draw, exactly uniform over the C(m+k-1, k-1) compositions.
void sample_composition(int k, long m, RngStream& rng, std::vector<long>& parts);

// Child labels (1+m_1, ..., 1+m_k) for a parent labeled m.
void sample_children(int k, long m, RngStream& rng, std::vector<long>& labels);

// Labels along one fixed ray of the tree.
struct RayPath {
  std::vector<long> labels;       // X_0 .. X_n
  std::optional<int> killedAt;    // first i with X_i < a, if any (T)
};

RayPath simulate_ray(int k, long x0, int n, long a, RngStream& rng);

// Count of root-to-level-n paths along which every label stays >= a, from a
// depth-first expansion that prunes any node labeled below a.
struct GoodPathCount {
  int n = 0;
  long a = 0;
  std::uint64_t count = 0;
  std::uint64_t nodesExpanded = 0;
  bool truncated = false;  // node budget hit; count is then a lower bound
};

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

GoodPathCount count_good_paths(int k, long a, long x0, int n,
                               std::uint64_t budget, RngStream& rng);

}  // namespace lamqsd::branching
