#include "lamqsd/branching.hpp"

#include <algorithm>
#include <stdexcept>

namespace lamqsd::branching {

LabelKernel::LabelKernel(int arity) : k(arity) {
  if (arity < 2) throw std::invalid_argument("LabelKernel: arity must be >= 2");
}

Rat LabelKernel::prob(long x, long y) const { return kernel_prob(k, x, y); }
double LabelKernel::prob_d(long x, long y) const { return kernel_prob_d(k, x, y); }

Rat LabelKernel::row_sum(long x) const {
  Rat s = 0;
  for (long y = 1; y <= x + 1; ++y) s += prob(x, y);
  return s;
}

Rat LabelKernel::mean(long x) const {
  Rat s = 0;
  for (long y = 1; y <= x + 1; ++y) s += Rat(y) * prob(x, y);
  return s;
}

Rat kernel_prob(int k, long x, long y) {
  if (k < 2) throw std::invalid_argument("kernel_prob: arity must be >= 2");
  if (x < 0) throw std::invalid_argument("kernel_prob: label must be >= 0");
  if (y < 1 || y > x + 1) return Rat(0);
  return Rat(binomial(x - y + k - 1, k - 2), binomial(x + k - 1, k - 1));
}

double kernel_prob_d(int k, long x, long y) { return to_double(kernel_prob(k, x, y)); }

void sample_composition(int k, long m, RngStream& rng, std::vector<long>& parts) {
  parts.clear();
  if (k == 2) {
    const long m1 = static_cast<long>(rng.below(static_cast<std::uint64_t>(m) + 1));
    parts.push_back(m1);
    parts.push_back(m - m1);
    return;
  }
  // Floyd's sampling of k-1 distinct bar slots in [1, m+k-1].
  const long slots = m + k - 1;
  static thread_local std::vector<long> bars;
  bars.clear();
  for (long j = slots - (k - 1) + 1; j <= slots; ++j) {
    const long t = static_cast<long>(rng.below(static_cast<std::uint64_t>(j))) + 1;
    if (std::find(bars.begin(), bars.end(), t) != bars.end())
      bars.push_back(j);
    else
      bars.push_back(t);
  }
  std::sort(bars.begin(), bars.end());
  long prev = 0;
  for (long b : bars) {
    parts.push_back(b - prev - 1);
    prev = b;
  }
  parts.push_back(slots - prev);
}

void sample_children(int k, long m, RngStream& rng, std::vector<long>& labels) {
  sample_composition(k, m, rng, labels);
  for (auto& v : labels) v += 1;
}

RayPath simulate_ray(int k, long x0, int n, long a, RngStream& rng) {
  if (x0 < 0 || n < 0 || a < 1) throw std::invalid_argument("simulate_ray: bad arguments");
  RayPath path;
  path.labels.reserve(static_cast<std::size_t>(n) + 1);
  path.labels.push_back(x0);
  if (x0 < a) path.killedAt = 0;
  std::vector<long> children;
  long x = x0;
  for (int i = 1; i <= n; ++i) {
    sample_children(k, x, rng, children);
    x = children.front();
    path.labels.push_back(x);
    if (!path.killedAt && x < a) path.killedAt = i;
  }
  return path;
}

GoodPathCount count_good_paths(int k, long a, long x0, int n,
                               std::uint64_t budget, RngStream& rng) {
  if (budget == 0) throw std::invalid_argument("count_good_paths: budget must be > 0");
  GoodPathCount res;
  res.n = n;
  res.a = a;
  if (x0 < a) return res;

  struct Node {
    long label;
    int depth;
  };
  static thread_local std::vector<Node> stack;
  stack.clear();
  stack.push_back({x0, 0});
  std::vector<long> children;
  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    if (++res.nodesExpanded > budget) {
      res.truncated = true;
      return res;
    }
    if (node.depth == n) {
      ++res.count;
      continue;
    }
    sample_children(k, node.label, rng, children);
    for (int c = k - 1; c >= 0; --c)
      if (children[static_cast<std::size_t>(c)] >= a)
        stack.push_back({children[static_cast<std::size_t>(c)], node.depth + 1});
  }
  return res;
}

}  // namespace lamqsd::branching
