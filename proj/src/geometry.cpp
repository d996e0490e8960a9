#include "lamqsd/geometry.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lamqsd::geometry {

CirclePoint::CirclePoint(double pos) : position(pos) {
  if (!(pos >= 0.0 && pos < 1.0))
    throw std::invalid_argument("CirclePoint: position must lie in [0,1)");
}

bool polygons_disjoint(std::span<const CirclePoint> a, std::span<const CirclePoint> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("polygons_disjoint: each set needs >= 2 points");
  std::vector<double> sa;
  sa.reserve(a.size());
  for (auto p : a) sa.push_back(p.position);
  std::sort(sa.begin(), sa.end());
  if (std::adjacent_find(sa.begin(), sa.end()) != sa.end())
    throw std::invalid_argument("polygons_disjoint: duplicate point");
  for (auto p : b)
    if (std::binary_search(sa.begin(), sa.end(), p.position))
      throw std::invalid_argument("polygons_disjoint: duplicate point across sets");

  // b's hull avoids a's iff every b vertex falls in the same circular gap of
  // a. Gap j is the arc (sa[j-1], sa[j]); indices 0 and size() are the same
  // wrapping gap.
  const std::size_t n = sa.size();
  std::size_t gap = n + 1;  // unset
  for (auto p : b) {
    auto it = std::upper_bound(sa.begin(), sa.end(), p.position);
    const std::size_t g = static_cast<std::size_t>(it - sa.begin()) % n;
    if (gap == n + 1)
      gap = g;
    else if (g != gap)
      return false;
  }
  return true;
}

Lamination::Lamination(int k, std::uint64_t seed)
    : k_(k), seed_(seed), rng_(seed) {
  if (k < 2) throw std::invalid_argument("Lamination: k must be >= 2");
  Fragment root;
  root.id = kRootFragment;
  root.label = 0;  // full disk counts as a fragment with 0 ends
  root.arcs = {{0.0, 1.0}};
  fragments_.push_back(std::move(root));
}

FragmentId Lamination::locate(CirclePoint p) const {
  if (circle_.empty()) return kRootFragment;
  auto it = circle_.upper_bound(p.position);
  if (it == circle_.begin()) it = circle_.end();
  --it;
  if (it->first == p.position)
    throw std::domain_error("locate: point coincides with a split point");
  return it->second;
}

SplitOutcome Lamination::throw_polygon(std::span<const CirclePoint> pts) {
  if (static_cast<int>(pts.size()) != k_)
    throw std::invalid_argument("throw_polygon: expected k points");
  std::vector<double> sorted;
  sorted.reserve(pts.size());
  for (auto p : pts) sorted.push_back(p.position);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("throw_polygon: coincident vertices");
  for (double v : sorted)
    if (circle_.count(v))
      throw std::domain_error("throw_polygon: vertex coincides with a split point");

  ++throws_;
  const FragmentId first = locate(CirclePoint(sorted.front()));
  bool same = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (locate(CirclePoint(sorted[i])) != first) {
      same = false;
      break;
    }
  if (!same) {
    throwLog_.push_back(false);
    return {};
  }
  throwLog_.push_back(true);
  ++accepted_;
  return split(first, sorted);
}

SplitOutcome Lamination::throw_random_polygon() {
  std::vector<CirclePoint> pts(static_cast<std::size_t>(k_));
  for (;;) {
    for (auto& p : pts) p = CirclePoint(rng_.uniform01());
    bool ok = true;
    for (std::size_t i = 0; ok && i < pts.size(); ++i) {
      if (circle_.count(pts[i].position)) ok = false;
      for (std::size_t j = i + 1; ok && j < pts.size(); ++j)
        if (pts[i].position == pts[j].position) ok = false;
    }
    if (!ok) {
      ++collisions_;
      continue;
    }
    return throw_polygon(pts);
  }
}

SplitOutcome Lamination::split(FragmentId fragId, std::vector<double>& pts) {
  const int k = k_;
  const long parentLabel = fragments_[fragId].label;
  const bool isRootSplit = circle_.empty();
  polygons_.push_back(pts);

  // Pieces of the parent's arcs inherited by each child; child i spans the
  // circular interval (pts[i], pts[i+1]).
  std::vector<std::vector<Arc>> childArcs(static_cast<std::size_t>(k));

  if (isRootSplit) {
    // The root's arc is the whole circle, cyclic with no boundary point:
    // each child gets exactly one piece.
    for (int i = 0; i < k; ++i) {
      const double s = pts[static_cast<std::size_t>(i)];
      const double t = pts[static_cast<std::size_t>((i + 1) % k)];
      childArcs[static_cast<std::size_t>(i)].push_back({s, t});
    }
  } else {
    const auto& arcs = fragments_[fragId].arcs;
    const std::size_t arcCount = arcs.size();

    // Containing arc: greatest start <= p, wrapping below the first start
    // (the wrapping arc, when present, always sorts last).
    auto arcIndexOf = [&](double p) -> std::size_t {
      std::size_t lo = 0, hi = arcCount;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (arcs[mid].start <= p)
          lo = mid + 1;
        else
          hi = mid;
      }
      return (lo == 0 ? arcCount : lo) - 1;
    };
    // Offset of p from the arc start, measured counterclockwise.
    auto ccwOffset = [](const Arc& a, double p) {
      return p >= a.start ? p - a.start : p - a.start + 1.0;
    };

    std::vector<std::size_t> vertexArc(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      vertexArc[static_cast<std::size_t>(i)] = arcIndexOf(pts[static_cast<std::size_t>(i)]);

    for (int i = 0; i < k; ++i) {
      const double s = pts[static_cast<std::size_t>(i)];
      const double t = pts[static_cast<std::size_t>((i + 1) % k)];
      const std::size_t ai = vertexArc[static_cast<std::size_t>(i)];
      const std::size_t bi = vertexArc[static_cast<std::size_t>((i + 1) % k)];
      auto& out = childArcs[static_cast<std::size_t>(i)];
      if (ai == bi && ccwOffset(arcs[ai], t) > ccwOffset(arcs[ai], s)) {
        out.push_back({s, t});
      } else {
        out.push_back({s, arcs[ai].end});
        for (std::size_t j = (ai + 1) % arcCount; j != bi; j = (j + 1) % arcCount)
          out.push_back(arcs[j]);
        out.push_back({arcs[bi].start, t});
      }
    }
  }

  // Genealogy order is a uniformly random permutation of the circular order.
  std::vector<std::uint8_t> perm(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  for (int i = k - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng_.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }

  SplitOutcome outcome;
  outcome.accepted = true;
  outcome.parent = fragId;
  outcome.parentLabel = parentLabel;
  outcome.children.resize(static_cast<std::size_t>(k));
  outcome.childLabels.resize(static_cast<std::size_t>(k));

  const auto baseId = static_cast<FragmentId>(fragments_.size());
  std::vector<FragmentId> circularChild(static_cast<std::size_t>(k));
  for (int slot = 0; slot < k; ++slot) {
    const std::uint8_t circ = perm[static_cast<std::size_t>(slot)];
    Fragment child;
    child.id = baseId + static_cast<FragmentId>(slot);
    child.parent = fragId;
    child.childIndex = static_cast<std::uint8_t>(slot);
    child.throwIndex = throws_;
    child.arcs = std::move(childArcs[circ]);
    std::sort(child.arcs.begin(), child.arcs.end(),
              [](const Arc& a, const Arc& b) { return a.start < b.start; });
    child.label = static_cast<long>(child.arcs.size());
    outcome.children[static_cast<std::size_t>(slot)] = child.id;
    outcome.childLabels[static_cast<std::size_t>(slot)] = child.label;
    circularChild[circ] = child.id;
    fragments_.push_back(std::move(child));
  }

  // Circle index update: new keys at the cut points, ownership transfer for
  // the parent's old arc starts.
  for (int i = 0; i < k; ++i) {
    const Fragment& ch = fragments_[circularChild[static_cast<std::size_t>(i)]];
    for (const Arc& arc : ch.arcs) circle_[arc.start] = ch.id;
  }

  Fragment& parent = fragments_[fragId];
  parent.live = false;
  parent.arcs.clear();
  parent.arcs.shrink_to_fit();
  parent.children = outcome.children;
  liveCount_ += static_cast<std::size_t>(k) - 1;
  return outcome;
}

void Lamination::export_genealogy(std::ostream& out) const {
  struct Item {
    FragmentId id;
    std::string address;
  };
  std::vector<Item> stack;
  stack.push_back({kRootFragment, "-"});
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    const Fragment& f = fragments_[item.id];
    out << item.address << '\t' << f.label << '\t' << f.throwIndex << '\n';
    for (int c = static_cast<int>(f.children.size()) - 1; c >= 0; --c) {
      const std::string childAddr =
          (item.address == "-" ? "" : item.address) + static_cast<char>('0' + c);
      stack.push_back({f.children[static_cast<std::size_t>(c)], childAddr});
    }
  }
}

std::string Lamination::genealogy_string() const {
  std::ostringstream os;
  export_genealogy(os);
  return os.str();
}

Lamination run_construction(int k, std::uint64_t throws, std::uint64_t seed) {
  Lamination lam(k, seed);
  for (std::uint64_t i = 0; i < throws; ++i) lam.throw_random_polygon();
  return lam;
}

}  // namespace lamqsd::geometry
