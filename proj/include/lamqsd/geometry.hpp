#pragma once

#include "lamqsd/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace lamqsd::geometry {

// Position on the unit circle as a fraction of a full turn in [0,1).
// Working in turns keeps the disjointness and location tests purely
// order-based; no trigonometry enters the construction.
struct CirclePoint {
  double position = 0.0;

  CirclePoint() = default;
  explicit CirclePoint(double pos);

  friend auto operator<=>(const CirclePoint&, const CirclePoint&) = default;
};

using FragmentId = std::uint32_t;
inline constexpr FragmentId kNoFragment = std::numeric_limits<FragmentId>::max();
inline constexpr FragmentId kRootFragment = 0;

// Counterclockwise arc from start to end. end < start means the arc wraps
// through position 0.
struct Arc {
  double start = 0.0;
  double end = 0.0;
};

// A convex cell of the lamination, live or historical. Live fragments keep
// their boundary arcs; a fragment's ends (and so its label) is its arc count
// at creation, except the root which has 0 ends by convention.
struct Fragment {
  FragmentId id = kNoFragment;
  FragmentId parent = kNoFragment;
  std::uint8_t childIndex = 0;      // position among the parent's children
  long label = 0;                    // end count at creation
  std::uint64_t throwIndex = 0;      // accepted throw that created it; 0 = root
  std::vector<FragmentId> children;  // empty while live
  std::vector<Arc> arcs;             // sorted by start; cleared on split
  bool live = true;
};

struct SplitOutcome {
  bool accepted = false;
  FragmentId parent = kNoFragment;
  long parentLabel = 0;
  std::vector<FragmentId> children;  // in genealogy order (random permutation)
  std::vector<long> childLabels;     // labels of `children`, same order
};

// True iff the inscribed convex hulls of a and b are disjoint, i.e. the two
// point sets do not interleave on the circle. Throws on a duplicated point
// across the sets (degenerate configuration).
bool polygons_disjoint(std::span<const CirclePoint> a, std::span<const CirclePoint> b);

// The random recursive lamination of the disk by uniform k-gons, together
// with the full fragment genealogy.
class Lamination {
 public:
  Lamination(int k, std::uint64_t seed);

  int k() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t throws() const { return throws_; }
  std::uint64_t accepted() const { return accepted_; }
  std::uint64_t collisions() const { return collisions_; }

  const std::vector<Fragment>& fragments() const { return fragments_; }
  const Fragment& fragment(FragmentId id) const { return fragments_[id]; }
  std::size_t liveCount() const { return liveCount_; }

  // Live fragment whose arcs contain p. Throws if p coincides with a split
  // point (callers resample).
  FragmentId locate(CirclePoint p) const;

  // One attempted polygon. Accepts iff all k vertices locate in the same
  // fragment; on acceptance the fragment is split into k children in
  // uniformly random genealogy order. Throws on point collisions.
  SplitOutcome throw_polygon(std::span<const CirclePoint> pts);

  // One attempted polygon with vertices drawn uniformly; collisions are
  // resampled internally (and counted) rather than surfaced.
  SplitOutcome throw_random_polygon();

  // accept/reject log, one entry per attempted throw
  const std::vector<bool>& throwLog() const { return throwLog_; }

  // accepted polygons, each as its sorted vertex positions
  const std::vector<std::vector<double>>& polygons() const { return polygons_; }

  // One node per line: address<TAB>label<TAB>throwIndex, address over
  // {0..k-1} with "-" for the root; depth-first, lexicographic.
  void export_genealogy(std::ostream& out) const;
  std::string genealogy_string() const;

 private:
  SplitOutcome split(FragmentId fragId, std::vector<double>& pts);

  int k_;
  std::uint64_t seed_;
  RngStream rng_;
  std::uint64_t throws_ = 0;
  std::uint64_t accepted_ = 0;
  std::uint64_t collisions_ = 0;
  std::size_t liveCount_ = 1;
  std::vector<Fragment> fragments_;
  std::map<double, FragmentId> circle_;  // arc start -> owner, empty until first split
  std::vector<bool> throwLog_;
  std::vector<std::vector<double>> polygons_;
};

// Deterministic construction: throws attempted polygons with the stream
// derived from seed.
Lamination run_construction(int k, std::uint64_t throws, std::uint64_t seed);

}  // namespace lamqsd::geometry
