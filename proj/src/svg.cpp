#include "lamqsd/svg.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

namespace lamqsd::svg {

namespace {

constexpr const char* kFillEven = "#dde8f4";
constexpr const char* kFillOdd = "#f4ecdd";
constexpr const char* kStroke = "#1a1a2e";

struct Pt {
  double x, y;
};

// position in turns -> canvas coordinates (y flipped for SVG)
Pt point(double t) {
  const double a = 2.0 * std::numbers::pi * t;
  return {std::cos(a), -std::sin(a)};
}

void fmt(std::ostringstream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  os << buf;
}

void moveTo(std::ostringstream& os, Pt p) {
  os << "M ";
  fmt(os, p.x);
  os << ' ';
  fmt(os, p.y);
  os << ' ';
}

// counterclockwise circle arc from position s to position t
void circleArcTo(std::ostringstream& os, double s, double t) {
  const double len = t >= s ? t - s : t - s + 1.0;
  const Pt q = point(t);
  os << "A 1 1 0 " << (len > 0.5 ? 1 : 0) << " 0 ";
  fmt(os, q.x);
  os << ' ';
  fmt(os, q.y);
  os << ' ';
}

// chord from position s to position t, straight or as the geodesic arc
// orthogonal to the unit circle
void chordTo(std::ostringstream& os, double s, double t, bool hyperbolic) {
  const Pt p = point(s), q = point(t);
  if (hyperbolic) {
    // center of the orthogonal circle = intersection of the tangents, from
    // C . P = 1 and C . Q = 1 in unflipped coordinates
    const double px = std::cos(2.0 * std::numbers::pi * s);
    const double py = std::sin(2.0 * std::numbers::pi * s);
    const double qx = std::cos(2.0 * std::numbers::pi * t);
    const double qy = std::sin(2.0 * std::numbers::pi * t);
    const double det = px * qy - py * qx;
    if (std::abs(det) > 1e-9) {
      const double cx = (qy - py) / det;
      const double cy = (px - qx) / det;
      const double r = std::sqrt(cx * cx + cy * cy - 1.0);
      // flip to canvas coordinates and pick the sweep whose center is C
      const Pt c{cx, -cy};
      const double dx = q.x - p.x, dy = q.y - p.y;
      const double wx = c.x - 0.5 * (p.x + q.x), wy = c.y - 0.5 * (p.y + q.y);
      const int sweep = (wx * dy - wy * dx) > 0.0 ? 1 : 0;
      os << "A ";
      fmt(os, r);
      os << ' ';
      fmt(os, r);
      os << " 0 0 " << sweep << ' ';
      fmt(os, q.x);
      os << ' ';
      fmt(os, q.y);
      os << ' ';
      return;
    }
  }
  os << "L ";
  fmt(os, q.x);
  os << ' ';
  fmt(os, q.y);
  os << ' ';
}

}  // namespace

std::string render_lamination(const geometry::Lamination& lam, const RenderOptions& opts) {
  std::ostringstream os;
  char head[256];
  std::snprintf(head, sizeof(head),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
                "height=\"%.0f\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n",
                opts.size, opts.size);
  os << head;
  os << "<desc>k=" << lam.k() << " throws=" << lam.throws()
     << " accepted=" << lam.accepted() << " seed=" << lam.seed() << "</desc>\n";

  // fragment depths for the alternating fill
  const auto& frags = lam.fragments();
  std::vector<int> depth(frags.size(), 0);
  for (std::size_t i = 1; i < frags.size(); ++i)
    depth[i] = depth[frags[i].parent] + 1;

  if (lam.accepted() == 0) {
    os << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"" << kFillEven << "\"/>\n";
  } else {
    for (const auto& frag : frags) {
      if (!frag.live) continue;
      const auto& arcs = frag.arcs;
      std::ostringstream path;
      moveTo(path, point(arcs.front().start));
      for (std::size_t j = 0; j < arcs.size(); ++j) {
        circleArcTo(path, arcs[j].start, arcs[j].end);
        const double nextStart = arcs[(j + 1) % arcs.size()].start;
        chordTo(path, arcs[j].end, nextStart, opts.hyperbolic);
      }
      os << "<path d=\"" << path.str() << "Z\" fill=\""
         << (depth[frag.id] % 2 == 0 ? kFillEven : kFillOdd)
         << "\" stroke=\"none\"/>\n";
    }
  }

  // polygon sides on top of the fills
  for (const auto& poly : lam.polygons()) {
    std::ostringstream path;
    moveTo(path, point(poly.front()));
    const std::size_t sides = poly.size() == 2 ? 1 : poly.size();
    for (std::size_t i = 0; i < sides; ++i)
      chordTo(path, poly[i], poly[(i + 1) % poly.size()], opts.hyperbolic);
    os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << kStroke
       << "\" stroke-width=\"0.006\"/>\n";
  }

  os << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"" << kStroke
     << "\" stroke-width=\"0.01\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace lamqsd::svg
