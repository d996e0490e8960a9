#pragma once

#include "lamqsd/geometry.hpp"

#include <string>

namespace lamqsd::svg {

struct RenderOptions {
  bool hyperbolic = false;   // chords as circular arcs orthogonal to the circle
  double size = 600.0;       // canvas edge in px
};

// Deterministic SVG of the lamination: fragments filled by depth parity,
// polygon sides as chords, the unit circle on top. Identical input gives
// byte-identical output.
std::string render_lamination(const geometry::Lamination& lam,
                              const RenderOptions& opts = {});

}  // namespace lamqsd::svg
