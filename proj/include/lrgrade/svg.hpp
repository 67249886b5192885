#pragma once

#include "lrgrade/bspline.hpp"
#include "lrgrade/mesh.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lrg {

/// Overlays drawn under the meshlines, in paint order: region fill, shadow
/// fill, then one member support (outline plus its local knot grid).
struct RenderOptions {
    double size = 640.0;    // pixel edge of the domain square
    double margin = 24.0;
    std::vector<Box> region;
    std::vector<Box> shadow;
    std::optional<LRBSpline> support;
};

/// Deterministic standalone SVG of the mesh: equal inputs give equal bytes.
/// Meshlines are drawn darker and thicker with multiplicity.
std::string render_svg(const LRMesh& mesh, const RenderOptions& opt = {});

}  // namespace lrg
