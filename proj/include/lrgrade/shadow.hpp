#pragma once

#include "lrgrade/mesh.hpp"

#include <optional>
#include <vector>

namespace lrg {

struct Point {
    Dyadic x, y;
    bool operator==(const Point&) const = default;
};

/// Endpoints of the segment swept from a point along `axis` by walking
/// pk+1 transversal crossings outward each way, multiplicity counted and
/// a line through the point itself counted first in both walks. When the
/// mesh runs out of crossings the walk stops at the last one.
struct ShadowEndpoints {
    Point lo, hi;
};

ShadowEndpoints shadow_endpoints(const LRMesh& mesh, const Point& q, Dir axis, int pk);

/// Boxes meeting the closed region or any closed shadow segment swept along
/// `axis` from a point of the region's boundary; edge and corner touches
/// count. The region must consist of partition boxes of the mesh; the result
/// always contains it and is sorted.
std::vector<Box> generalized_shadow(const LRMesh& mesh, const std::vector<Box>& region, Dir axis, int pk);

/// Multiplicity-counted meshline crossings of the closed segment between two
/// axis-aligned points: 0 for identical points, empty (infinite) when the
/// points differ in both coordinates.
std::optional<int> separation_distance(const LRMesh& mesh, const Point& p, const Point& q);

/// Strip-separation shadow, defined on tensor meshes only (throws
/// otherwise): boxes touching the closure of the point set lying within
/// `threshold` crossings of the region along `axis`. threshold < 0 means pk.
/// Agrees with generalized_shadow at the default threshold.
std::vector<Box> classic_shadow(const LRMesh& mesh, const std::vector<Box>& region, Dir axis, int pk,
                                int threshold = -1);

}  // namespace lrg
