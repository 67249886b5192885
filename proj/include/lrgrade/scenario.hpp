#pragma once

#include "lrgrade/eg.hpp"

#include <string>
#include <vector>

namespace lrg {

/// Geometric refinement target. Rasterizes to the partition boxes whose
/// closed extent meets the shape; `boxes` coordinates are exact, the other
/// shapes live in double space.
struct RegionSpec {
    enum class Kind { boxes, rect, disk, band, curve };
    Kind kind = Kind::rect;

    std::vector<Box> boxes;                      // boxes: explicit rectangles
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;       // rect corners / band segment
    double cx = 0, cy = 0, radius = 0;           // disk
    double half_width = 0;                       // band: distance to the segment
    std::string curve;                           // preset name, see below
};

/// Fixed parametric preset curves, all phrased in unit coordinates and
/// affinely mapped onto the (square) domain:
///   circle    center (.5,.5), radius .3
///   square    boundary of [.25,.75]^2
///   triangle  boundary through (.2,.2), (.8,.2), (.5,.8)
///   diagonal  the segment (0,0)-(1,1)
///   bean      polar r(t) = .26 + .10 cos t + .06 sin 2t about (.5,.5),
///             a lopsided blob with no axis of symmetry
/// Curve sampling is refined until the rasterized box set is stable, so no
/// partition box the curve passes through is skipped.
std::vector<Box> rasterize(const LRMesh& mesh, const RegionSpec& spec);

struct ScenarioStep {
    RegionSpec region;
};

struct Scenario {
    Box domain{{Dyadic(0, 0), Dyadic(1, 0)}, {Dyadic(0, 0), Dyadic(1, 0)}};
    int degree_x = 2, degree_y = 2;
    Variant variant = Variant::horizontal_major;
    std::vector<Dyadic> start_interior;  // initial tensor knots, both axes
    std::vector<ScenarioStep> steps;
};

/// One region object on its own, e.g. {"rect": [0, 0, 0.25, 0.25]}.
RegionSpec parse_region_json(const std::string& json_text);

/// Scenario JSON:
///   {"domain": [0, 1], "degree": [2, 2], "variant": "H",
///    "start_interior": [0.25, 0.5, 0.75],
///    "steps": [{"region": {"rect": [0, 0, 0.25, 0.25]}},
///              {"region": {"disk": [0.5, 0.5, 0.3]}},
///              {"region": {"band": [0, 0, 1, 1, 0.05]}},
///              {"region": {"curve": "bean"}},
///              {"region": {"boxes": [[0, 0, 0.25, 0.25]]}}]}
/// Numbers must convert exactly to binary (all short decimals do); strings
/// are accepted for coordinates and must be dyadic decimals.
Scenario parse_scenario(const std::string& json_text);

LRSet initial_set(const Scenario& sc);

struct StepOutcome {
    std::vector<Box> region;  // rasterized on the mesh the step started from
    LRSet set;                // state after the step's refinement
};

/// Initial set plus one refinement iteration per step. A region that
/// rasterizes to no boxes aborts with a runtime_error naming the step.
std::vector<StepOutcome> run_scenario(const Scenario& sc);

}  // namespace lrg
