#pragma once

#include "lrgrade/bspline.hpp"
#include "lrgrade/mesh.hpp"

#include <vector>

namespace lrg {

/// Alternation scheme: which midline halves a square. Rectangles are always
/// halved across their long side, restoring squares.
enum class Variant { horizontal_major, vertical_major };

/// How the grader consumes the oversized boxes found in one shadow: one at
/// a time nearest-first with the shadow recomputed in between (the default,
/// which avoids spurious lines), or all of them before re-sweeping (kept as
/// a comparison path for tests).
enum class GraderPolicy { halve_closest_first, halve_all_then_reshadow };

enum class BoxForm { square, wide, tall };

struct BoxClass {
    int level = 0;  // halvings separating the box from the domain
    BoxForm form = BoxForm::square;
};

/// Classifies a halving descendant of the (square) domain: level from the
/// exact area ratio, form from the sides. Throws std::invalid_argument when
/// the box is not of halving shape (aspect 1:1 or 2:1 with a power-of-two
/// area ratio).
BoxClass box_level_and_shape(const Box& domain, const Box& b);

/// Squared diameter of the box this one was halved from, exact. The ratio
/// to the own squared diameter is 5/2 for squares and 8/5 for rectangles.
Dyadic parent_diameter_sq(const Box& b);

/// Sweep direction used when grading around a box of the given form: the
/// direction of the cut that would halve the box (rectangles across their
/// long side, squares per the variant). Grading along the box's own future
/// cut direction is what keeps every member support traversed after a
/// refinement; sweeping along the long edges instead provably leaves
/// nested supports behind at bidegrees above (1,1).
Dir shadow_direction(BoxForm form, Variant v);

/// The midline segment that halves the box: squares per the variant,
/// rectangles across their long side. The span is the box's own extent.
Segment halve_box(const Box& b, Variant v);

/// One marked-region refinement pass: every largest-diameter cell in the
/// local meshes of the members whose open support meets `omega` is halved,
/// each splitting segment stretched over the owning member's support.
/// All segments of one pass share a direction.
LRMesh refining_step(const LRSet& set, const std::vector<Box>& omega, Variant v);

/// Grading repair: processes boxes small to large and halves boxes in their
/// sweep shadow that are two or more levels coarser, until none remain. The
/// result refines the input.
LRMesh eg_grader(const LRMesh& mesh, Variant v, GraderPolicy policy = GraderPolicy::halve_closest_first);

/// Full refinement iteration: refine around `omega`, repair grading, update
/// the member set, drop the omega boxes that were split, and repeat until
/// the whole marked region has been consumed. Returns the new set (its mesh
/// rides along).
LRSet eg_iterate(const LRSet& set, const std::vector<Box>& omega, Variant v,
                 GraderPolicy policy = GraderPolicy::halve_closest_first);

}  // namespace lrg
