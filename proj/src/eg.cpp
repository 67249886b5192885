#include "lrgrade/eg.hpp"

#include "lrgrade/shadow.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace lrg {

namespace {

BoxForm form_of(const Box& b) {
    const Dyadic w = b.width(), h = b.height();
    if (w == h) return BoxForm::square;
    if (w == h + h) return BoxForm::wide;
    if (h == w + w) return BoxForm::tall;
    throw std::invalid_argument("box " + b.describe() + " is not of halving shape");
}

}  // namespace

BoxClass box_level_and_shape(const Box& domain, const Box& b) {
    const BoxForm form = form_of(b);
    // canonical dyadics share the odd numerator exactly when the ratio of
    // the areas is a power of two
    const Dyadic a0 = domain.area(), a = b.area();
    if (a.num != a0.num || a.exp < a0.exp)
        throw std::invalid_argument("box " + b.describe() + " is not a halving descendant of the domain");
    return {a.exp - a0.exp, form};
}

Dyadic parent_diameter_sq(const Box& b) {
    const Dyadic w = b.width(), h = b.height();
    switch (form_of(b)) {
        case BoxForm::square:
            return Dyadic::from_int(5) * w * w;  // parent is a 2:1 rectangle
        case BoxForm::wide:
            return Dyadic::from_int(2) * w * w;  // parent is the w-sided square
        case BoxForm::tall:
        default:
            return Dyadic::from_int(2) * h * h;
    }
}

Dir shadow_direction(BoxForm form, Variant v) {
    // matches the cut direction of halve_box for the same form and variant
    if (form == BoxForm::wide) return Dir::vertical;
    if (form == BoxForm::tall) return Dir::horizontal;
    return v == Variant::horizontal_major ? Dir::horizontal : Dir::vertical;
}

Segment halve_box(const Box& b, Variant v) {
    Dir cut;
    switch (form_of(b)) {
        case BoxForm::square:
            cut = v == Variant::horizontal_major ? Dir::horizontal : Dir::vertical;
            break;
        case BoxForm::wide:
            cut = Dir::vertical;
            break;
        case BoxForm::tall:
        default:
            cut = Dir::horizontal;
            break;
    }
    if (cut == Dir::horizontal) return {Dir::horizontal, midpoint(b.y.lo, b.y.hi), b.x};
    return {Dir::vertical, midpoint(b.x.lo, b.x.hi), b.y};
}

LRMesh refining_step(const LRSet& set, const std::vector<Box>& omega_in, Variant v) {
    const LRMesh& mesh = set.mesh();
    const std::vector<Box> omega = sorted_region(omega_in);
    if (omega.empty()) throw std::invalid_argument("empty refinement region");
    require_region_of(mesh, omega);

    // members whose open support meets the region, with their local meshes
    std::vector<std::pair<const LRBSpline*, LocalMesh>> affected;
    for (const auto& b : set.members()) {
        const Box s = b.support();
        for (const auto& w : omega) {
            if (!s.overlaps_open(w)) continue;
            affected.emplace_back(&b, local_mesh(b));
            break;
        }
    }

    Dyadic dmax = Dyadic::from_int(0);
    for (const auto& [b, lm] : affected)
        for (const auto& c : lm.cells) dmax = max(dmax, c.diam_sq());

    std::vector<Segment> segs;
    for (const auto& [b, lm] : affected)
        for (const auto& c : lm.cells) {
            if (c.diam_sq() != dmax) continue;
            Segment s = halve_box(c, v);
            // stretch to the owning support so the new line traverses a full
            // member support and inherits its crossing count
            const Box sup = b->support();
            s.span = s.dir == Dir::horizontal ? sup.x : sup.y;
            if (!segs.empty() && segs.front().dir != s.dir)
                throw std::logic_error("largest cells disagree on the split direction");
            segs.push_back(s);
        }
    return mesh.with_segments(segs);
}

LRMesh eg_grader(const LRMesh& mesh_in, Variant v, GraderPolicy policy) {
    LRMesh mesh = mesh_in;
    const Box domain = mesh.domain();

    int deepest = 0;
    for (const auto& b : mesh.boxes()) deepest = std::max(deepest, box_level_and_shape(domain, b).level);

    // small to large; halvings while a class is processed only ever create
    // boxes of the classes still ahead
    for (int level = deepest; level >= 0; --level) {
        std::vector<Box> members;
        for (const auto& b : mesh.boxes())
            if (box_level_and_shape(domain, b).level == level) members.push_back(b);

        for (const Box& beta : members) {
            const Dir axis = shadow_direction(box_level_and_shape(domain, beta).form, v);
            const int pk = mesh.degree(other(axis));
            const Dyadic c0 = axis == Dir::horizontal ? beta.center_x() : beta.center_y();

            for (;;) {
                std::vector<Box> oversized;
                for (const auto& g : generalized_shadow(mesh, {beta}, axis, pk))
                    if (box_level_and_shape(domain, g).level <= level - 2) oversized.push_back(g);
                if (oversized.empty()) break;

                if (policy == GraderPolicy::halve_closest_first) {
                    auto closer = [&](const Box& a, const Box& b) {
                        const Dyadic da = abs((axis == Dir::horizontal ? a.center_x() : a.center_y()) - c0);
                        const Dyadic db = abs((axis == Dir::horizontal ? b.center_x() : b.center_y()) - c0);
                        if (da != db) return da < db;
                        const Dyadic ax = a.center_x() - beta.center_x(), ay = a.center_y() - beta.center_y();
                        const Dyadic bx = b.center_x() - beta.center_x(), by = b.center_y() - beta.center_y();
                        const Dyadic ea = ax * ax + ay * ay, eb = bx * bx + by * by;
                        if (ea != eb) return ea < eb;
                        return a < b;
                    };
                    oversized = {*std::min_element(oversized.begin(), oversized.end(), closer)};
                }
                for (const auto& g : oversized) {
                    const Segment s = halve_box(g, v);
                    mesh = mesh.insert_segment(s.dir, s.fixed, s.span);
                }
            }
        }
    }
    return mesh;
}

LRSet eg_iterate(const LRSet& set_in, const std::vector<Box>& omega_in, Variant v, GraderPolicy policy) {
    LRSet set = set_in;
    std::vector<Box> omega = sorted_region(omega_in);
    if (omega.empty()) throw std::invalid_argument("empty refinement region");
    require_region_of(set.mesh(), omega);

    int passes = 0;
    do {
        const LRMesh graded = eg_grader(refining_step(set, omega, v), v, policy);
        set = set.updated(std::make_shared<const LRMesh>(graded));

        std::vector<Box> rest;
        for (const auto& b : omega)
            if (set.mesh().is_box(b)) rest.push_back(b);
        omega.swap(rest);

        if (++passes > 200) throw std::logic_error("refinement failed to consume the marked region");
    } while (!omega.empty());
    return set;
}

}  // namespace lrg
