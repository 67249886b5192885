#include "lrgrade/eg.hpp"

#include "lrgrade/shadow.hpp"

#include <doctest.h>

#include <memory>
#include <stdexcept>

using namespace lrg;

namespace {

Dyadic dy(long long n, int e = 0) { return Dyadic(n, e); }

const Box unit{{dy(0), dy(1)}, {dy(0), dy(1)}};

Box mk(long long xl, long long xh, long long yl, long long yh, int e) {
    return {{dy(xl, e), dy(xh, e)}, {dy(yl, e), dy(yh, e)}};
}

Box box_ll(const LRMesh& m, const Dyadic& x, const Dyadic& y) {
    for (const auto& b : m.boxes())
        if (b.x.lo == x && b.y.lo == y) return b;
    throw std::runtime_error("no box at " + to_decimal(x) + "," + to_decimal(y));
}

bool well_graded(const LRMesh& m, Variant v) {
    for (const auto& beta : m.boxes()) {
        const auto cls = box_level_and_shape(m.domain(), beta);
        const Dir axis = shadow_direction(cls.form, v);
        for (const auto& g : generalized_shadow(m, {beta}, axis, m.degree(other(axis))))
            if (box_level_and_shape(m.domain(), g).level <= cls.level - 2) return false;
    }
    return true;
}

int supports_over(const LRSet& set, const Box& b) {
    int n = 0;
    for (const auto& m : set.members())
        if (m.support().contains(b)) ++n;
    return n;
}

}  // namespace

TEST_CASE("box classes") {
    auto c = box_level_and_shape(unit, unit);
    CHECK(c.level == 0);
    CHECK(c.form == BoxForm::square);

    c = box_level_and_shape(unit, mk(0, 2, 0, 1, 1));
    CHECK(c.level == 1);
    CHECK(c.form == BoxForm::wide);

    c = box_level_and_shape(unit, mk(0, 1, 0, 2, 1));
    CHECK(c.level == 1);
    CHECK(c.form == BoxForm::tall);

    c = box_level_and_shape(unit, mk(0, 1, 0, 1, 1));
    CHECK(c.level == 2);
    CHECK(c.form == BoxForm::square);

    c = box_level_and_shape(unit, mk(1, 2, 2, 4, 2));
    CHECK(c.level == 3);
    CHECK(c.form == BoxForm::tall);

    c = box_level_and_shape(unit, mk(0, 1, 0, 1, 2));
    CHECK(c.level == 4);
    CHECK(c.form == BoxForm::square);

    const Box dom3{{dy(0), dy(3)}, {dy(0), dy(3)}};
    c = box_level_and_shape(dom3, Box{{dy(0), dy(3, 1)}, {dy(0), dy(3, 2)}});
    CHECK(c.level == 3);
    CHECK(c.form == BoxForm::wide);

    CHECK_THROWS_AS(box_level_and_shape(unit, Box{{dy(0), dy(1)}, {dy(0), dy(1, 2)}}), std::invalid_argument);
    CHECK_THROWS_AS(box_level_and_shape(unit, Box{{dy(0), dy(3, 2)}, {dy(0), dy(3, 2)}}), std::invalid_argument);
}

TEST_CASE("parent diameters") {
    const Box half_square = mk(0, 1, 0, 1, 1);
    const Box wide = mk(0, 2, 0, 1, 1);
    CHECK(parent_diameter_sq(half_square) == dy(5, 2));
    CHECK(parent_diameter_sq(half_square) == wide.diam_sq());
    CHECK(parent_diameter_sq(wide) == dy(2));
    CHECK(parent_diameter_sq(wide) == unit.diam_sq());
    // two halvings double both sides
    CHECK(parent_diameter_sq(wide) == dy(4) * half_square.diam_sq());

    // exact scaling ratios: 5/2 for squares, 8/5 for rectangles
    for (int e = 0; e < 6; ++e) {
        const Box sq = mk(1, 2, 3, 4, e);
        CHECK(dy(2) * parent_diameter_sq(sq) == dy(5) * sq.diam_sq());
        const Box tall = mk(1, 2, 2, 4, e);
        CHECK(dy(5) * parent_diameter_sq(tall) == dy(8) * tall.diam_sq());
    }
}

TEST_CASE("split segments") {
    auto s = halve_box(unit, Variant::horizontal_major);
    CHECK(s.dir == Dir::horizontal);
    CHECK(s.fixed == dy(1, 1));
    CHECK(s.span == Interval{dy(0), dy(1)});

    s = halve_box(mk(0, 2, 0, 1, 1), Variant::horizontal_major);
    CHECK(s.dir == Dir::vertical);
    CHECK(s.fixed == dy(1, 1));
    CHECK(s.span == Interval{dy(0), dy(1, 1)});

    s = halve_box(unit, Variant::vertical_major);
    CHECK(s.dir == Dir::vertical);
    CHECK(s.fixed == dy(1, 1));

    // rectangles are cut across the long side under either variant
    for (Variant v : {Variant::horizontal_major, Variant::vertical_major}) {
        s = halve_box(mk(0, 1, 0, 2, 1), v);
        CHECK(s.dir == Dir::horizontal);
        CHECK(s.fixed == dy(1, 1));
        CHECK(s.span == Interval{dy(0), dy(1, 1)});
        s = halve_box(mk(0, 2, 0, 1, 1), v);
        CHECK(s.dir == Dir::vertical);
    }
}

TEST_CASE("shadow directions") {
    // always the box's own cut direction, so the sweep patrols the axis the
    // next halving would extend lines along
    for (Variant v : {Variant::horizontal_major, Variant::vertical_major}) {
        CHECK(shadow_direction(BoxForm::wide, v) == halve_box(mk(0, 2, 0, 1, 1), v).dir);
        CHECK(shadow_direction(BoxForm::tall, v) == halve_box(mk(0, 1, 0, 2, 1), v).dir);
        CHECK(shadow_direction(BoxForm::square, v) == halve_box(unit, v).dir);
    }
    CHECK(shadow_direction(BoxForm::wide, Variant::horizontal_major) == Dir::vertical);
    CHECK(shadow_direction(BoxForm::tall, Variant::horizontal_major) == Dir::horizontal);
    CHECK(shadow_direction(BoxForm::square, Variant::horizontal_major) == Dir::horizontal);
    CHECK(shadow_direction(BoxForm::square, Variant::vertical_major) == Dir::vertical);
}

TEST_CASE("refining a single-cell start") {
    const auto mesh = std::make_shared<const LRMesh>(LRMesh::open_tensor(unit, 2, 2));
    const LRSet set = LRSet::initial(mesh);

    SUBCASE("horizontal-major halves the square with one midline") {
        const LRMesh r = refining_step(set, {unit}, Variant::horizontal_major);
        CHECK(r.boxes().size() == 2);
        CHECK(r.line_coords(Dir::horizontal) == std::vector<Dyadic>{dy(0), dy(1, 1), dy(1)});
        CHECK(r.line_coords(Dir::vertical) == std::vector<Dyadic>{dy(0), dy(1)});
    }
    SUBCASE("vertical-major mirrors it") {
        const LRMesh r = refining_step(set, {unit}, Variant::vertical_major);
        CHECK(r.boxes().size() == 2);
        CHECK(r.line_coords(Dir::vertical) == std::vector<Dyadic>{dy(0), dy(1, 1), dy(1)});
    }
    SUBCASE("bad regions are rejected") {
        CHECK_THROWS_AS(refining_step(set, {}, Variant::horizontal_major), std::invalid_argument);
        CHECK_THROWS_AS(refining_step(set, {mk(0, 1, 0, 1, 1)}, Variant::horizontal_major), std::invalid_argument);
    }
}

TEST_CASE("refinement spreads across supports") {
    const auto mesh =
        std::make_shared<const LRMesh>(LRMesh::open_tensor(unit, 2, 2, {dy(1, 1)}, {dy(1, 1)}));
    const LRSet set = LRSet::initial(mesh);
    REQUIRE(set.size() == 16);

    const LRMesh r = refining_step(set, {box_ll(*mesh, dy(0), dy(0))}, Variant::horizontal_major);
    CHECK(r.boxes().size() == 8);
    CHECK(r.line_coords(Dir::horizontal) == std::vector<Dyadic>{dy(0), dy(1, 2), dy(1, 1), dy(3, 2), dy(1)});
    CHECK(r.line_coords(Dir::vertical) == std::vector<Dyadic>{dy(0), dy(1, 1), dy(1)});

    // already graded: every box sits at the same level
    CHECK(eg_grader(r, Variant::horizontal_major) == r);

    const LRSet updated = set.updated(std::make_shared<const LRMesh>(r));
    CHECK(updated.size() == 24);
    for (const auto& m : updated.members()) CHECK(m.weight == 1.0);
    for (const auto& b : updated.mesh().boxes()) CHECK(supports_over(updated, b) == 9);
}

TEST_CASE("grader repairs a lopsided mesh") {
    const LRMesh m = LRMesh::open_tensor(unit, 1, 1)
                         .insert_segment(Dir::horizontal, dy(1, 1), {dy(0), dy(1)})
                         .insert_segment(Dir::vertical, dy(1, 1), {dy(0), dy(1, 1)})
                         .insert_segment(Dir::horizontal, dy(1, 2), {dy(0), dy(1, 1)})
                         .insert_segment(Dir::vertical, dy(1, 2), {dy(0), dy(1, 2)});
    REQUIRE(m.boxes().size() == 5);
    REQUIRE(!well_graded(m, Variant::horizontal_major));

    // derived by stepping the grader by hand: the finest square sweeps
    // horizontally and halves the half-size square on its right (two wides),
    // then the wide above it sweeps vertically and halves the top slab (two
    // squares); both inserted midlines merge with existing partial lines
    const LRMesh g = eg_grader(m, Variant::horizontal_major);
    const std::vector<Meshline> want_lines{
        {Dir::vertical, dy(0), {dy(0), dy(1)}, 2},
        {Dir::vertical, dy(1, 2), {dy(0), dy(1, 2)}, 1},
        {Dir::vertical, dy(1, 1), {dy(0), dy(1)}, 1},
        {Dir::vertical, dy(1), {dy(0), dy(1)}, 2},
        {Dir::horizontal, dy(0), {dy(0), dy(1)}, 2},
        {Dir::horizontal, dy(1, 2), {dy(0), dy(1)}, 1},
        {Dir::horizontal, dy(1, 1), {dy(0), dy(1)}, 1},
        {Dir::horizontal, dy(1), {dy(0), dy(1)}, 2},
    };
    CHECK(g == LRMesh::from_lines(unit, 1, 1, want_lines));
    CHECK(g.boxes().size() == 7);
    CHECK(g.refines(m));
    CHECK(well_graded(g, Variant::horizontal_major));
    CHECK(eg_grader(g, Variant::horizontal_major) == g);
}

TEST_CASE("iteration consumes the region") {
    const auto mesh =
        std::make_shared<const LRMesh>(LRMesh::open_tensor(unit, 2, 2, {dy(1, 1)}, {dy(1, 1)}));
    LRSet set = LRSet::initial(mesh);
    const Box target = box_ll(*mesh, dy(0), dy(0));

    set = eg_iterate(set, {target}, Variant::horizontal_major);
    CHECK(!set.mesh().is_box(target));
    CHECK(set.mesh().boxes().size() == 8);
    CHECK(set.size() == 24);
    CHECK(well_graded(set.mesh(), Variant::horizontal_major));

    // determinism: the same drive from scratch lands on the identical mesh
    const LRSet again = eg_iterate(LRSet::initial(mesh), {target}, Variant::horizontal_major);
    CHECK(again.mesh() == set.mesh());
    CHECK(again.size() == set.size());
}

TEST_CASE("deep corner refinement stays graded") {
    for (GraderPolicy policy : {GraderPolicy::halve_closest_first, GraderPolicy::halve_all_then_reshadow}) {
        const auto start =
            std::make_shared<const LRMesh>(LRMesh::open_tensor(unit, 1, 1, {dy(1, 1)}, {dy(1, 1)}));
        LRSet set = LRSet::initial(start);
        bool grader_fired = false;

        for (int round = 0; round < 6; ++round) {
            const Box corner = box_ll(set.mesh(), dy(0), dy(0));
            const LRMesh refined = refining_step(set, {corner}, Variant::horizontal_major);
            const LRMesh graded = eg_grader(refined, Variant::horizontal_major, policy);
            CHECK(graded.refines(refined));
            if (!(graded == refined)) grader_fired = true;
            CHECK(well_graded(graded, Variant::horizontal_major));
            set = set.updated(std::make_shared<const LRMesh>(graded));
            for (double px : {0.07, 0.31, 0.55, 0.93})
                for (double py : {0.11, 0.48, 0.86})
                    CHECK(set.evaluate(px, py) == doctest::Approx(1.0).epsilon(1e-12));
            for (const auto& b : set.mesh().boxes()) CHECK(supports_over(set, b) == 4);
        }
        CHECK(grader_fired);
    }
}
