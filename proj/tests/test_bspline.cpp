#include "lrgrade/bspline.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

using namespace lrg;

namespace {

Dyadic dy(std::int64_t n, int e = 0) { return Dyadic(n, e); }

std::vector<Dyadic> dv(std::initializer_list<double> xs) {
    std::vector<Dyadic> v;
    for (double x : xs) v.push_back(Dyadic::from_double(x));
    return v;
}

double eval1(std::initializer_list<double> knots, double x, bool from_left = false) {
    std::vector<double> t(knots);
    return bspline_eval_1d<double>(t, x, from_left);
}

// Independent reference: B(x) = (t_n - t_0) [t_0,...,t_n](. - x)_+^p via the
// divided-difference table. Distinct knots only; sample away from knots.
double dd_bspline(const std::vector<double>& t, double x) {
    const int n = static_cast<int>(t.size());
    const int p = n - 2;
    std::vector<double> f(t.size());
    for (int i = 0; i < n; ++i) f[i] = t[i] > x ? std::pow(t[i] - x, p) : 0.0;
    for (int r = 1; r < n; ++r)
        for (int i = 0; i + r < n; ++i) f[i] = (f[i + 1] - f[i]) / (t[i + r] - t[i]);
    return (t[n - 1] - t[0]) * f[0];
}

}  // namespace

TEST_CASE("univariate values, frozen") {
    // uniform quadratic on (0,1,2,3)
    CHECK(eval1({0, 1, 2, 3}, 1.5) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(eval1({0, 1, 2, 3}, 0.5) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(eval1({0, 1, 2, 3}, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eval1({0, 1, 2, 3}, 0.0) == 0.0);
    CHECK(eval1({0, 1, 2, 3}, 3.0) == 0.0);
    CHECK(eval1({0, 1, 2, 3}, -1.0) == 0.0);
    CHECK(eval1({0, 1, 2, 3}, 4.0) == 0.0);

    CHECK(eval1({0, 0, 0, 1}, 0.0) == 1.0);
    CHECK(eval1({0, 0, 0, 1}, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(eval1({0, 0, 0, 1}, 1.0) == 0.0);

    CHECK(eval1({0, 0, 1, 2}, 0.5) == doctest::Approx(0.625).epsilon(1e-14));
    CHECK(eval1({0, 0, 1, 2}, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eval1({0, 1, 1, 2}, 1.0) == 1.0);

    // value at the last knot is the right limit 0; from_left flips that
    CHECK(eval1({0, 1}, 1.0) == 0.0);
    CHECK(eval1({0, 1}, 1.0, true) == 1.0);
    CHECK(eval1({0, 1, 1, 1}, 1.0) == 0.0);
    CHECK(eval1({0, 1, 1, 1}, 1.0, true) == 1.0);
    CHECK(eval1({0, 1, 1, 2}, 1.0, true) == 1.0);
    CHECK(eval1({0, 0, 0, 1}, 0.0, true) == 0.0);
    CHECK(eval1({0, 1, 2, 3}, 1.5, true) == doctest::Approx(0.75).epsilon(1e-14));

    // degree 0 and 1
    CHECK(eval1({0, 1}, 0.5) == 1.0);
    CHECK(eval1({0, 1}, 0.0) == 1.0);
    CHECK(eval1({0, 2}, 1.99) == 1.0);
    CHECK(eval1({0, 1, 2}, 1.0) == 1.0);
    CHECK(eval1({0, 1, 2}, 0.25) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("univariate values match divided differences") {
    const std::vector<std::vector<double>> vectors = {
        {0, 1},
        {0, 1, 2},
        {0, 1, 3},
        {0, 1, 2, 3},
        {0, 1, 3, 7},
        {0, 0.5, 0.75, 1},
        {0, 1, 2, 3, 4},
        {-2, -1, 3, 5, 8},
        {0, 1, 2, 3, 4, 5},
        {0, 0.25, 0.5, 2, 3.5, 4},
    };
    for (const auto& t : vectors) {
        const double lo = t.front(), hi = t.back();
        for (int k = -3; k <= 99; ++k) {
            const double x = lo + (hi - lo) * (k + 0.51236) / 97.0;
            bool at_knot = false;
            for (double v : t) at_knot |= std::abs(x - v) < 1e-9;
            if (at_knot) continue;
            CHECK(bspline_eval_1d<double>(t, x) == doctest::Approx(dd_bspline(t, x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("bspline struct basics") {
    const LRBSpline b{dv({0, 1, 2, 3}), dv({0, 0, 1, 2}), 1.0};
    CHECK(b.degree(Dir::vertical) == 2);
    CHECK(b.degree(Dir::horizontal) == 2);
    CHECK(b.support() == Box{{dy(0), dy(3)}, {dy(0), dy(2)}});
    CHECK(b.knot_mult(Dir::vertical, dy(1)) == 1);
    CHECK(b.knot_mult(Dir::horizontal, dy(0)) == 2);
    CHECK(b.knot_mult(Dir::horizontal, dy(3)) == 0);
    CHECK(b.evaluate(1.5, 0.5) == doctest::Approx(0.75 * 0.625).epsilon(1e-14));
    CHECK(b.evaluate(3.5, 0.5) == 0.0);

    const LRBSpline c{dv({0, 1, 2, 3}), dv({0, 1, 1, 2}), 7.0};
    CHECK(knot_order(b, c));       // ky (0,0,1,2) < (0,1,1,2)
    CHECK_FALSE(knot_order(c, b));
    CHECK_FALSE(same_knots(b, c));
    CHECK(same_knots(b, LRBSpline{b.kx, b.ky, 0.25}));
}

TEST_CASE("knot insertion, frozen") {
    SUBCASE("interior insert on a uniform quadratic") {
        const LRBSpline b{dv({0, 1, 2, 3}), dv({0, 0, 0, 1}), 2.0};
        const KnotInsertion ki = knot_insert(b, Dir::vertical, dy(3, 1));
        CHECK(ki.alpha_low == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(ki.alpha_high == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(ki.low.kx == dv({0, 1, 1.5, 2}));
        CHECK(ki.high.kx == dv({1, 1.5, 2, 3}));
        CHECK(ki.low.ky == b.ky);
        CHECK(ki.high.ky == b.ky);
        CHECK(ki.low.weight == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(ki.high.weight == doctest::Approx(1.5).epsilon(1e-15));
    }
    SUBCASE("insert next to a full-multiplicity end") {
        const LRBSpline b{dv({0, 0, 0, 1}), dv({0, 1, 2, 3}), 1.0};
        const KnotInsertion ki = knot_insert(b, Dir::vertical, dy(1, 1));
        CHECK(ki.alpha_low == 1.0);
        CHECK(ki.alpha_high == 0.5);
        CHECK(ki.low.kx == dv({0, 0, 0, 0.5}));
        CHECK(ki.high.kx == dv({0, 0, 0.5, 1}));
    }
    SUBCASE("horizontal direction extends ky") {
        const LRBSpline b{dv({0, 0, 0, 1}), dv({0, 1, 2, 3}), 1.0};
        const KnotInsertion ki = knot_insert(b, Dir::horizontal, dy(1));  // existing value: mult grows
        CHECK(ki.low.ky == dv({0, 1, 1, 2}));
        CHECK(ki.high.ky == dv({1, 1, 2, 3}));
        CHECK(ki.low.kx == b.kx);
    }
    SUBCASE("value outside the open support rejected") {
        const LRBSpline b{dv({0, 1, 2, 3}), dv({0, 1, 2, 3}), 1.0};
        CHECK_THROWS_AS(knot_insert(b, Dir::vertical, dy(0)), std::invalid_argument);
        CHECK_THROWS_AS(knot_insert(b, Dir::vertical, dy(3)), std::invalid_argument);
        CHECK_THROWS_AS(knot_insert(b, Dir::vertical, dy(4)), std::invalid_argument);
    }
}

TEST_CASE("knot insertion reproduces the parent pointwise") {
    const std::vector<LRBSpline> parents = {
        {dv({0, 1, 2, 3}), dv({0, 0, 1, 2}), 1.0},
        {dv({0, 0, 0, 1}), dv({0, 1, 2, 3}), 1.0},
        {dv({0, 1, 2, 3, 4}), dv({0, 0, 1, 2}), 1.0},
        {dv({0, 2}), dv({0, 1}), 1.0},
    };
    const std::vector<Dyadic> values = {dy(1, 1), dy(3, 2), dy(1), dy(3, 1)};
    for (const auto& b : parents)
        for (const auto& v : values)
            for (Dir d : {Dir::vertical, Dir::horizontal}) {
                const auto& t = b.knots(d);
                if (!(t.front() < v && v < t.back())) continue;
                const KnotInsertion ki = knot_insert(b, d, v);
                for (int i = 0; i <= 20; ++i)
                    for (int j = 0; j <= 20; ++j) {
                        const double x = b.kx.front().to_double() +
                                         (b.kx.back() - b.kx.front()).to_double() * i / 20.0;
                        const double y = b.ky.front().to_double() +
                                         (b.ky.back() - b.ky.front()).to_double() * j / 20.0;
                        const double sum = ki.alpha_low * ki.low.evaluate(x, y) +
                                           ki.alpha_high * ki.high.evaluate(x, y);
                        CHECK(sum == doctest::Approx(b.evaluate(x, y)).epsilon(1e-12));
                    }
            }
}

TEST_CASE("local mesh of a bspline") {
    const LRBSpline b{dv({0, 0, 1, 2}), dv({0, 1, 1, 2}), 1.0};
    const LocalMesh lm = local_mesh(b);
    CHECK(lm.xs == dv({0, 1, 2}));
    CHECK(lm.ys == dv({0, 1, 2}));
    REQUIRE(lm.cells.size() == 4);
    CHECK(lm.cells[0] == Box{{dy(0), dy(1)}, {dy(0), dy(1)}});
    CHECK(lm.cells[3] == Box{{dy(1), dy(2)}, {dy(1), dy(2)}});
}

namespace {

MeshPtr share(LRMesh m) { return std::make_shared<const LRMesh>(std::move(m)); }

const Box unit01{{dy(0), dy(1)}, {dy(0), dy(1)}};
const Box dom5{{dy(0), dy(5)}, {dy(0), dy(5)}};

MeshPtr tensor5() { return share(LRMesh::open_tensor(dom5, 2, 2, dv({1, 2, 3, 4}), dv({1, 2, 3, 4}))); }

}  // namespace

TEST_CASE("support violation detection") {
    const MeshPtr m0 = tensor5();
    const LRBSpline focus{dv({1, 2, 3, 4}), dv({1, 2, 3, 4}), 1.0};
    CHECK(has_minimal_support(focus, *m0));

    // a partial line that stops short of traversing the support is invisible
    const MeshPtr m1 = share(m0->insert_segment(Dir::vertical, dy(5, 1), {dy(0), dy(3)}));
    CHECK(has_minimal_support(focus, *m1));

    // full traversal in x
    const MeshPtr m2 = share(m0->insert_segment(Dir::vertical, dy(5, 1), {dy(0), dy(5)}));
    const auto v2 = find_support_violation(focus, *m2);
    REQUIRE(v2.has_value());
    CHECK(v2->dir == Dir::vertical);
    CHECK(v2->value == dy(5, 1));

    // vertical candidates come before horizontal ones, ascending
    const MeshPtr m3 = share(m2->insert_segment(Dir::vertical, dy(3, 1), {dy(0), dy(5)})
                                 .insert_segment(Dir::horizontal, dy(5, 1), {dy(0), dy(5)}));
    const auto v3 = find_support_violation(focus, *m3);
    REQUIRE(v3.has_value());
    CHECK(v3->dir == Dir::vertical);
    CHECK(v3->value == dy(3, 1));

    // an existing knot shields the line up to its multiplicity
    const LRBSpline carrying{dv({1, 2, 2.5, 3}), dv({1, 2, 3, 4}), 1.0};
    CHECK(has_minimal_support(carrying, *m2));
}

TEST_CASE("initial collection on an open tensor mesh") {
    const MeshPtr m = share(LRMesh::open_tensor(unit01, 2, 2, dv({0.5}), dv({0.5})));
    const LRSet s = LRSet::initial(m);
    CHECK(s.size() == 16);
    for (const auto& b : s.members()) {
        CHECK(b.weight == 1.0);
        CHECK(has_minimal_support(b, s.mesh()));
    }
    for (double x : {0.0, 0.125, 0.5, 0.75, 1.0})
        for (double y : {0.0, 0.25, 0.625, 1.0})
            CHECK(s.evaluate(x, y) == doctest::Approx(1.0).epsilon(1e-12));

    const MeshPtr notopen = share(LRMesh::from_lines(unit01, 2, 2,
                                                     {{Dir::vertical, dy(0), unit01.y, 1},
                                                      {Dir::vertical, dy(1), unit01.y, 1},
                                                      {Dir::horizontal, dy(0), unit01.x, 1},
                                                      {Dir::horizontal, dy(1), unit01.x, 1}}));
    CHECK_THROWS_AS(LRSet::initial(notopen), std::invalid_argument);
}

TEST_CASE("update cascade after two crossing insertions") {
    const MeshPtr m0 = tensor5();
    const LRSet s0 = LRSet::initial(m0);
    CHECK(s0.size() == 49);

    // partial vertical line: nine supports see full traversal, none keeps 5/2 as a knot
    const MeshPtr m1 = share(m0->insert_segment(Dir::vertical, dy(5, 1), {dy(0), dy(3)}));
    const LRSet s1 = s0.updated(m1);
    CHECK(s1.size() == 52);
    for (const auto& b : s1.members()) {
        CHECK(has_minimal_support(b, *m1));
        CHECK(b.weight == 1.0);
    }

    // crossing horizontal line triggers a second-generation x split
    const MeshPtr m2 = share(m1->insert_segment(Dir::horizontal, dy(5, 1), {dy(1), dy(4)}));
    const LRSet s2 = s1.updated(m2);
    for (const auto& b : s2.members()) CHECK(has_minimal_support(b, *m2));

    auto contains = [&](std::initializer_list<double> kx, std::initializer_list<double> ky) {
        const auto vx = dv(kx), vy = dv(ky);
        for (const auto& b : s2.members())
            if (b.kx == vx && b.ky == vy) return true;
        return false;
    };
    CHECK(contains({1, 2, 2.5, 3}, {1, 2, 2.5, 3}));
    CHECK(contains({2, 2.5, 3, 4}, {1, 2, 2.5, 3}));
    CHECK(contains({1, 2, 3, 4}, {2, 2.5, 3, 4}));
    CHECK_FALSE(contains({1, 2, 3, 4}, {1, 2, 3, 4}));
    CHECK_FALSE(contains({1, 2, 3, 4}, {1, 2, 2.5, 3}));

    // partition of unity carries through the whole cascade
    for (double x : {0.0, 0.7, 2.5, 3.3, 5.0})
        for (double y : {0.0, 1.1, 2.5, 4.9, 5.0})
            CHECK(s2.evaluate(x, y) == doctest::Approx(1.0).epsilon(1e-12));

    // the result only depends on the final mesh, not the update path
    const LRSet direct = s0.updated(m2);
    REQUIRE(direct.size() == s2.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(same_knots(direct.members()[i], s2.members()[i]));
        CHECK(direct.members()[i].weight == doctest::Approx(s2.members()[i].weight).epsilon(1e-14));
    }

    CHECK_THROWS_AS(s1.updated(m0), std::invalid_argument);
}
