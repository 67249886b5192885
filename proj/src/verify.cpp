#include "lrgrade/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace lrg {

namespace {

using I128 = __int128;

I128 abs128(I128 v) { return v < 0 ? -v : v; }

I128 gcd128(I128 a, I128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

I128 mul_checked(I128 a, I128 b) {
    I128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational arithmetic out of range");
    return r;
}

I128 add_checked(I128 a, I128 b) {
    I128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational arithmetic out of range");
    return r;
}

/// Exact rational, canonical: den > 0, reduced. Overflowing operations
/// throw instead of wrapping, so an exact computation either finishes
/// correctly or reports that it left the representable range.
struct Frac {
    I128 num = 0, den = 1;

    Frac() = default;
    Frac(int v) : num(v) {}
    Frac(I128 n, I128 d) : num(n), den(d) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        if (num == 0) {
            den = 1;
        } else {
            const I128 g = gcd128(num, den);
            num /= g;
            den /= g;
        }
    }

    friend Frac operator+(const Frac& a, const Frac& b) {
        return Frac(add_checked(mul_checked(a.num, b.den), mul_checked(b.num, a.den)), mul_checked(a.den, b.den));
    }
    friend Frac operator-(const Frac& a, const Frac& b) {
        return Frac(add_checked(mul_checked(a.num, b.den), -mul_checked(b.num, a.den)), mul_checked(a.den, b.den));
    }
    friend Frac operator*(const Frac& a, const Frac& b) { return Frac(mul_checked(a.num, b.num), mul_checked(a.den, b.den)); }
    friend Frac operator/(const Frac& a, const Frac& b) { return Frac(mul_checked(a.num, b.den), mul_checked(a.den, b.num)); }

    friend bool operator==(const Frac& a, const Frac& b) { return a.num == b.num && a.den == b.den; }
    friend std::strong_ordering operator<=>(const Frac& a, const Frac& b) {
        return mul_checked(a.num, b.den) <=> mul_checked(b.num, a.den);
    }
};

Frac frac_of(const Dyadic& d) { return Frac(d.num, I128(1) << d.exp); }

/// `count` distinct dyadic nodes strictly inside the interval, at the
/// smallest power-of-two subdivision that fits them.
std::vector<Dyadic> interior_nodes(const Interval& iv, int count) {
    int k = 1;
    while ((1 << k) <= count) ++k;
    std::vector<Dyadic> out;
    out.reserve(count);
    for (int i = 1; i <= count; ++i) out.push_back(iv.lo + iv.length() * Dyadic(i, k));
    return out;
}

int float_rank(std::vector<std::vector<double>> a, double rel_tol) {
    const int rows = static_cast<int>(a.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(a.front().size());
    double scale = 0.0;
    for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0;
    const double cutoff = rel_tol * scale;

    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = rank;
        for (int r = rank + 1; r < rows; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) <= cutoff) continue;
        std::swap(a[rank], a[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            const double f = a[r][col] / a[rank][col];
            for (int c = col; c < cols; ++c) a[r][c] -= f * a[rank][c];
        }
        ++rank;
    }
    return rank;
}

int exact_rank(std::vector<std::vector<Frac>> a) {
    const int rows = static_cast<int>(a.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(a.front().size());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][col].num != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            if (a[r][col].num == 0) continue;
            const Frac f = a[r][col] / a[rank][col];
            for (int c = col; c < cols; ++c) a[r][c] = a[r][c] - f * a[rank][c];
        }
        ++rank;
    }
    return rank;
}

/// Values of the member's 1D factor at the given nodes, computed in T.
template <class T>
std::vector<T> factor_values(const std::vector<Dyadic>& knots, const std::vector<Dyadic>& nodes) {
    std::vector<T> t;
    t.reserve(knots.size());
    for (const Dyadic& k : knots) {
        if constexpr (std::is_same_v<T, double>)
            t.push_back(k.to_double());
        else
            t.push_back(frac_of(k));
    }
    std::vector<T> out;
    out.reserve(nodes.size());
    for (const Dyadic& n : nodes) {
        T x;
        if constexpr (std::is_same_v<T, double>)
            x = n.to_double();
        else
            x = frac_of(n);
        out.push_back(bspline_eval_1d<T>(t, x));
    }
    return out;
}

template <class T>
std::vector<std::vector<T>> restriction_matrix(const std::vector<const LRBSpline*>& covering,
                                               const std::vector<Dyadic>& xs, const std::vector<Dyadic>& ys) {
    std::vector<std::vector<T>> a;
    a.reserve(covering.size());
    for (const LRBSpline* b : covering) {
        const auto vx = factor_values<T>(b->kx, xs);
        const auto vy = factor_values<T>(b->ky, ys);
        std::vector<T> row;
        row.reserve(xs.size() * ys.size());
        for (const T& fx : vx)
            for (const T& fy : vy) row.push_back(fx * fy);
        a.push_back(std::move(row));
    }
    return a;
}

/// Support sides shared by an outer/inner pair whose supports nest: same
/// side, same coordinate. The span reported is the inner side's extent.
std::vector<SharedBoundary> shared_sides(const LRBSpline& outer, const LRBSpline& inner) {
    std::vector<SharedBoundary> out;
    const Interval ix{inner.kx.front(), inner.kx.back()}, iy{inner.ky.front(), inner.ky.back()};
    const auto side = [&](Dir d, const Dyadic& at_outer, const Dyadic& at_inner, const Interval& span) {
        if (at_outer != at_inner) return;
        out.push_back({d, at_inner, span, outer.knot_mult(d, at_inner), inner.knot_mult(d, at_inner)});
    };
    side(Dir::vertical, outer.kx.front(), inner.kx.front(), iy);
    side(Dir::vertical, outer.kx.back(), inner.kx.back(), iy);
    side(Dir::horizontal, outer.ky.front(), inner.ky.front(), ix);
    side(Dir::horizontal, outer.ky.back(), inner.ky.back(), ix);
    return out;
}

bool mesh_covers_some_of(const LRMesh& mesh, const SharedBoundary& s) {
    for (const Meshline* l : mesh.lines_at(s.dir, s.at))
        if (l->span.overlaps_open(s.span)) return true;
    return false;
}

nlohmann::json box_json(const Box& b) {
    return nlohmann::json::array({to_decimal(b.x.lo), to_decimal(b.x.hi), to_decimal(b.y.lo), to_decimal(b.y.hi)});
}

nlohmann::json knots_json(const std::vector<Dyadic>& ks) {
    auto arr = nlohmann::json::array();
    for (const Dyadic& k : ks) arr.push_back(to_decimal(k));
    return arr;
}

nlohmann::json segment_json(const Segment& s) {
    return {{"dir", name(s.dir)}, {"at", to_decimal(s.fixed)}, {"span", {to_decimal(s.span.lo), to_decimal(s.span.hi)}}};
}

}  // namespace

std::vector<NestedPair> find_nested_pairs(const LRSet& set) {
    const auto& ms = set.members();
    const LRMesh& mesh = set.mesh();
    std::vector<NestedPair> out;
    for (std::size_t o = 0; o < ms.size(); ++o) {
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (i == o || !ms[o].support().contains(ms[i].support())) continue;
            bool nested = true;
            std::vector<SharedBoundary> witness;
            for (const SharedBoundary& s : shared_sides(ms[o], ms[i])) {
                if (!mesh_covers_some_of(mesh, s)) continue;  // the clause only ranges over mesh-covered boundary
                if (s.mult_inner > s.mult_outer) {
                    nested = false;
                    break;
                }
                witness.push_back(s);
            }
            if (nested) out.push_back({o, i, std::move(witness)});
        }
    }
    return out;
}

std::map<Box, int> box_support_counts(const LRSet& set) {
    std::map<Box, int> out;
    for (const Box& b : set.mesh().boxes()) {
        int n = 0;
        for (const auto& m : set.members())
            if (m.support().contains(b)) ++n;
        out.emplace(b, n);
    }
    return out;
}

double partition_of_unity_deviation(const LRSet& set, const std::vector<std::pair<double, double>>& points) {
    double dev = 0.0;
    for (const auto& [x, y] : points) dev = std::max(dev, std::abs(1.0 - set.evaluate(x, y)));
    return dev;
}

bool local_independence_bruteforce(const LRSet& set, const Box& box) {
    const LRMesh& mesh = set.mesh();
    if (!mesh.is_box(box)) throw std::invalid_argument("local_independence_bruteforce: not a partition box: " + box.describe());

    std::vector<const LRBSpline*> covering;
    for (const auto& m : set.members())
        if (m.support().contains(box)) covering.push_back(&m);
    const int rows = static_cast<int>(covering.size());
    if (rows == 0) return true;

    const int p1 = mesh.degree_x(), p2 = mesh.degree_y();
    if (rows > (p1 + 1) * (p2 + 1)) return false;  // more pieces than the local polynomial dimension

    const auto xs = interior_nodes(box.x, p1 + 1);
    const auto ys = interior_nodes(box.y, p2 + 1);
    const bool independent = float_rank(restriction_matrix<double>(covering, xs, ys), 1e-9) == rows;
    if (p1 <= 2 && p2 <= 2) {
        try {
            if ((exact_rank(restriction_matrix<Frac>(covering, xs, ys)) == rows) != independent)
                throw std::logic_error("local independence: exact and floating rank disagree on " + box.describe());
        } catch (const std::overflow_error&) {
            // cross-check skipped when the exact numbers leave the representable range
        }
    }
    return independent;
}

GradingReport grading_report(const LRMesh& mesh) {
    GradingReport r;
    const auto& boxes = mesh.boxes();

    // exact rational maxima, kept as dyadic numerator/denominator pairs
    Dyadic shape_n = Dyadic::from_int(0), shape_d = Dyadic::from_int(1);
    Dyadic ratio_n = Dyadic::from_int(0), ratio_d = Dyadic::from_int(1);
    const Dyadic two = Dyadic::from_int(2), four = Dyadic::from_int(4), five = Dyadic::from_int(5);

    const auto aspect_key = [](const Dyadic& w, const Dyadic& h) {
        I128 a = w.num, b = h.num;
        const int shift = h.exp - w.exp;
        if (shift > 0)
            a <<= shift;
        else
            b <<= -shift;
        const I128 g = gcd128(a, b);
        return std::to_string(static_cast<long long>(a / g)) + ":" + std::to_string(static_cast<long long>(b / g));
    };

    for (const Box& b : boxes) {
        const Dyadic dsq = b.diam_sq(), area = b.area();
        if (dsq * shape_d > shape_n * area) {
            shape_n = dsq;
            shape_d = area;
        }
        if (two * dsq > five * area) {
            r.shape_regular = false;
            r.shape_violations.push_back(b);
        }
        ++r.aspect_histogram[aspect_key(b.width(), b.height())];
    }

    for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (std::size_t j = i + 1; j < boxes.size(); ++j) {
            const Box &a = boxes[i], &b = boxes[j];
            const bool adjacent = ((a.x.hi == b.x.lo || b.x.hi == a.x.lo) && a.y.overlaps_open(b.y)) ||
                                  ((a.y.hi == b.y.lo || b.y.hi == a.y.lo) && a.x.overlaps_open(b.x));
            if (!adjacent) continue;
            const Dyadic big = max(a.area(), b.area()), small = min(a.area(), b.area());
            if (big * ratio_d > ratio_n * small) {
                ratio_n = big;
                ratio_d = small;
            }
            if (big > four * small) {
                r.locally_quasi_uniform = false;
                r.neighbor_violations.emplace_back(a, b);
            }
        }
    }

    r.max_shape_ratio = std::sqrt(shape_n.to_double() / shape_d.to_double());
    r.max_neighbor_ratio = ratio_n.is_zero() ? 0.0 : std::sqrt(ratio_n.to_double() / ratio_d.to_double());
    return r;
}

std::vector<Segment> spanning_offenders(const LRMesh& mesh, int degree_x, int degree_y) {
    std::vector<Segment> out;
    for (const Dir d : {Dir::horizontal, Dir::vertical}) {
        // a horizontal insertion runs along x and must meet p1+2 verticals
        const int need = (d == Dir::horizontal ? degree_x : degree_y) + 2;
        const Interval& across = d == Dir::horizontal ? mesh.domain().y : mesh.domain().x;
        for (const Dyadic& c : mesh.line_coords(d)) {
            if (c == across.lo || c == across.hi) continue;  // boundary lines are not insertions
            const auto pieces = mesh.lines_at(d, c);
            Interval extent = pieces.front()->span;
            const auto flush = [&] {
                if (mesh.crossing_count(d, c, extent) < need) out.push_back({d, c, extent});
            };
            for (std::size_t i = 1; i < pieces.size(); ++i) {
                if (pieces[i]->span.lo <= extent.hi) {
                    extent.hi = max(extent.hi, pieces[i]->span.hi);
                } else {
                    flush();
                    extent = pieces[i]->span;
                }
            }
            flush();
        }
    }
    return out;
}

bool spanning_condition(const LRMesh& mesh, int degree_x, int degree_y) {
    return spanning_offenders(mesh, degree_x, degree_y).empty();
}

VerifyReport verify_set(const LRSet& set, const VerifyOptions& opt) {
    VerifyReport r;
    const LRMesh& mesh = set.mesh();

    r.nested_pairs = find_nested_pairs(set);
    r.nesting_pass = r.nested_pairs.empty();

    r.expected_coverage = (mesh.degree_x() + 1) * (mesh.degree_y() + 1);
    for (const auto& [box, n] : box_support_counts(set)) {
        ++r.coverage_histogram[n];
        if (n != r.expected_coverage) r.coverage_offenders.push_back(box);
    }
    r.coverage_pass = r.coverage_offenders.empty();

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> ux(mesh.domain().x.lo.to_double(), mesh.domain().x.hi.to_double());
    std::uniform_real_distribution<double> uy(mesh.domain().y.lo.to_double(), mesh.domain().y.hi.to_double());
    r.samples = opt.pou_samples;
    for (int s = 0; s < opt.pou_samples; ++s) {
        const double x = ux(rng), y = uy(rng);
        r.weighted_deviation = std::max(r.weighted_deviation, std::abs(1.0 - set.evaluate(x, y)));
        double bare = 0.0;
        for (const auto& m : set.members()) bare += m.evaluate(x, y);
        r.weight_free_deviation = std::max(r.weight_free_deviation, std::abs(1.0 - bare));
    }
    for (const auto& m : set.members()) r.max_weight_deviation = std::max(r.max_weight_deviation, std::abs(m.weight - 1.0));
    r.unity_pass = r.weighted_deviation <= opt.pou_tolerance && r.weight_free_deviation <= opt.pou_tolerance &&
                   r.max_weight_deviation <= opt.weight_tolerance;

    if (opt.check_local_independence) {
        for (const Box& b : mesh.boxes()) {
            ++r.boxes_checked;
            if (!local_independence_bruteforce(set, b)) r.dependent_boxes.push_back(b);
        }
    }
    r.independence_pass = r.dependent_boxes.empty();

    r.grading = grading_report(mesh);
    r.grading_pass = r.grading.shape_regular && r.grading.locally_quasi_uniform;

    r.spanning_gaps = spanning_offenders(mesh, mesh.degree_x(), mesh.degree_y());
    r.spanning_pass = r.spanning_gaps.empty();

    r.pass = r.nesting_pass && r.coverage_pass && r.unity_pass && r.independence_pass && r.grading_pass && r.spanning_pass;
    return r;
}

std::string report_json(const VerifyReport& r, const LRSet& set) {
    using nlohmann::json;
    const auto& ms = set.members();

    json pairs = json::array();
    for (const NestedPair& p : r.nested_pairs) {
        json shared = json::array();
        for (const SharedBoundary& s : p.witness)
            shared.push_back({{"dir", name(s.dir)},
                              {"at", to_decimal(s.at)},
                              {"span", {to_decimal(s.span.lo), to_decimal(s.span.hi)}},
                              {"mult_outer", s.mult_outer},
                              {"mult_inner", s.mult_inner}});
        pairs.push_back({{"outer", {{"kx", knots_json(ms[p.outer].kx)}, {"ky", knots_json(ms[p.outer].ky)}}},
                         {"inner", {{"kx", knots_json(ms[p.inner].kx)}, {"ky", knots_json(ms[p.inner].ky)}}},
                         {"shared", shared}});
    }

    json histogram;
    for (const auto& [count, boxes] : r.coverage_histogram) histogram[std::to_string(count)] = boxes;

    const auto boxes_json = [](const std::vector<Box>& v) {
        json arr = json::array();
        for (const Box& b : v) arr.push_back(box_json(b));
        return arr;
    };

    json aspects;
    for (const auto& [key, count] : r.grading.aspect_histogram) aspects[key] = count;
    json neighbor_violations = json::array();
    for (const auto& [a, b] : r.grading.neighbor_violations) neighbor_violations.push_back({box_json(a), box_json(b)});

    json gaps = json::array();
    for (const Segment& s : r.spanning_gaps) gaps.push_back(segment_json(s));

    const json j{
        {"pass", r.pass},
        {"checks",
         {{"no_nested_pairs", {{"pass", r.nesting_pass}, {"count", r.nested_pairs.size()}, {"pairs", pairs}}},
          {"box_coverage",
           {{"pass", r.coverage_pass},
            {"expected", r.expected_coverage},
            {"histogram", histogram},
            {"offenders", boxes_json(r.coverage_offenders)}}},
          {"partition_of_unity",
           {{"pass", r.unity_pass},
            {"weighted_deviation", r.weighted_deviation},
            {"weight_free_deviation", r.weight_free_deviation},
            {"max_weight_deviation", r.max_weight_deviation},
            {"samples", r.samples}}},
          {"local_independence",
           {{"pass", r.independence_pass}, {"boxes", r.boxes_checked}, {"failures", boxes_json(r.dependent_boxes)}}},
          {"grading",
           {{"pass", r.grading_pass},
            {"max_shape_ratio", r.grading.max_shape_ratio},
            {"shape_limit", std::sqrt(2.5)},
            {"shape_regular", r.grading.shape_regular},
            {"max_neighbor_ratio", r.grading.max_neighbor_ratio},
            {"neighbor_limit", 2.0},
            {"locally_quasi_uniform", r.grading.locally_quasi_uniform},
            {"aspect_histogram", aspects},
            {"shape_violations", boxes_json(r.grading.shape_violations)},
            {"neighbor_violations", neighbor_violations}}},
          {"spanning", {{"pass", r.spanning_pass}, {"offenders", gaps}}}}},
    };
    return j.dump(2);
}

}  // namespace lrg
