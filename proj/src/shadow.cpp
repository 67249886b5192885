#include "lrgrade/shadow.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace lrg {

namespace {

// Crossing lines aggregated per carrier coordinate, ascending.
using CrossList = std::vector<std::pair<Dyadic, int>>;

const Interval& axis_iv(const Box& b, Dir axis) { return axis == Dir::horizontal ? b.x : b.y; }
const Interval& across_iv(const Box& b, Dir axis) { return axis == Dir::horizontal ? b.y : b.x; }

// Lines transversal to the axis; mesh order keeps them sorted by (fixed, lo).
std::vector<Meshline> crossing_lines(const LRMesh& mesh, Dir axis) {
    std::vector<Meshline> out;
    for (const auto& l : mesh.lines())
        if (l.dir == other(axis)) out.push_back(l);
    return out;
}

// Crossings whose span covers the closed across-interval (a point when
// lo == hi), multiplicities summed per coordinate.
CrossList active_crossings(const std::vector<Meshline>& lines, const Interval& iv) {
    CrossList xs;
    for (const auto& l : lines) {
        if (!(l.span.lo <= iv.lo && iv.hi <= l.span.hi)) continue;
        if (!xs.empty() && xs.back().first == l.fixed)
            xs.back().second += l.mult;
        else
            xs.emplace_back(l.fixed, l.mult);
    }
    return xs;
}

// Walks outward from `start`, a crossing at `start` itself counted first,
// and returns the coordinate where the cumulative multiplicity first
// reaches `need` — or of the last crossing when the tally falls short, or
// `start` when there is none at all.
Dyadic walk(const CrossList& xs, const Dyadic& start, bool up, int need) {
    Dyadic reach = start;
    int cnt = 0;
    auto cmp = [](const std::pair<Dyadic, int>& a, const Dyadic& v) { return a.first < v; };
    if (up) {
        for (auto it = std::lower_bound(xs.begin(), xs.end(), start, cmp); it != xs.end(); ++it) {
            reach = it->first;
            cnt += it->second;
            if (cnt >= need) break;
        }
    } else {
        for (auto it = std::make_reverse_iterator(
                 std::upper_bound(xs.begin(), xs.end(), start,
                                  [](const Dyadic& v, const std::pair<Dyadic, int>& a) { return v < a.first; }));
             it != xs.rend(); ++it) {
            reach = it->first;
            cnt += it->second;
            if (cnt >= need) break;
        }
    }
    return reach;
}

// Closed base interval minus a union of closed cuts; positive-length
// leftovers only.
std::vector<Interval> interval_minus(const Interval& base, std::vector<Interval> cuts) {
    std::sort(cuts.begin(), cuts.end());
    std::vector<Interval> out;
    Dyadic cur = base.lo;
    for (const auto& c : cuts) {
        if (c.hi <= cur) continue;
        if (cur < c.lo) out.push_back({cur, min(c.lo, base.hi)});
        cur = max(cur, c.hi);
        if (!(cur < base.hi)) return out;
    }
    out.push_back({cur, base.hi});
    return out;
}

}  // namespace

ShadowEndpoints shadow_endpoints(const LRMesh& mesh, const Point& q, Dir axis, int pk) {
    if (pk < 0) throw std::invalid_argument("negative degree");
    const Dyadic along = axis == Dir::horizontal ? q.x : q.y;
    const Dyadic across = axis == Dir::horizontal ? q.y : q.x;
    const CrossList xs = active_crossings(crossing_lines(mesh, axis), {across, across});
    const Dyadic lo = walk(xs, along, false, pk + 1);
    const Dyadic hi = walk(xs, along, true, pk + 1);
    if (axis == Dir::horizontal) return {{lo, q.y}, {hi, q.y}};
    return {{q.x, lo}, {q.x, hi}};
}

std::vector<Box> generalized_shadow(const LRMesh& mesh, const std::vector<Box>& region_in, Dir axis, int pk) {
    if (pk < 0) throw std::invalid_argument("negative degree");
    const std::vector<Box> region = sorted_region(region_in);
    require_region_of(mesh, region);
    if (region.empty()) return {};

    const int need = pk + 1;
    const std::vector<Meshline> lines = crossing_lines(mesh, axis);

    // Across-coordinates where the active crossing set can change: span
    // endpoints split boundary edges into classes of constant reach.
    std::vector<Dyadic> breaks;
    for (const auto& l : lines) {
        breaks.push_back(l.span.lo);
        breaks.push_back(l.span.hi);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::set<Box> out;

    // The shadow holds every box meeting the closed region or a closed
    // boundary segment; touching along an edge or at a corner counts.
    for (const auto& b : mesh.boxes())
        for (const auto& a : region)
            if (b.x.lo <= a.x.hi && a.x.lo <= b.x.hi && b.y.lo <= a.y.hi && a.y.lo <= b.y.hi) {
                out.insert(b);
                break;
            }

    // Boxes meeting [alo, ahi] × (clo, chi): the across side is open — a
    // class covers the segments at its interior heights only.
    auto collect_class = [&](const Dyadic& alo, const Dyadic& ahi, const Dyadic& clo, const Dyadic& chi) {
        for (const auto& b : mesh.boxes()) {
            const Interval &ba = axis_iv(b, axis), &bc = across_iv(b, axis);
            if (ba.lo <= ahi && alo <= ba.hi && bc.lo < chi && clo < bc.hi) out.insert(b);
        }
    };
    // Boxes meeting the single segment [alo, ahi] × {c}.
    auto collect_at = [&](const Dyadic& alo, const Dyadic& ahi, const Dyadic& c) {
        for (const auto& b : mesh.boxes()) {
            const Interval &ba = axis_iv(b, axis), &bc = across_iv(b, axis);
            if (ba.lo <= ahi && alo <= ba.hi && bc.lo <= c && c <= bc.hi) out.insert(b);
        }
    };

    for (const auto& a : region) {
        const Interval along = axis_iv(a, axis);
        const Interval across = across_iv(a, axis);

        // Sides hit head-on by the sweep: boundary pieces are split at the
        // breakpoints; within an open class every point has the same reach.
        // The exact class-boundary heights carry their own segments, walked
        // with the crossing set active at that height alone.
        for (const Dyadic& w : {along.lo, along.hi}) {
            std::vector<Interval> cuts;
            for (const auto& n : region)
                if ((w == along.lo ? axis_iv(n, axis).hi : axis_iv(n, axis).lo) == w &&
                    across_iv(n, axis).overlaps_open(across))
                    cuts.push_back(across_iv(n, axis));
            for (const Interval& piece : interval_minus(across, std::move(cuts))) {
                std::vector<Dyadic> cut{piece.lo};
                for (const Dyadic& b : breaks)
                    if (piece.lo < b && b < piece.hi) cut.push_back(b);
                cut.push_back(piece.hi);
                for (size_t i = 0; i + 1 < cut.size(); ++i) {
                    const CrossList xs = active_crossings(lines, {cut[i], cut[i + 1]});
                    collect_class(walk(xs, w, false, need), walk(xs, w, true, need), cut[i], cut[i + 1]);
                }
                for (const Dyadic& c : {piece.lo, piece.hi}) {
                    const CrossList xs = active_crossings(lines, {c, c});
                    collect_at(walk(xs, w, false, need), walk(xs, w, true, need), c);
                }
            }
        }

        // Sides parallel to the sweep: the per-point segments share one
        // height, so their union is a single segment whose ends are
        // governed by the walks from the piece's own endpoints.
        for (const Dyadic& w : {across.lo, across.hi}) {
            std::vector<Interval> cuts;
            for (const auto& n : region)
                if ((w == across.lo ? across_iv(n, axis).hi : across_iv(n, axis).lo) == w &&
                    axis_iv(n, axis).overlaps_open(along))
                    cuts.push_back(axis_iv(n, axis));
            for (const Interval& piece : interval_minus(along, std::move(cuts))) {
                const CrossList xs = active_crossings(lines, {w, w});
                collect_at(walk(xs, piece.lo, false, need), walk(xs, piece.hi, true, need), w);
            }
        }
    }

    return {out.begin(), out.end()};
}

std::optional<int> separation_distance(const LRMesh& mesh, const Point& p, const Point& q) {
    if (p == q) return 0;
    if (p.x != q.x && p.y != q.y) return std::nullopt;
    if (p.y == q.y) return mesh.crossing_count(Dir::horizontal, p.y, {min(p.x, q.x), max(p.x, q.x)});
    return mesh.crossing_count(Dir::vertical, p.x, {min(p.y, q.y), max(p.y, q.y)});
}

std::vector<Box> classic_shadow(const LRMesh& mesh, const std::vector<Box>& region_in, Dir axis, int pk,
                                int threshold) {
    if (!mesh.is_tensor()) throw std::invalid_argument("classic shadow needs a tensor mesh");
    if (pk < 0) throw std::invalid_argument("negative degree");
    const int tau = threshold < 0 ? pk : threshold;
    const std::vector<Box> region = sorted_region(region_in);
    require_region_of(mesh, region);

    // On a tensor mesh every crossing line spans the domain; aggregate the
    // multiplicity per carrier coordinate once.
    CrossList cols;
    for (const auto& l : crossing_lines(mesh, axis)) {
        if (!cols.empty() && cols.back().first == l.fixed)
            cols.back().second += l.mult;
        else
            cols.emplace_back(l.fixed, l.mult);
    }

    // A box is in the shadow when it meets the closure of the point set at
    // separation at most tau from the region: its near edge must see at
    // most tau carrier lines back to the region, the near edge's own line
    // excluded (points just inside approach the region that closely).
    auto strip_count = [&](const Dyadic& from, const Dyadic& to) {
        int n = 0;
        for (const auto& [c, m] : cols) {
            if (from < to ? (from <= c && c < to) : (to < c && c <= from)) n += m;
        }
        return n;
    };

    std::vector<Box> out;
    for (const auto& b : mesh.boxes()) {
        const Interval &ba = axis_iv(b, axis), &bc = across_iv(b, axis);
        bool in = false;
        for (const auto& a : region) {
            const Interval &aa = axis_iv(a, axis), &ac = across_iv(a, axis);
            if (!(bc.lo <= ac.hi && ac.lo <= bc.hi)) continue;
            if (ba.lo <= aa.hi && aa.lo <= ba.hi) {
                in = true;
                break;
            }
            const bool right = ba.lo > aa.hi;
            if (strip_count(right ? aa.hi : aa.lo, right ? ba.lo : ba.hi) <= tau) {
                in = true;
                break;
            }
        }
        if (in) out.push_back(b);
    }
    return out;
}

}  // namespace lrg
