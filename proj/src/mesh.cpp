#include "lrgrade/mesh.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace lrg {

namespace {

bool line_order(const Meshline& a, const Meshline& b) {
    if (a.dir != b.dir) return a.dir < b.dir;
    if (a.fixed != b.fixed) return a.fixed < b.fixed;
    if (a.span.lo != b.span.lo) return a.span.lo < b.span.lo;
    if (a.span.hi != b.span.hi) return a.span.hi < b.span.hi;
    return a.mult < b.mult;
}

// Merge overlapping/touching spans of equal multiplicity on the same carrier.
std::vector<Meshline> canonicalize(std::vector<Meshline> lines) {
    for (const auto& l : lines) {
        if (!(l.span.lo < l.span.hi)) throw std::invalid_argument("degenerate meshline span");
        if (l.mult < 1) throw std::invalid_argument("meshline multiplicity below 1");
    }
    std::sort(lines.begin(), lines.end(), line_order);
    std::vector<Meshline> out;
    for (auto& l : lines) {
        bool merged = false;
        // same (dir, fixed, mult) groups are contiguous except for interleaved
        // multiplicities; scan the tail of equal carriers
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            if (it->dir != l.dir || it->fixed != l.fixed) break;
            if (it->mult != l.mult) continue;
            if (it->span.hi < l.span.lo) break;  // sorted by lo: no later overlap either
            it->span.hi = max(it->span.hi, l.span.hi);
            merged = true;
            break;
        }
        if (!merged) out.push_back(std::move(l));
    }
    std::sort(out.begin(), out.end(), line_order);
    return out;
}

std::vector<Dyadic> distinct_fixeds(const std::vector<Meshline>& lines, Dir d) {
    std::vector<Dyadic> v;
    for (const auto& l : lines)
        if (l.dir == d) v.push_back(l.fixed);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::size_t index_of(const std::vector<Dyadic>& v, const Dyadic& x) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
}

}  // namespace

std::string Box::describe() const {
    return "[" + to_decimal(x.lo) + "," + to_decimal(x.hi) + "]x[" + to_decimal(y.lo) + "," + to_decimal(y.hi) + "]";
}

const char* name(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::unequal_contiguous_mult: return "unequal_contiguous_mult";
        case Violation::Kind::mult_out_of_range: return "mult_out_of_range";
        case Violation::Kind::boundary_not_full: return "boundary_not_full";
        case Violation::Kind::dangling_endpoint: return "dangling_endpoint";
        case Violation::Kind::outside_domain: return "outside_domain";
    }
    return "?";
}

LRMesh::LRMesh(Box domain, int dx, int dy, std::vector<Meshline> lines)
    : domain_(domain), degree_x_(dx), degree_y_(dy), lines_(canonicalize(std::move(lines))) {
    if (!(domain_.x.lo < domain_.x.hi) || !(domain_.y.lo < domain_.y.hi))
        throw std::invalid_argument("empty domain");
    if (domain_.width() != domain_.height())
        throw std::invalid_argument("domain must be square");
    if (dx < 0 || dy < 0) throw std::invalid_argument("negative degree");

    xs_ = distinct_fixeds(lines_, Dir::vertical);
    ys_ = distinct_fixeds(lines_, Dir::horizontal);

    // ---- induced box partition ----
    // Breakpoints include span endpoints so that a line ending mid-face is
    // seen as the broken face it creates, not as a full wall.
    std::vector<Dyadic> gx = xs_, gy = ys_;
    gx.push_back(domain_.x.lo), gx.push_back(domain_.x.hi);
    gy.push_back(domain_.y.lo), gy.push_back(domain_.y.hi);
    for (const auto& l : lines_) {
        auto& g = l.dir == Dir::vertical ? gy : gx;
        g.push_back(l.span.lo), g.push_back(l.span.hi);
    }
    std::sort(gx.begin(), gx.end()), std::sort(gy.begin(), gy.end());
    gx.erase(std::unique(gx.begin(), gx.end()), gx.end());
    gy.erase(std::unique(gy.begin(), gy.end()), gy.end());

    const std::size_t nx = gx.size(), ny = gy.size();
    const std::size_t cx = nx - 1, cy = ny - 1;  // micro cell counts

    // vblock[i * cy + j]: vertical grid edge at x = gx[i] covering y cell j
    std::vector<char> vblock(nx * cy, 0), hblock(ny * cx, 0);
    for (const auto& l : lines_) {
        if (l.dir == Dir::vertical) {
            const std::size_t i = index_of(gx, l.fixed);
            const std::size_t j0 = index_of(gy, l.span.lo), j1 = index_of(gy, l.span.hi);
            for (std::size_t j = j0; j < j1; ++j) vblock[i * cy + j] = 1;
        } else {
            const std::size_t j = index_of(gy, l.fixed);
            const std::size_t i0 = index_of(gx, l.span.lo), i1 = index_of(gx, l.span.hi);
            for (std::size_t i = i0; i < i1; ++i) hblock[j * cx + i] = 1;
        }
    }

    // flood fill across unblocked edges; every face must come out rectangular
    std::vector<int> comp(cx * cy, -1);
    int ncomp = 0;
    for (std::size_t start = 0; start < cx * cy; ++start) {
        if (comp[start] >= 0) continue;
        const int id = ncomp++;
        std::queue<std::size_t> q;
        q.push(start);
        comp[start] = id;
        std::size_t i_lo = cx, i_hi = 0, j_lo = cy, j_hi = 0, count = 0;
        while (!q.empty()) {
            const std::size_t c = q.front();
            q.pop();
            ++count;
            const std::size_t i = c % cx, j = c / cx;
            i_lo = std::min(i_lo, i), i_hi = std::max(i_hi, i);
            j_lo = std::min(j_lo, j), j_hi = std::max(j_hi, j);
            auto visit = [&](std::size_t n) {
                if (comp[n] < 0) { comp[n] = id; q.push(n); }
            };
            if (i > 0 && !vblock[i * cy + j]) visit(c - 1);
            if (i + 1 < cx && !vblock[(i + 1) * cy + j]) visit(c + 1);
            if (j > 0 && !hblock[j * cx + i]) visit(c - cx);
            if (j + 1 < cy && !hblock[(j + 1) * cx + i]) visit(c + cx);
        }
        if (count != (i_hi - i_lo + 1) * (j_hi - j_lo + 1))
            throw std::runtime_error("mesh does not induce a box partition");
        for (std::size_t j = j_lo; j <= j_hi; ++j)
            for (std::size_t i = i_lo; i <= i_hi; ++i) {
                if (comp[j * cx + i] != id) throw std::runtime_error("mesh does not induce a box partition");
                if (i > i_lo && vblock[i * cy + j]) throw std::runtime_error("mesh does not induce a box partition");
                if (j > j_lo && hblock[j * cx + i]) throw std::runtime_error("mesh does not induce a box partition");
            }
        boxes_.push_back(Box{{gx[i_lo], gx[i_hi + 1]}, {gy[j_lo], gy[j_hi + 1]}});
    }
    std::sort(boxes_.begin(), boxes_.end());
}

LRMesh LRMesh::open_tensor(const Box& domain, int degree_x, int degree_y,
                           std::vector<Dyadic> interior_x, std::vector<Dyadic> interior_y) {
    std::vector<Meshline> lines;
    lines.push_back({Dir::vertical, domain.x.lo, domain.y, degree_x + 1});
    lines.push_back({Dir::vertical, domain.x.hi, domain.y, degree_x + 1});
    lines.push_back({Dir::horizontal, domain.y.lo, domain.x, degree_y + 1});
    lines.push_back({Dir::horizontal, domain.y.hi, domain.x, degree_y + 1});
    for (const auto& v : interior_x) {
        if (!(domain.x.lo < v && v < domain.x.hi)) throw std::invalid_argument("interior x line outside domain");
        lines.push_back({Dir::vertical, v, domain.y, 1});
    }
    for (const auto& v : interior_y) {
        if (!(domain.y.lo < v && v < domain.y.hi)) throw std::invalid_argument("interior y line outside domain");
        lines.push_back({Dir::horizontal, v, domain.x, 1});
    }
    return LRMesh(domain, degree_x, degree_y, std::move(lines));
}

LRMesh LRMesh::from_lines(const Box& domain, int degree_x, int degree_y, std::vector<Meshline> lines) {
    return LRMesh(domain, degree_x, degree_y, std::move(lines));
}

bool LRMesh::is_box(const Box& b) const {
    return std::binary_search(boxes_.begin(), boxes_.end(), b);
}

const std::vector<Dyadic>& LRMesh::line_coords(Dir d) const { return d == Dir::vertical ? xs_ : ys_; }

std::vector<const Meshline*> LRMesh::lines_at(Dir d, const Dyadic& fixed) const {
    std::vector<const Meshline*> out;
    for (const auto& l : lines_)
        if (l.dir == d && l.fixed == fixed) out.push_back(&l);
    return out;
}

int LRMesh::cover_mult(Dir dir, const Dyadic& fixed, const Interval& iv) const {
    int best = 0;
    for (const auto& l : lines_)
        if (l.dir == dir && l.fixed == fixed && l.span.covers(iv)) best = std::max(best, l.mult);
    return best;
}

int LRMesh::crossing_count(Dir dir, const Dyadic& fixed, const Interval& span) const {
    const Dir tr = other(dir);
    int n = 0;
    for (const auto& l : lines_)
        if (l.dir == tr && span.contains(l.fixed) && l.span.contains(fixed)) n += l.mult;
    return n;
}

bool LRMesh::is_tensor() const {
    for (const auto& l : lines_) {
        const Interval& full = l.dir == Dir::vertical ? domain_.y : domain_.x;
        if (l.span != full) return false;
    }
    return true;
}

bool LRMesh::is_open_tensor() const {
    return is_tensor() &&
           cover_mult(Dir::vertical, domain_.x.lo, domain_.y) == degree_x_ + 1 &&
           cover_mult(Dir::vertical, domain_.x.hi, domain_.y) == degree_x_ + 1 &&
           cover_mult(Dir::horizontal, domain_.y.lo, domain_.x) == degree_y_ + 1 &&
           cover_mult(Dir::horizontal, domain_.y.hi, domain_.x) == degree_y_ + 1;
}

bool LRMesh::refines(const LRMesh& coarser) const {
    if (domain_ != coarser.domain_) return false;
    for (const auto& l : coarser.lines_) {
        // coverage by lines of multiplicity >= l.mult must contain l.span
        std::vector<Interval> segs;
        for (const auto& m : lines_)
            if (m.dir == l.dir && m.fixed == l.fixed && m.mult >= l.mult) segs.push_back(m.span);
        std::sort(segs.begin(), segs.end());
        Dyadic reach = l.span.lo;
        for (const auto& s : segs) {
            if (s.lo > reach) break;
            reach = max(reach, s.hi);
        }
        if (reach < l.span.hi) return false;
    }
    return true;
}

std::vector<Violation> LRMesh::validate() const {
    std::vector<Violation> out;
    auto add = [&](Violation::Kind k, std::string d) { out.push_back({k, std::move(d)}); };

    for (const auto& l : lines_) {
        const bool vert = l.dir == Dir::vertical;
        const Interval& axis = vert ? domain_.x : domain_.y;
        const Interval& range = vert ? domain_.y : domain_.x;
        const int pmax = (vert ? degree_x_ : degree_y_) + 1;
        const std::string id = std::string(name(l.dir)) + " " + to_decimal(l.fixed) +
                               " [" + to_decimal(l.span.lo) + "," + to_decimal(l.span.hi) + "]";
        if (!axis.contains(l.fixed) || !range.covers(l.span))
            add(Violation::Kind::outside_domain, id);
        if (l.mult > pmax)
            add(Violation::Kind::mult_out_of_range, id + " mult " + std::to_string(l.mult));
        const bool on_boundary = l.fixed == axis.lo || l.fixed == axis.hi;
        if (!on_boundary) {
            for (const Dyadic& e : {l.span.lo, l.span.hi}) {
                if (e == range.lo || e == range.hi) continue;
                if (cover_mult(other(l.dir), e, {l.fixed, l.fixed}) == 0)
                    add(Violation::Kind::dangling_endpoint, id + " at " + to_decimal(e));
            }
        }
    }

    // contiguous aligned spans must share multiplicity
    for (std::size_t i = 0; i < lines_.size(); ++i)
        for (std::size_t j = i + 1; j < lines_.size(); ++j) {
            const auto &a = lines_[i], &b = lines_[j];
            if (a.dir != b.dir || a.fixed != b.fixed) continue;
            if (a.mult == b.mult) continue;
            if (a.span.hi < b.span.lo || b.span.hi < a.span.lo) continue;  // disjoint, not touching
            add(Violation::Kind::unequal_contiguous_mult,
                std::string(name(a.dir)) + " " + to_decimal(a.fixed) + " mult " +
                    std::to_string(a.mult) + " vs " + std::to_string(b.mult));
        }

    // boundary at full multiplicity
    struct Edge { Dir d; Dyadic fixed; Interval range; int full; };
    for (const auto& e : {Edge{Dir::vertical, domain_.x.lo, domain_.y, degree_x_ + 1},
                          Edge{Dir::vertical, domain_.x.hi, domain_.y, degree_x_ + 1},
                          Edge{Dir::horizontal, domain_.y.lo, domain_.x, degree_y_ + 1},
                          Edge{Dir::horizontal, domain_.y.hi, domain_.x, degree_y_ + 1}}) {
        if (cover_mult(e.d, e.fixed, e.range) != e.full)
            add(Violation::Kind::boundary_not_full, std::string(name(e.d)) + " " + to_decimal(e.fixed));
    }
    return out;
}

LRMesh LRMesh::insert_segment(Dir dir, const Dyadic& fixed, const Interval& span) const {
    const bool vert = dir == Dir::vertical;
    const Interval& axis = vert ? domain_.x : domain_.y;
    const Interval& range = vert ? domain_.y : domain_.x;
    if (!(span.lo < span.hi)) throw std::invalid_argument("insert_segment: degenerate span");
    if (fixed == axis.lo || fixed == axis.hi) throw std::invalid_argument("insert_segment: segment on the boundary");
    if (!axis.contains(fixed) || !range.covers(span)) throw std::invalid_argument("insert_segment: outside domain");
    for (const Dyadic& e : {span.lo, span.hi}) {
        if (e == range.lo || e == range.hi) continue;
        if (cover_mult(other(dir), e, {fixed, fixed}) == 0)
            throw std::invalid_argument("insert_segment: endpoint not anchored on a transversal line");
    }
    LRMesh next = with_segments({{dir, fixed, span}});
    if (lines_ == next.lines_) throw std::invalid_argument("insert_segment: segment does not change the mesh");
    return next;
}

LRMesh LRMesh::with_segments(const std::vector<Segment>& segs) const {
    if (segs.empty()) throw std::invalid_argument("with_segments: empty batch");
    std::vector<Meshline> lines = lines_;
    for (const auto& s : segs) {
        const bool vert = s.dir == Dir::vertical;
        const Interval& axis = vert ? domain_.x : domain_.y;
        const Interval& range = vert ? domain_.y : domain_.x;
        if (!(s.span.lo < s.span.hi)) throw std::invalid_argument("with_segments: degenerate span");
        if (s.fixed == axis.lo || s.fixed == axis.hi) throw std::invalid_argument("with_segments: segment on the boundary");
        if (!axis.contains(s.fixed) || !range.covers(s.span)) throw std::invalid_argument("with_segments: outside domain");
        for (const Dyadic& e : {s.span.lo, s.span.hi}) {
            if (e == range.lo || e == range.hi) continue;
            if (cover_mult(other(s.dir), e, {s.fixed, s.fixed}) == 0)
                throw std::invalid_argument("with_segments: endpoint not anchored on a transversal line");
        }
        lines.push_back({s.dir, s.fixed, s.span, 1});
    }
    LRMesh next(domain_, degree_x_, degree_y_, std::move(lines));
    if (lines_ == next.lines_) throw std::invalid_argument("with_segments: batch does not change the mesh");
    return next;
}

std::vector<Box> sorted_region(std::vector<Box> boxes) {
    std::sort(boxes.begin(), boxes.end());
    boxes.erase(std::unique(boxes.begin(), boxes.end()), boxes.end());
    return boxes;
}

void require_region_of(const LRMesh& mesh, const std::vector<Box>& region) {
    for (const auto& b : region)
        if (!mesh.is_box(b))
            throw std::invalid_argument("region box " + b.describe() + " is not a box of the current partition");
}

}  // namespace lrg
