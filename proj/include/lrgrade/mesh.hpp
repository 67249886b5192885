#pragma once

#include "lrgrade/coord.hpp"

#include <memory>
#include <string>
#include <vector>

namespace lrg {

enum class Dir { horizontal, vertical };

inline Dir other(Dir d) { return d == Dir::horizontal ? Dir::vertical : Dir::horizontal; }
inline const char* name(Dir d) { return d == Dir::horizontal ? "H" : "V"; }

struct Interval {
    Dyadic lo, hi;

    Dyadic length() const { return hi - lo; }
    bool contains(const Dyadic& v) const { return lo <= v && v <= hi; }
    bool covers(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    // Open-interval overlap; degenerate intervals never overlap anything.
    bool overlaps_open(const Interval& o) const { return lo < o.hi && o.lo < hi; }
    bool operator==(const Interval&) const = default;
    auto operator<=>(const Interval&) const = default;
};

/// One maximal mesh segment: a horizontal line runs along x at height
/// `fixed`, a vertical one runs along y at abscissa `fixed`. Storage is
/// canonical: per (dir, fixed, mult), overlapping or touching spans are
/// merged to maximal extent.
struct Meshline {
    Dir dir = Dir::horizontal;
    Dyadic fixed;
    Interval span;
    int mult = 1;

    bool operator==(const Meshline&) const = default;
};

struct Box {
    Interval x, y;

    Dyadic width() const { return x.length(); }
    Dyadic height() const { return y.length(); }
    Dyadic area() const { return width() * height(); }
    Dyadic diam_sq() const { return width() * width() + height() * height(); }
    Dyadic center_x() const { return midpoint(x.lo, x.hi); }
    Dyadic center_y() const { return midpoint(y.lo, y.hi); }
    bool contains(const Box& o) const { return x.covers(o.x) && y.covers(o.y); }
    bool contains_point(const Dyadic& px, const Dyadic& py) const { return x.contains(px) && y.contains(py); }
    bool overlaps_open(const Box& o) const { return x.overlaps_open(o.x) && y.overlaps_open(o.y); }
    bool operator==(const Box&) const = default;
    // lexicographic by lower-left corner, then upper-right
    std::strong_ordering operator<=>(const Box& o) const {
        if (auto c = x.lo <=> o.x.lo; c != 0) return c;
        if (auto c = y.lo <=> o.y.lo; c != 0) return c;
        if (auto c = x.hi <=> o.x.hi; c != 0) return c;
        return y.hi <=> o.y.hi;
    }

    std::string describe() const;
};

struct Segment {
    Dir dir = Dir::horizontal;
    Dyadic fixed;
    Interval span;
};

struct Violation {
    enum class Kind {
        unequal_contiguous_mult,   // touching/overlapping aligned lines with different multiplicity
        mult_out_of_range,         // mult < 1 or beyond the transversal degree + 1
        boundary_not_full,         // boundary line missing or below full multiplicity
        dangling_endpoint,         // span endpoint anchored on no transversal line
        outside_domain,
    };
    Kind kind;
    std::string detail;
};

/// Immutable mesh snapshot: square domain, bidegree, canonical meshlines and
/// the induced box partition. Refinement ops return new snapshots.
class LRMesh {
public:
    /// Open tensor mesh: boundary lines at full multiplicity (degree+1),
    /// interior lines at the given coordinates with multiplicity 1.
    static LRMesh open_tensor(const Box& domain, int degree_x, int degree_y,
                              std::vector<Dyadic> interior_x = {}, std::vector<Dyadic> interior_y = {});

    /// Builds from raw lines (parser / fixture path). Lines are sorted and
    /// equal-multiplicity contiguous spans merged; nothing else is enforced,
    /// run validate() to inspect.
    static LRMesh from_lines(const Box& domain, int degree_x, int degree_y, std::vector<Meshline> lines);

    const Box& domain() const { return domain_; }
    /// Degree keyed by line direction: vertical lines carry x knots (p1),
    /// horizontal lines carry y knots (p2).
    int degree(Dir d) const { return d == Dir::vertical ? degree_x_ : degree_y_; }
    int degree_x() const { return degree_x_; }
    int degree_y() const { return degree_y_; }

    /// Canonical line list, sorted by (dir, fixed, span.lo).
    const std::vector<Meshline>& lines() const { return lines_; }

    /// Induced box partition, sorted by lower-left corner.
    const std::vector<Box>& boxes() const { return boxes_; }

    bool is_box(const Box& b) const;

    std::vector<Violation> validate() const;

    /// Single refinement insertion. The span must be nondegenerate, interior
    /// in `fixed`, anchored on transversal lines (or the boundary) at both
    /// endpoints, and must enlarge the mesh; violations throw.
    LRMesh insert_segment(Dir dir, const Dyadic& fixed, const Interval& span) const;

    /// Batch insertion used by the refinement strategies: coverage is
    /// unioned with existing collinear lines, already-covered parts are
    /// ignored. Anchoring is still required; the batch must add something.
    LRMesh with_segments(const std::vector<Segment>& segs) const;

    /// Multiplicity-counted number of transversal lines met by the closed
    /// segment (dir, fixed, span).
    int crossing_count(Dir dir, const Dyadic& fixed, const Interval& span) const;

    /// Multiplicity of the line coverage of (dir, fixed) over the whole
    /// closed interval, 0 when not fully covered.
    int cover_mult(Dir dir, const Dyadic& fixed, const Interval& iv) const;

    bool is_tensor() const;       // every line spans the whole domain
    bool is_open_tensor() const;  // tensor and boundary at full multiplicity
    bool refines(const LRMesh& coarser) const;

    /// Distinct `fixed` coordinates of lines of direction d, ascending.
    const std::vector<Dyadic>& line_coords(Dir d) const;
    /// Lines at the given direction whose fixed coordinate equals `fixed`.
    std::vector<const Meshline*> lines_at(Dir d, const Dyadic& fixed) const;

    bool operator==(const LRMesh& o) const {
        return domain_ == o.domain_ && degree_x_ == o.degree_x_ && degree_y_ == o.degree_y_ && lines_ == o.lines_;
    }

private:
    LRMesh(Box domain, int dx, int dy, std::vector<Meshline> lines);

    Box domain_;
    int degree_x_ = 0, degree_y_ = 0;
    std::vector<Meshline> lines_;
    std::vector<Box> boxes_;
    std::vector<Dyadic> xs_, ys_;  // distinct fixeds of vertical / horizontal lines
};

using MeshPtr = std::shared_ptr<const LRMesh>;

/// Region of interest: a sorted subset of a mesh's partition boxes.
std::vector<Box> sorted_region(std::vector<Box> boxes);
void require_region_of(const LRMesh& mesh, const std::vector<Box>& region);

const char* name(Violation::Kind k);

}  // namespace lrg
