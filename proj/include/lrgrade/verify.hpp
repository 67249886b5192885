#pragma once

#include "lrgrade/bspline.hpp"
#include "lrgrade/mesh.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lrg {

/// One mesh-covered stretch of support boundary shared by two members, with
/// the end-knot multiplicity each member assigns to it.
struct SharedBoundary {
    Dir dir = Dir::horizontal;
    Dyadic at;      // the side's fixed coordinate
    Interval span;  // the inner support's side extent
    int mult_outer = 0;
    int mult_inner = 0;
};

/// Ordered nesting witness, indices into set.members(): the inner support
/// lies inside the outer one and on every shared, mesh-covered boundary side
/// the inner end-knot multiplicity does not exceed the outer's.
struct NestedPair {
    std::size_t outer = 0, inner = 0;
    std::vector<SharedBoundary> witness;
};

/// All ordered nested pairs; empty exactly when the set is nesting-free.
std::vector<NestedPair> find_nested_pairs(const LRSet& set);

/// Number of members whose support covers each partition box. On a
/// nesting-free mesh this is constantly (p1+1)(p2+1).
std::map<Box, int> box_support_counts(const LRSet& set);

/// Max |1 - weighted member sum| over the sample points.
double partition_of_unity_deviation(const LRSet& set, const std::vector<std::pair<double, double>>& points);

/// Whether the members covering the box restrict to linearly independent
/// polynomial pieces: their values on a fixed interior interpolation grid
/// (one node set determines a bidegree-p piece) must form a full-row-rank
/// matrix. Rank over doubles with relative tolerance 1e-9; for bidegree at
/// most (2,2) the verdict is cross-checked in exact rational arithmetic.
bool local_independence_bruteforce(const LRSet& set, const Box& box);

struct GradingReport {
    double max_shape_ratio = 0.0;     // max diam/sqrt(area); halving shapes allow sqrt(5/2)
    double max_neighbor_ratio = 0.0;  // max sqrt(area ratio) over edge-adjacent boxes; bound 2
    bool shape_regular = true;          // every box: 2*diam^2 <= 5*area
    bool locally_quasi_uniform = true;  // every adjacent pair: area ratio <= 4
    std::map<std::string, int> aspect_histogram;  // reduced "w:h" -> box count
    std::vector<Box> shape_violations;
    std::vector<std::pair<Box, Box>> neighbor_violations;
};

/// Shape and neighbor-size bounds of the box partition. Ratios are compared
/// in exact squared form and reported as real square roots.
GradingReport grading_report(const LRMesh& mesh);

/// Maximal interior lines that cross fewer than degree+2 transversal lines,
/// multiplicity counted. Lines this short can enlarge the spline space on
/// the mesh beyond the span of the member set.
std::vector<Segment> spanning_offenders(const LRMesh& mesh, int degree_x, int degree_y);
bool spanning_condition(const LRMesh& mesh, int degree_x, int degree_y);

struct VerifyOptions {
    int pou_samples = 1000;
    double pou_tolerance = 1e-10;
    double weight_tolerance = 1e-12;
    std::uint64_t seed = 0x5ba22eULL;
    bool check_local_independence = true;
};

/// Aggregated evidence from all checks on one mesh/set pair.
struct VerifyReport {
    bool nesting_pass = false;
    std::vector<NestedPair> nested_pairs;

    bool coverage_pass = false;
    int expected_coverage = 0;
    std::map<int, int> coverage_histogram;  // cover count -> number of boxes
    std::vector<Box> coverage_offenders;

    bool unity_pass = false;
    double weighted_deviation = 0.0;     // stored weights: representation sanity
    double weight_free_deviation = 0.0;  // all weights forced to one
    double max_weight_deviation = 0.0;   // max |weight - 1|
    int samples = 0;

    bool independence_pass = false;
    int boxes_checked = 0;
    std::vector<Box> dependent_boxes;

    bool grading_pass = false;
    GradingReport grading;

    bool spanning_pass = false;
    std::vector<Segment> spanning_gaps;

    bool pass = false;
};

VerifyReport verify_set(const LRSet& set, const VerifyOptions& opt = {});

/// CI-friendly JSON rendering: per-check pass flags, counters and witnesses.
std::string report_json(const VerifyReport& report, const LRSet& set);

}  // namespace lrg
