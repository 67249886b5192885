#pragma once

#include "lrgrade/mesh.hpp"

#include <optional>
#include <span>
#include <vector>

namespace lrg {

/// Univariate B-spline value on the local knot vector t[0..p+1] (degree
/// p = n-2). Right-continuous: knot cells are half open [t_i, t_{i+1}), so
/// the value at the last knot is 0. With from_left the left limit is
/// returned instead; callers use it at the domain's upper boundary.
/// Works for any ordered field T (double, exact rationals).
template <class T>
T bspline_eval_1d(std::span<const T> t, T x, bool from_left = false) {
    const int p = static_cast<int>(t.size()) - 2;
    if (x < t.front() || x > t.back()) return T(0);
    std::vector<T> v(p + 1);
    for (int i = 0; i <= p; ++i) {
        const bool in = from_left ? t[i] < x && x <= t[i + 1] : t[i] <= x && x < t[i + 1];
        v[i] = in ? T(1) : T(0);
    }
    for (int r = 1; r <= p; ++r)
        for (int i = 0; i + r <= p; ++i) {
            T acc(0);
            if (t[i + r] != t[i] && v[i] != T(0)) acc = acc + (x - t[i]) / (t[i + r] - t[i]) * v[i];
            if (t[i + r + 1] != t[i + 1] && v[i + 1] != T(0)) acc = acc + (t[i + r + 1] - x) / (t[i + r + 1] - t[i + 1]) * v[i + 1];
            v[i] = acc;
        }
    return v[0];
}

/// LR B-spline: local knot vectors (degree+2 values each) and the
/// accumulated representation weight.
struct LRBSpline {
    std::vector<Dyadic> kx, ky;
    double weight = 1.0;

    /// Knots keyed by line direction: a vertical line at x = v contributes
    /// the knot v to kx, a horizontal one contributes to ky.
    int degree(Dir d) const { return static_cast<int>((d == Dir::vertical ? kx : ky).size()) - 2; }
    const std::vector<Dyadic>& knots(Dir d) const { return d == Dir::vertical ? kx : ky; }
    Box support() const { return Box{{kx.front(), kx.back()}, {ky.front(), ky.back()}}; }
    int knot_mult(Dir d, const Dyadic& v) const;

    /// Right-continuous in each axis; the left flags switch that axis to its
    /// left limit (for points on the domain's upper boundary).
    double evaluate(double px, double py, bool left_x = false, bool left_y = false) const;
};

/// Knot-vector ordering (x knots, then y knots); weights excluded.
bool knot_order(const LRBSpline& a, const LRBSpline& b);
bool same_knots(const LRBSpline& a, const LRBSpline& b);

struct KnotInsertion {
    LRBSpline low, high;      // children; weights already scaled by the alphas
    double alpha_low = 1.0;   // coefficient of the child keeping the lower knots
    double alpha_high = 1.0;
};

/// Single Boehm split of one B-spline at an interior knot value:
/// B = alpha_low * B_low + alpha_high * B_high.
KnotInsertion knot_insert(const LRBSpline& b, Dir dir, const Dyadic& value);

/// Tensor grid of the B-spline's own knot lines: distinct knot coordinates
/// and the (nondegenerate) cells they induce on the support.
struct LocalMesh {
    std::vector<Dyadic> xs, ys;
    std::vector<Box> cells;
};
LocalMesh local_mesh(const LRBSpline& b);

/// First meshline that fully traverses the open support but is not carried
/// by the knot vector at the mesh's multiplicity. Scans vertical lines first
/// (x splits), each direction by ascending coordinate.
struct SupportViolation {
    Dir dir;       // direction of the *split*, i.e. the knot vector to extend
    Dyadic value;
};
std::optional<SupportViolation> find_support_violation(const LRBSpline& b, const LRMesh& mesh);
bool has_minimal_support(const LRBSpline& b, const LRMesh& mesh);

/// Immutable LR B-spline collection bound to a mesh snapshot. Members are
/// kept sorted by knot vectors and unique; duplicate knot vectors merge by
/// adding weights.
class LRSet {
public:
    /// Tensor-product start set on an open tensor mesh; all weights 1.
    static LRSet initial(MeshPtr mesh);

    /// Re-established minimal support on a refined mesh: every member that
    /// lost minimal support is replaced by its two knot-insertion children
    /// until the collection is stable. The result does not depend on the
    /// processing order; the implementation fixes one for determinism.
    LRSet updated(MeshPtr finer) const;

    const LRMesh& mesh() const { return *mesh_; }
    const MeshPtr& mesh_ptr() const { return mesh_; }
    const std::vector<LRBSpline>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

    double evaluate(double x, double y) const;

    static LRSet from_members(MeshPtr mesh, std::vector<LRBSpline> members);

private:
    LRSet(MeshPtr mesh, std::vector<LRBSpline> members);
    MeshPtr mesh_;
    std::vector<LRBSpline> members_;
};

}  // namespace lrg
