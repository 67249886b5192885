#include "lrgrade/bspline.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lrg {

namespace {

std::vector<double> to_doubles(const std::vector<Dyadic>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].to_double();
    return out;
}

void check_knots(const std::vector<Dyadic>& k, const char* which) {
    if (k.size() < 2) throw std::invalid_argument(std::string("knot vector too short: ") + which);
    if (!std::is_sorted(k.begin(), k.end())) throw std::invalid_argument(std::string("knot vector not sorted: ") + which);
    if (k.front() == k.back()) throw std::invalid_argument(std::string("empty support: ") + which);
}

}  // namespace

int LRBSpline::knot_mult(Dir d, const Dyadic& v) const {
    const auto& k = knots(d);
    return static_cast<int>(std::count(k.begin(), k.end(), v));
}

double LRBSpline::evaluate(double px, double py, bool left_x, bool left_y) const {
    const auto tx = to_doubles(kx), ty = to_doubles(ky);
    const double fx = bspline_eval_1d<double>(tx, px, left_x);
    if (fx == 0.0) return 0.0;
    return fx * bspline_eval_1d<double>(ty, py, left_y);
}

bool knot_order(const LRBSpline& a, const LRBSpline& b) {
    if (a.kx != b.kx)
        return std::lexicographical_compare(a.kx.begin(), a.kx.end(), b.kx.begin(), b.kx.end());
    return std::lexicographical_compare(a.ky.begin(), a.ky.end(), b.ky.begin(), b.ky.end());
}

bool same_knots(const LRBSpline& a, const LRBSpline& b) { return a.kx == b.kx && a.ky == b.ky; }

KnotInsertion knot_insert(const LRBSpline& b, Dir dir, const Dyadic& value) {
    const std::vector<Dyadic>& t = b.knots(dir);
    const int p = b.degree(dir);
    if (!(t.front() < value && value < t.back()))
        throw std::invalid_argument("knot_insert: value not interior to the support");

    // t has p+2 entries t[0..p+1]
    double alpha_low = 1.0, alpha_high = 1.0;
    if (value < t[p]) alpha_low = (value - t[0]).to_double() / (t[p] - t[0]).to_double();
    if (value > t[1]) alpha_high = (t[p + 1] - value).to_double() / (t[p + 1] - t[1]).to_double();

    std::vector<Dyadic> low(t.begin(), t.end() - 1), high(t.begin() + 1, t.end());
    low.insert(std::upper_bound(low.begin(), low.end(), value), value);
    high.insert(std::upper_bound(high.begin(), high.end(), value), value);

    KnotInsertion out;
    out.alpha_low = alpha_low;
    out.alpha_high = alpha_high;
    if (dir == Dir::vertical) {
        out.low = LRBSpline{std::move(low), b.ky, b.weight * alpha_low};
        out.high = LRBSpline{std::move(high), b.ky, b.weight * alpha_high};
    } else {
        out.low = LRBSpline{b.kx, std::move(low), b.weight * alpha_low};
        out.high = LRBSpline{b.kx, std::move(high), b.weight * alpha_high};
    }
    return out;
}

LocalMesh local_mesh(const LRBSpline& b) {
    LocalMesh lm;
    lm.xs = b.kx;
    lm.ys = b.ky;
    lm.xs.erase(std::unique(lm.xs.begin(), lm.xs.end()), lm.xs.end());
    lm.ys.erase(std::unique(lm.ys.begin(), lm.ys.end()), lm.ys.end());
    for (std::size_t j = 0; j + 1 < lm.ys.size(); ++j)
        for (std::size_t i = 0; i + 1 < lm.xs.size(); ++i)
            lm.cells.push_back(Box{{lm.xs[i], lm.xs[i + 1]}, {lm.ys[j], lm.ys[j + 1]}});
    std::sort(lm.cells.begin(), lm.cells.end());
    return lm;
}

std::optional<SupportViolation> find_support_violation(const LRBSpline& b, const LRMesh& mesh) {
    const Box s = b.support();
    for (Dir d : {Dir::vertical, Dir::horizontal}) {
        const Interval ext = d == Dir::vertical ? s.x : s.y;        // coordinates of candidate lines
        const Interval across = d == Dir::vertical ? s.y : s.x;     // interval a traversing line must cover
        for (const Dyadic& v : mesh.line_coords(d)) {
            if (!(ext.lo < v)) continue;
            if (!(v < ext.hi)) break;
            const int m = mesh.cover_mult(d, v, across);
            if (m > b.knot_mult(d, v)) return SupportViolation{d, v};
        }
    }
    return std::nullopt;
}

bool has_minimal_support(const LRBSpline& b, const LRMesh& mesh) {
    return !find_support_violation(b, mesh).has_value();
}

LRSet::LRSet(MeshPtr mesh, std::vector<LRBSpline> members) : mesh_(std::move(mesh)), members_(std::move(members)) {
    if (!mesh_) throw std::invalid_argument("LRSet: null mesh");
    for (const auto& m : members_) {
        check_knots(m.kx, "x");
        check_knots(m.ky, "y");
        if (static_cast<int>(m.kx.size()) != mesh_->degree_x() + 2 || static_cast<int>(m.ky.size()) != mesh_->degree_y() + 2)
            throw std::invalid_argument("LRSet: knot vector length does not match the mesh bidegree");
    }
    std::sort(members_.begin(), members_.end(), knot_order);
    for (std::size_t i = 0; i + 1 < members_.size(); ++i)
        if (same_knots(members_[i], members_[i + 1]))
            throw std::invalid_argument("LRSet: duplicate knot vectors");
}

LRSet LRSet::from_members(MeshPtr mesh, std::vector<LRBSpline> members) {
    return LRSet(std::move(mesh), std::move(members));
}

LRSet LRSet::initial(MeshPtr mesh) {
    if (!mesh) throw std::invalid_argument("initial: null mesh");
    if (!mesh->is_open_tensor()) throw std::invalid_argument("initial: mesh is not an open tensor mesh");

    auto global = [&](Dir d) {
        std::vector<Dyadic> g;
        for (const Dyadic& v : mesh->line_coords(d)) {
            const Interval& range = d == Dir::vertical ? mesh->domain().y : mesh->domain().x;
            const int m = mesh->cover_mult(d, v, range);
            for (int i = 0; i < m; ++i) g.push_back(v);
        }
        return g;
    };
    const std::vector<Dyadic> gx = global(Dir::vertical), gy = global(Dir::horizontal);
    const std::size_t wx = static_cast<std::size_t>(mesh->degree_x()) + 2;
    const std::size_t wy = static_cast<std::size_t>(mesh->degree_y()) + 2;
    if (gx.size() < wx || gy.size() < wy) throw std::invalid_argument("initial: not enough knots for the bidegree");

    std::vector<LRBSpline> members;
    for (std::size_t i = 0; i + wx <= gx.size(); ++i)
        for (std::size_t j = 0; j + wy <= gy.size(); ++j) {
            LRBSpline b{{gx.begin() + i, gx.begin() + i + wx}, {gy.begin() + j, gy.begin() + j + wy}, 1.0};
            if (b.kx.front() == b.kx.back() || b.ky.front() == b.ky.back()) continue;  // zero-support window
            members.push_back(std::move(b));
        }
    return LRSet(std::move(mesh), std::move(members));
}

LRSet LRSet::updated(MeshPtr finer) const {
    if (!finer) throw std::invalid_argument("updated: null mesh");
    if (!finer->refines(*mesh_)) throw std::invalid_argument("updated: new mesh does not refine the current one");

    using Key = std::pair<std::vector<Dyadic>, std::vector<Dyadic>>;
    std::map<Key, double> pending, settled;
    for (const auto& m : members_) pending[{m.kx, m.ky}] += m.weight;

    // Bounded by the number of tensor sub-windows on the final mesh; the
    // guard only trips on internal logic errors.
    std::size_t guard = 0, guard_max = 1000000 + pending.size() * 1000;
    while (!pending.empty()) {
        if (++guard > guard_max) throw std::logic_error("updated: refinement cascade does not terminate");
        auto it = pending.begin();
        LRBSpline b{it->first.first, it->first.second, it->second};
        pending.erase(it);
        const auto v = find_support_violation(b, *finer);
        if (!v) {
            settled[{b.kx, b.ky}] += b.weight;
            continue;
        }
        const KnotInsertion split = knot_insert(b, v->dir, v->value);
        for (const LRBSpline& child : {split.low, split.high}) {
            Key key{child.kx, child.ky};
            if (auto s = settled.find(key); s != settled.end())
                s->second += child.weight;
            else
                pending[key] += child.weight;
        }
    }

    std::vector<LRBSpline> members;
    members.reserve(settled.size());
    for (auto& [key, w] : settled) members.push_back(LRBSpline{key.first, key.second, w});
    return LRSet(std::move(finer), std::move(members));
}

double LRSet::evaluate(double x, double y) const {
    const bool left_x = x == mesh_->domain().x.hi.to_double();
    const bool left_y = y == mesh_->domain().y.hi.to_double();
    double acc = 0.0;
    for (const auto& m : members_) {
        if (x < m.kx.front().to_double() || x > m.kx.back().to_double()) continue;
        if (y < m.ky.front().to_double() || y > m.ky.back().to_double()) continue;
        acc += m.weight * m.evaluate(x, y, left_x, left_y);
    }
    return acc;
}

}  // namespace lrg
