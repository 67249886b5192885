#include "lrgrade/scenario.hpp"

#include "lrgrade/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>

namespace lrg {

namespace {

constexpr double pi = 3.14159265358979323846;

struct Frame {
    double ox, oy, side;  // unit square -> domain
    double px(double u) const { return ox + side * u; }
    double py(double v) const { return oy + side * v; }
};

Frame frame_of(const Box& domain) {
    return {domain.x.lo.to_double(), domain.y.lo.to_double(), (domain.x.hi - domain.x.lo).to_double()};
}

/// Piecewise-linear closed polyline through unit-coordinate vertices.
std::pair<double, double> on_polyline(const std::vector<std::pair<double, double>>& verts, double t) {
    const double scaled = t * static_cast<double>(verts.size());
    const std::size_t leg = std::min(static_cast<std::size_t>(scaled), verts.size() - 1);
    const double f = scaled - static_cast<double>(leg);
    const auto& a = verts[leg];
    const auto& b = verts[(leg + 1) % verts.size()];
    return {a.first + f * (b.first - a.first), a.second + f * (b.second - a.second)};
}

std::pair<double, double> curve_point(const std::string& curve, double t) {
    if (curve == "circle") return {0.5 + 0.3 * std::cos(2 * pi * t), 0.5 + 0.3 * std::sin(2 * pi * t)};
    if (curve == "bean") {
        const double a = 2 * pi * t;
        const double r = 0.26 + 0.10 * std::cos(a) + 0.06 * std::sin(2 * a);
        return {0.5 + r * std::cos(a), 0.5 + r * std::sin(a)};
    }
    if (curve == "square")
        return on_polyline({{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}}, t);
    if (curve == "triangle") return on_polyline({{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.8}}, t);
    if (curve == "diagonal") return {t, t};
    throw std::invalid_argument("unknown preset curve `" + curve + "`");
}

bool box_contains(const Box& b, double x, double y) {
    return b.x.lo.to_double() <= x && x <= b.x.hi.to_double() && b.y.lo.to_double() <= y &&
           y <= b.y.hi.to_double();
}

double dist_to_box(const Box& b, double x, double y) {
    const double dx = std::max({b.x.lo.to_double() - x, 0.0, x - b.x.hi.to_double()});
    const double dy = std::max({b.y.lo.to_double() - y, 0.0, y - b.y.hi.to_double()});
    return std::hypot(dx, dy);
}

/// min over the segment of the (convex in t) distance to the box.
double dist_box_segment(const Box& b, double x0, double y0, double x1, double y1) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 100; ++i) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        const double d1 = dist_to_box(b, x0 + m1 * (x1 - x0), y0 + m1 * (y1 - y0));
        const double d2 = dist_to_box(b, x0 + m2 * (x1 - x0), y0 + m2 * (y1 - y0));
        if (d1 <= d2)
            hi = m2;
        else
            lo = m1;
    }
    const double tm = (lo + hi) / 2;
    return dist_to_box(b, x0 + tm * (x1 - x0), y0 + tm * (y1 - y0));
}

std::vector<Box> curve_boxes(const LRMesh& mesh, const std::string& curve) {
    const Frame fr = frame_of(mesh.domain());
    std::set<Box> marked;
    int stable = 0;
    for (int n = 256; stable < 2 && n <= (1 << 20); n *= 2) {
        std::set<Box> now;
        for (int i = 0; i < n; ++i) {
            const auto [u, v] = curve_point(curve, (i + 0.5) / n);
            const double x = fr.px(u), y = fr.py(v);
            for (const Box& b : mesh.boxes())
                if (box_contains(b, x, y)) now.insert(b);
        }
        stable = now == marked ? stable + 1 : 0;
        marked.swap(now);
    }
    return {marked.begin(), marked.end()};
}

nlohmann::json must_get(const nlohmann::json& j, const char* key, const char* where) {
    if (!j.contains(key)) throw ParseError(0, std::string(where) + ": missing `" + key + "`");
    return j.at(key);
}

Dyadic coordinate(const nlohmann::json& j, const char* where) {
    if (j.is_string()) {
        if (const auto d = dyadic_from_decimal(j.get<std::string>())) return *d;
        throw ParseError(0, std::string(where) + ": `" + j.get<std::string>() + "` is not a dyadic decimal");
    }
    if (j.is_number()) {
        try {
            return Dyadic::from_double(j.get<double>());
        } catch (const std::exception&) {
            throw ParseError(0, std::string(where) + ": value does not convert exactly");
        }
    }
    throw ParseError(0, std::string(where) + ": expected a number or decimal string");
}

double real(const nlohmann::json& j, const char* where) {
    if (!j.is_number()) throw ParseError(0, std::string(where) + ": expected a number");
    return j.get<double>();
}

RegionSpec parse_region(const nlohmann::json& j) {
    if (!j.is_object() || j.size() != 1)
        throw ParseError(0, "region: expected exactly one of boxes/rect/disk/band/curve");
    RegionSpec spec;
    if (j.contains("boxes")) {
        spec.kind = RegionSpec::Kind::boxes;
        for (const auto& arr : j.at("boxes")) {
            if (!arr.is_array() || arr.size() != 4) throw ParseError(0, "region boxes: expected [x0,y0,x1,y1]");
            spec.boxes.push_back(Box{{coordinate(arr[0], "region boxes"), coordinate(arr[2], "region boxes")},
                                     {coordinate(arr[1], "region boxes"), coordinate(arr[3], "region boxes")}});
        }
    } else if (j.contains("rect")) {
        const auto& a = j.at("rect");
        if (!a.is_array() || a.size() != 4) throw ParseError(0, "region rect: expected [x0,y0,x1,y1]");
        spec.kind = RegionSpec::Kind::rect;
        spec.x0 = real(a[0], "rect");
        spec.y0 = real(a[1], "rect");
        spec.x1 = real(a[2], "rect");
        spec.y1 = real(a[3], "rect");
    } else if (j.contains("disk")) {
        const auto& a = j.at("disk");
        if (!a.is_array() || a.size() != 3) throw ParseError(0, "region disk: expected [cx,cy,r]");
        spec.kind = RegionSpec::Kind::disk;
        spec.cx = real(a[0], "disk");
        spec.cy = real(a[1], "disk");
        spec.radius = real(a[2], "disk");
    } else if (j.contains("band")) {
        const auto& a = j.at("band");
        if (!a.is_array() || a.size() != 5) throw ParseError(0, "region band: expected [x0,y0,x1,y1,half_width]");
        spec.kind = RegionSpec::Kind::band;
        spec.x0 = real(a[0], "band");
        spec.y0 = real(a[1], "band");
        spec.x1 = real(a[2], "band");
        spec.y1 = real(a[3], "band");
        spec.half_width = real(a[4], "band");
    } else if (j.contains("curve")) {
        spec.kind = RegionSpec::Kind::curve;
        if (!j.at("curve").is_string()) throw ParseError(0, "region curve: expected a preset name");
        spec.curve = j.at("curve").get<std::string>();
        try {
            curve_point(spec.curve, 0.0);  // reject unknown names up front
        } catch (const std::invalid_argument& e) {
            throw ParseError(0, std::string("region curve: ") + e.what());
        }
    } else {
        throw ParseError(0, "region: expected one of boxes/rect/disk/band/curve");
    }
    return spec;
}

}  // namespace

std::vector<Box> rasterize(const LRMesh& mesh, const RegionSpec& spec) {
    std::vector<Box> out;
    switch (spec.kind) {
        case RegionSpec::Kind::boxes:
            for (const Box& b : mesh.boxes())
                for (const Box& s : spec.boxes)
                    if (!(b.x.hi < s.x.lo || s.x.hi < b.x.lo || b.y.hi < s.y.lo || s.y.hi < b.y.lo)) {
                        out.push_back(b);
                        break;
                    }
            break;
        case RegionSpec::Kind::rect:
            for (const Box& b : mesh.boxes())
                if (b.x.lo.to_double() <= spec.x1 && spec.x0 <= b.x.hi.to_double() &&
                    b.y.lo.to_double() <= spec.y1 && spec.y0 <= b.y.hi.to_double())
                    out.push_back(b);
            break;
        case RegionSpec::Kind::disk:
            for (const Box& b : mesh.boxes())
                if (dist_to_box(b, spec.cx, spec.cy) <= spec.radius) out.push_back(b);
            break;
        case RegionSpec::Kind::band:
            for (const Box& b : mesh.boxes())
                if (dist_box_segment(b, spec.x0, spec.y0, spec.x1, spec.y1) <= spec.half_width) out.push_back(b);
            break;
        case RegionSpec::Kind::curve:
            out = curve_boxes(mesh, spec.curve);
            break;
    }
    return out;
}

RegionSpec parse_region_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("region: ") + e.what());
    }
    return parse_region(j);
}

Scenario parse_scenario(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("scenario: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(0, "scenario: expected a JSON object");

    Scenario sc;
    const auto dom = must_get(j, "domain", "scenario");
    if (!dom.is_array() || dom.size() != 2) throw ParseError(0, "scenario domain: expected [a, b]");
    const Dyadic a = coordinate(dom[0], "domain"), b = coordinate(dom[1], "domain");
    if (!(a < b)) throw ParseError(0, "scenario domain: a must be below b");
    sc.domain = Box{{a, b}, {a, b}};

    const auto deg = must_get(j, "degree", "scenario");
    if (!deg.is_array() || deg.size() != 2 || !deg[0].is_number_integer() || !deg[1].is_number_integer())
        throw ParseError(0, "scenario degree: expected [p1, p2]");
    sc.degree_x = deg[0].get<int>();
    sc.degree_y = deg[1].get<int>();
    if (sc.degree_x < 0 || sc.degree_y < 0) throw ParseError(0, "scenario degree: must be nonnegative");

    const auto var = must_get(j, "variant", "scenario");
    if (var == "H")
        sc.variant = Variant::horizontal_major;
    else if (var == "V")
        sc.variant = Variant::vertical_major;
    else
        throw ParseError(0, "scenario variant: expected \"H\" or \"V\"");

    if (j.contains("start_interior"))
        for (const auto& v : j.at("start_interior")) sc.start_interior.push_back(coordinate(v, "start_interior"));

    if (j.contains("steps")) {
        if (!j.at("steps").is_array()) throw ParseError(0, "scenario steps: expected an array");
        for (const auto& s : j.at("steps")) sc.steps.push_back({parse_region(must_get(s, "region", "step"))});
    }
    return sc;
}

LRSet initial_set(const Scenario& sc) {
    auto mesh = std::make_shared<const LRMesh>(
        LRMesh::open_tensor(sc.domain, sc.degree_x, sc.degree_y, sc.start_interior, sc.start_interior));
    return LRSet::initial(std::move(mesh));
}

std::vector<StepOutcome> run_scenario(const Scenario& sc) {
    LRSet set = initial_set(sc);
    std::vector<StepOutcome> out;
    out.reserve(sc.steps.size());
    for (std::size_t i = 0; i < sc.steps.size(); ++i) {
        std::vector<Box> region = rasterize(set.mesh(), sc.steps[i].region);
        if (region.empty())
            throw std::runtime_error("step " + std::to_string(i) + ": region rasterized to no boxes");
        set = eg_iterate(set, region, sc.variant);
        out.push_back({std::move(region), set});
    }
    return out;
}

}  // namespace lrg
