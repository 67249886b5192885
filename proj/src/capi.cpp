#include "lrgrade.h"

#include "lrgrade/eg.hpp"
#include "lrgrade/io.hpp"
#include "lrgrade/scenario.hpp"
#include "lrgrade/shadow.hpp"
#include "lrgrade/svg.hpp"
#include "lrgrade/verify.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

struct lrg_mesh {
    lrg::MeshPtr ptr;
};

struct lrg_set {
    lrg::LRSet set;
};

namespace {

thread_local std::string t_error;

lrg_status fail(lrg_status code, const std::string& message) {
    t_error = message;
    return code;
}

lrg_status missing(const char* what) { return fail(LRG_ERR_ARGUMENT, std::string(what) + " is null"); }

/// Runs the body under the common exception-to-status mapping.
template <typename F>
lrg_status guarded(F&& body) {
    t_error.clear();
    try {
        return body();
    } catch (const lrg::ParseError& e) {
        return fail(LRG_ERR_PARSE, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(LRG_ERR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(LRG_ERR_REJECTED, e.what());
    } catch (const std::runtime_error& e) {
        return fail(LRG_ERR_REJECTED, e.what());
    } catch (const std::bad_alloc&) {
        return fail(LRG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(LRG_ERR_INTERNAL, e.what());
    }
}

char* dup_text(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

lrg::Dyadic coordinate_text(const char* text, const char* what) {
    if (!text) throw std::invalid_argument(std::string(what) + " is null");
    if (const auto d = lrg::dyadic_from_decimal(text)) return *d;
    throw lrg::ParseError(0, std::string(what) + ": `" + text + "` is not a dyadic decimal");
}

lrg::Variant variant_of(char c) {
    if (c == 'H') return lrg::Variant::horizontal_major;
    if (c == 'V') return lrg::Variant::vertical_major;
    throw std::invalid_argument(std::string("variant must be 'H' or 'V', got '") + c + "'");
}

}  // namespace

extern "C" {

const char* lrg_version(void) { return "0.1.0"; }

const char* lrg_last_error(void) { return t_error.c_str(); }

void lrg_free_text(char* text) { std::free(text); }

lrg_status lrg_mesh_tensor(const char* lo, const char* hi, int degree_x, int degree_y,
                           const char* const* interior, size_t interior_len, lrg_mesh** out) {
    if (!out) return missing("out");
    if (interior_len > 0 && !interior) return missing("interior");
    return guarded([&] {
        const lrg::Dyadic a = coordinate_text(lo, "lo"), b = coordinate_text(hi, "hi");
        std::vector<lrg::Dyadic> knots;
        knots.reserve(interior_len);
        for (size_t i = 0; i < interior_len; ++i) knots.push_back(coordinate_text(interior[i], "interior"));
        const lrg::Box domain{{a, b}, {a, b}};
        auto mesh = std::make_shared<const lrg::LRMesh>(
            lrg::LRMesh::open_tensor(domain, degree_x, degree_y, knots, knots));
        *out = new lrg_mesh{std::move(mesh)};
        return LRG_OK;
    });
}

lrg_status lrg_mesh_parse(const char* text, lrg_mesh** out) {
    if (!text) return missing("text");
    if (!out) return missing("out");
    return guarded([&] {
        auto mesh = std::make_shared<const lrg::LRMesh>(lrg::parse_mesh(text));
        *out = new lrg_mesh{std::move(mesh)};
        return LRG_OK;
    });
}

lrg_status lrg_mesh_format(const lrg_mesh* mesh, char** out_text) {
    if (!mesh) return missing("mesh");
    if (!out_text) return missing("out_text");
    return guarded([&] {
        *out_text = dup_text(lrg::format_mesh(*mesh->ptr));
        return LRG_OK;
    });
}

lrg_status lrg_mesh_stats(const lrg_mesh* mesh, size_t* out_boxes, size_t* out_lines,
                          char** out_min_side) {
    if (!mesh) return missing("mesh");
    return guarded([&] {
        const lrg::LRMesh& m = *mesh->ptr;
        if (out_boxes) *out_boxes = m.boxes().size();
        if (out_lines) *out_lines = m.lines().size();
        if (out_min_side) {
            lrg::Dyadic side = m.domain().width();
            for (const lrg::Box& b : m.boxes()) side = lrg::min(side, lrg::min(b.width(), b.height()));
            *out_min_side = dup_text(lrg::to_decimal(side));
        }
        return LRG_OK;
    });
}

void lrg_mesh_free(lrg_mesh* mesh) { delete mesh; }

lrg_status lrg_set_initial(const lrg_mesh* mesh, lrg_set** out) {
    if (!mesh) return missing("mesh");
    if (!out) return missing("out");
    return guarded([&] {
        *out = new lrg_set{lrg::LRSet::initial(mesh->ptr)};
        return LRG_OK;
    });
}

lrg_status lrg_set_parse(const char* text, const lrg_mesh* mesh, lrg_set** out) {
    if (!text) return missing("text");
    if (!mesh) return missing("mesh");
    if (!out) return missing("out");
    return guarded([&] {
        *out = new lrg_set{lrg::parse_set(text, mesh->ptr)};
        return LRG_OK;
    });
}

lrg_status lrg_set_format(const lrg_set* set, char** out_text) {
    if (!set) return missing("set");
    if (!out_text) return missing("out_text");
    return guarded([&] {
        *out_text = dup_text(lrg::format_set(set->set));
        return LRG_OK;
    });
}

lrg_status lrg_set_mesh(const lrg_set* set, lrg_mesh** out) {
    if (!set) return missing("set");
    if (!out) return missing("out");
    return guarded([&] {
        *out = new lrg_mesh{set->set.mesh_ptr()};
        return LRG_OK;
    });
}

lrg_status lrg_set_size(const lrg_set* set, size_t* out) {
    if (!set) return missing("set");
    if (!out) return missing("out");
    *out = set->set.size();
    t_error.clear();
    return LRG_OK;
}

void lrg_set_free(lrg_set* set) { delete set; }

lrg_status lrg_refine(const lrg_set* set, const char* region_json, char variant,
                      size_t* out_region_boxes, lrg_set** out) {
    if (!set) return missing("set");
    if (!region_json) return missing("region_json");
    if (!out) return missing("out");
    return guarded([&] {
        const lrg::Variant v = variant_of(variant);
        const lrg::RegionSpec spec = lrg::parse_region_json(region_json);
        std::vector<lrg::Box> region = lrg::rasterize(set->set.mesh(), spec);
        if (region.empty()) throw std::runtime_error("region rasterized to no boxes");
        lrg::LRSet next = lrg::eg_iterate(set->set, region, v);
        if (out_region_boxes) *out_region_boxes = region.size();
        *out = new lrg_set{std::move(next)};
        return LRG_OK;
    });
}

lrg_status lrg_verify_json(const lrg_set* set, int pou_samples, unsigned long long seed,
                           char** out_json, int* out_pass) {
    if (!set) return missing("set");
    if (!out_json && !out_pass) return missing("out_json");
    return guarded([&] {
        lrg::VerifyOptions opt;
        if (pou_samples > 0) opt.pou_samples = pou_samples;
        opt.seed = seed;
        const lrg::VerifyReport report = lrg::verify_set(set->set, opt);
        if (out_json) *out_json = dup_text(lrg::report_json(report, set->set));
        if (out_pass) *out_pass = report.pass ? 1 : 0;
        return LRG_OK;
    });
}

lrg_status lrg_render_svg(const lrg_mesh* mesh, const lrg_set* set, const char* options_json,
                          char** out_svg) {
    if (!mesh) return missing("mesh");
    if (!out_svg) return missing("out_svg");
    return guarded([&] {
        lrg::RenderOptions opt;
        if (options_json) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(options_json);
            } catch (const nlohmann::json::exception& e) {
                throw lrg::ParseError(0, std::string("options: ") + e.what());
            }
            if (!j.is_object()) throw lrg::ParseError(0, "options: expected a JSON object");
            for (const auto& [key, value] : j.items()) {
                if (key == "size") {
                    opt.size = value.get<double>();
                    if (!(opt.size > 0)) throw std::invalid_argument("options size: must be positive");
                } else if (key == "margin") {
                    opt.margin = value.get<double>();
                    if (!(opt.margin >= 0)) throw std::invalid_argument("options margin: must be nonnegative");
                } else if (key == "region") {
                    opt.region = lrg::rasterize(*mesh->ptr, lrg::parse_region_json(value.dump()));
                } else if (key == "shadow_dir") {
                    // handled below, after the region is known
                } else if (key == "support") {
                    if (!set) throw std::invalid_argument("options support: no set supplied");
                    const size_t i = value.get<size_t>();
                    if (i >= set->set.size())
                        throw std::invalid_argument("options support: member index out of range");
                    opt.support = set->set.members()[i];
                } else {
                    throw lrg::ParseError(0, "options: unknown key `" + key + "`");
                }
            }
            if (j.contains("shadow_dir")) {
                const std::string d = j.at("shadow_dir").get<std::string>();
                if (d != "H" && d != "V")
                    throw lrg::ParseError(0, "options shadow_dir: expected \"H\" or \"V\"");
                if (opt.region.empty())
                    throw std::invalid_argument("options shadow_dir: requires a region");
                const lrg::Dir dir = d == "H" ? lrg::Dir::horizontal : lrg::Dir::vertical;
                opt.shadow =
                    lrg::generalized_shadow(*mesh->ptr, opt.region, dir, mesh->ptr->degree(dir));
            }
        }
        *out_svg = dup_text(lrg::render_svg(*mesh->ptr, opt));
        return LRG_OK;
    });
}

}  // extern "C"
