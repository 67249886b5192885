// lr-grade: drive the grading library from scenario files on disk.
// Talks to the library through the C interface only.

#include <lrgrade.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct MeshFree {
    void operator()(lrg_mesh* m) const { lrg_mesh_free(m); }
};
struct SetFree {
    void operator()(lrg_set* s) const { lrg_set_free(s); }
};
using MeshHandle = std::unique_ptr<lrg_mesh, MeshFree>;
using SetHandle = std::unique_ptr<lrg_set, SetFree>;

/// Text from the library, released through lrg_free_text.
struct Text {
    char* p = nullptr;
    Text() = default;
    Text(const Text&) = delete;
    Text& operator=(const Text&) = delete;
    ~Text() { lrg_free_text(p); }
    std::string str() const { return p ? p : ""; }
};

[[noreturn]] void die(const std::string& context) {
    throw std::runtime_error(context + ": " + lrg_last_error());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

/// Scenario file reduced to what the C interface consumes: coordinates stay
/// text, regions stay JSON.
struct Config {
    std::string lo, hi;
    int degree_x = 2, degree_y = 2;
    char variant = 'H';
    std::vector<std::string> interior;
    std::vector<json> regions;
};

std::string coordinate_text(const json& v, const char* what) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw std::runtime_error(std::string(what) + ": expected a number or decimal string");
}

Config load_config(const fs::path& path, const std::vector<int>& degree_override,
                   const std::string& variant_override) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw std::runtime_error(path.string() + ": expected a JSON object");

    Config cfg;
    if (!j.contains("domain") || !j.at("domain").is_array() || j.at("domain").size() != 2)
        throw std::runtime_error(path.string() + ": domain: expected [a, b]");
    cfg.lo = coordinate_text(j.at("domain")[0], "domain");
    cfg.hi = coordinate_text(j.at("domain")[1], "domain");

    if (!j.contains("degree") || !j.at("degree").is_array() || j.at("degree").size() != 2)
        throw std::runtime_error(path.string() + ": degree: expected [p1, p2]");
    cfg.degree_x = j.at("degree")[0].get<int>();
    cfg.degree_y = j.at("degree")[1].get<int>();

    const std::string variant = j.value("variant", "H");
    if (variant != "H" && variant != "V")
        throw std::runtime_error(path.string() + ": variant: expected \"H\" or \"V\"");
    cfg.variant = variant[0];

    if (j.contains("start_interior"))
        for (const auto& v : j.at("start_interior")) cfg.interior.push_back(coordinate_text(v, "start_interior"));

    if (j.contains("steps"))
        for (const auto& s : j.at("steps")) {
            if (!s.is_object() || !s.contains("region"))
                throw std::runtime_error(path.string() + ": every step needs a region");
            cfg.regions.push_back(s.at("region"));
        }

    if (!degree_override.empty()) {
        cfg.degree_x = degree_override[0];
        cfg.degree_y = degree_override[1];
    }
    if (!variant_override.empty()) cfg.variant = variant_override[0];
    return cfg;
}

MeshHandle initial_mesh(const Config& cfg) {
    std::vector<const char*> interior;
    interior.reserve(cfg.interior.size());
    for (const std::string& k : cfg.interior) interior.push_back(k.c_str());
    lrg_mesh* mesh = nullptr;
    if (lrg_mesh_tensor(cfg.lo.c_str(), cfg.hi.c_str(), cfg.degree_x, cfg.degree_y, interior.data(),
                        interior.size(), &mesh) != LRG_OK)
        die("initial mesh");
    return MeshHandle(mesh);
}

SetHandle initial_set(const lrg_mesh* mesh) {
    lrg_set* set = nullptr;
    if (lrg_set_initial(mesh, &set) != LRG_OK) die("initial set");
    return SetHandle(set);
}

struct Stats {
    size_t boxes = 0, lines = 0, members = 0;
    std::string min_side;
};

Stats stats_of(const lrg_set* set) {
    Stats st;
    lrg_mesh* mesh = nullptr;
    if (lrg_set_mesh(set, &mesh) != LRG_OK) die("mesh of set");
    const MeshHandle owner(mesh);
    Text min_side;
    if (lrg_mesh_stats(mesh, &st.boxes, &st.lines, &min_side.p) != LRG_OK) die("mesh stats");
    if (lrg_set_size(set, &st.members) != LRG_OK) die("set size");
    st.min_side = min_side.str();
    return st;
}

void write_state(const fs::path& dir, const std::string& stem, const lrg_set* set) {
    lrg_mesh* mesh = nullptr;
    if (lrg_set_mesh(set, &mesh) != LRG_OK) die("mesh of set");
    const MeshHandle owner(mesh);
    Text mesh_text, set_text;
    if (lrg_mesh_format(mesh, &mesh_text.p) != LRG_OK) die("format mesh");
    if (lrg_set_format(set, &set_text.p) != LRG_OK) die("format set");
    write_file(dir / (stem + ".lrmesh"), mesh_text.str());
    write_file(dir / (stem + ".lrset"), set_text.str());
}

std::string step_stem(size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "step_%02zu", k);
    return buf;
}

int cmd_init(const Config& cfg, const fs::path& out) {
    fs::create_directories(out);
    const MeshHandle mesh = initial_mesh(cfg);
    const SetHandle set = initial_set(mesh.get());
    write_state(out, "initial", set.get());
    const Stats st = stats_of(set.get());
    std::cout << "initial: boxes=" << st.boxes << " members=" << st.members << " min_side=" << st.min_side
              << "\n";
    return 0;
}

int cmd_refine(const Config& cfg, const fs::path& out) {
    fs::create_directories(out);
    const MeshHandle mesh = initial_mesh(cfg);
    SetHandle set = initial_set(mesh.get());
    write_state(out, "initial", set.get());

    std::ostringstream csv;
    csv << "step,region_boxes,mesh_boxes,mesh_lines,members,min_box_side\n";
    const Stats first = stats_of(set.get());
    csv << "initial,0," << first.boxes << "," << first.lines << "," << first.members << "," << first.min_side
        << "\n";

    for (size_t k = 0; k < cfg.regions.size(); ++k) {
        size_t region_boxes = 0;
        lrg_set* next = nullptr;
        if (lrg_refine(set.get(), cfg.regions[k].dump().c_str(), cfg.variant, &region_boxes, &next) != LRG_OK)
            die("step " + std::to_string(k));
        set.reset(next);
        write_state(out, step_stem(k), set.get());
        const Stats st = stats_of(set.get());
        csv << step_stem(k) << "," << region_boxes << "," << st.boxes << "," << st.lines << "," << st.members
            << "," << st.min_side << "\n";
        std::cout << step_stem(k) << ": region=" << region_boxes << " boxes=" << st.boxes
                  << " members=" << st.members << " min_side=" << st.min_side << "\n";
    }
    write_file(out / "stats.csv", csv.str());
    return 0;
}

/// Sorted .lrset/.lrmesh stems present in the directory.
std::vector<std::string> state_stems(const fs::path& out) {
    std::vector<std::string> stems;
    if (!fs::is_directory(out)) throw std::runtime_error(out.string() + " is not a directory");
    for (const auto& entry : fs::directory_iterator(out))
        if (entry.path().extension() == ".lrset") stems.push_back(entry.path().stem().string());
    std::sort(stems.begin(), stems.end());
    return stems;
}

SetHandle load_state(const fs::path& out, const std::string& stem) {
    lrg_mesh* mesh = nullptr;
    if (lrg_mesh_parse(read_file(out / (stem + ".lrmesh")).c_str(), &mesh) != LRG_OK)
        die(stem + ".lrmesh");
    const MeshHandle owner(mesh);
    lrg_set* set = nullptr;
    if (lrg_set_parse(read_file(out / (stem + ".lrset")).c_str(), mesh, &set) != LRG_OK)
        die(stem + ".lrset");
    return SetHandle(set);
}

int cmd_verify(const fs::path& out, unsigned long long seed) {
    const std::vector<std::string> stems = state_stems(out);
    if (stems.empty()) throw std::runtime_error("no .lrset files in " + out.string());
    bool all_pass = true;
    for (const std::string& stem : stems) {
        const SetHandle set = load_state(out, stem);
        Text report;
        int pass = 0;
        if (lrg_verify_json(set.get(), 0, seed, &report.p, &pass) != LRG_OK) die(stem);
        write_file(out / (stem + ".report.json"), report.str());
        std::cout << stem << ": " << (pass ? "pass" : "FAIL") << "\n";
        all_pass = all_pass && pass;
    }
    return all_pass ? 0 : 1;
}

int cmd_render(const std::optional<Config>& cfg, const fs::path& out) {
    const std::vector<std::string> stems = state_stems(out);
    if (stems.empty()) throw std::runtime_error("no .lrset files in " + out.string());

    // overlay each state with the region its next step will refine
    std::map<std::string, json> region_of;
    if (cfg) {
        for (size_t k = 0; k < cfg->regions.size(); ++k)
            region_of[k == 0 ? "initial" : step_stem(k - 1)] = cfg->regions[k];
    }

    for (const std::string& stem : stems) {
        lrg_mesh* mesh = nullptr;
        if (lrg_mesh_parse(read_file(out / (stem + ".lrmesh")).c_str(), &mesh) != LRG_OK)
            die(stem + ".lrmesh");
        const MeshHandle owner(mesh);
        std::string options;
        if (const auto hit = region_of.find(stem); hit != region_of.end())
            options = json{{"region", hit->second}}.dump();
        Text svg;
        if (lrg_render_svg(mesh, nullptr, options.empty() ? nullptr : options.c_str(), &svg.p) != LRG_OK)
            die(stem);
        write_file(out / (stem + ".svg"), svg.str());
        std::cout << stem << ".svg\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LR mesh grading driver (library " + std::string(lrg_version()) + ")"};
    app.require_subcommand(1);

    std::string config_path, out_dir, variant;
    std::vector<int> degree;
    unsigned long long seed = 0x5ba22e;

    const auto add_shared = [&](CLI::App* cmd, bool config_required) {
        auto* c = cmd->add_option("--config", config_path, "scenario JSON file");
        if (config_required) c->required();
        cmd->add_option("--out", out_dir, "output directory")->required();
        cmd->add_option("--variant", variant, "override the scenario's H|V alternation")
            ->check(CLI::IsMember({"H", "V"}));
        cmd->add_option("--degree", degree, "override the scenario's bidegree")->expected(2);
        cmd->add_option("--seed", seed, "verification sample seed");
    };

    CLI::App* init = app.add_subcommand("init", "write the scenario's initial mesh and member set");
    CLI::App* refine = app.add_subcommand("refine", "run every scenario step, writing states and stats");
    CLI::App* verify = app.add_subcommand("verify", "check every written state, writing reports");
    CLI::App* render = app.add_subcommand("render", "draw every written state to SVG");
    add_shared(init, true);
    add_shared(refine, true);
    add_shared(verify, false);
    add_shared(render, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (init->parsed() || refine->parsed()) {
            const Config cfg = load_config(config_path, degree, variant);
            return init->parsed() ? cmd_init(cfg, out_dir) : cmd_refine(cfg, out_dir);
        }
        if (verify->parsed()) return cmd_verify(out_dir, seed);
        std::optional<Config> cfg;
        if (!config_path.empty()) cfg = load_config(config_path, degree, variant);
        return cmd_render(cfg, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "lr-grade: " << e.what() << "\n";
        return 1;
    }
}
