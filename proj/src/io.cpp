#include "lrgrade/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

namespace lrg {

namespace {

constexpr const char* mesh_magic = "LRMESH v1";
constexpr const char* set_magic = "LRSET v1";

std::string weight_text(double w) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, w);
    return std::string(buf, res.ptr);
}

/// Whitespace-token cursor over one input line.
class Cursor {
public:
    Cursor(int line_no, std::string_view text) : line_no_(line_no), text_(text) {}

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_no_, message); }

    std::string_view next(const char* what) {
        while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
        if (pos_ == text_.size()) fail(std::string("missing ") + what);
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ' ') ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void expect(const char* token) {
        if (next(token) != token) fail(std::string("expected `") + token + "`");
    }

    Dyadic coord(const char* what) {
        const std::string_view t = next(what);
        if (const auto d = dyadic_from_decimal(t)) return *d;
        fail(std::string(what) + " `" + std::string(t) + "` is not a dyadic decimal");
    }

    int integer(const char* what) {
        const std::string_view t = next(what);
        int v = 0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
            fail(std::string(what) + " `" + std::string(t) + "` is not an integer");
        return v;
    }

    double real(const char* what) {
        const std::string_view t = next(what);
        double v = 0.0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
            fail(std::string(what) + " `" + std::string(t) + "` is not a number");
        return v;
    }

    void end() {
        while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
        if (pos_ != text_.size()) fail("trailing text `" + std::string(text_.substr(pos_)) + "`");
    }

    int line_no() const { return line_no_; }

private:
    int line_no_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

/// Nonblank lines with their 1-based numbers; first must equal the magic.
std::vector<Cursor> significant_lines(const std::string& text, const char* magic) {
    std::vector<Cursor> out;
    int line_no = 0;
    std::size_t pos = 0;
    bool saw_magic = false;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::size_t end = nl == std::string::npos ? text.size() : nl;
        std::string_view line(text.data() + pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (!line.empty()) {
            if (!saw_magic) {
                if (line != magic) throw ParseError(line_no, std::string("expected `") + magic + "` header");
                saw_magic = true;
            } else {
                out.emplace_back(line_no, line);
            }
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    if (!saw_magic) throw ParseError(1, std::string("expected `") + magic + "` header");
    return out;
}

}  // namespace

ParseError::ParseError(int line_no, const std::string& message)
    : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + message : message),
      line_no_(line_no) {}

std::string format_mesh(const LRMesh& mesh) {
    std::ostringstream out;
    out << mesh_magic << "\n";
    out << "domain " << to_decimal(mesh.domain().x.lo) << " " << to_decimal(mesh.domain().x.hi) << "\n";
    out << "degree " << mesh.degree_x() << " " << mesh.degree_y() << "\n";
    for (const Meshline& l : mesh.lines())
        out << "line " << name(l.dir) << " " << to_decimal(l.fixed) << " " << to_decimal(l.span.lo) << " "
            << to_decimal(l.span.hi) << " " << l.mult << "\n";
    return out.str();
}

LRMesh parse_mesh(const std::string& text) {
    const auto rows = significant_lines(text, mesh_magic);
    if (rows.size() < 2) throw ParseError(0, "truncated mesh: domain and degree headers required");

    Cursor dom = rows[0];
    dom.expect("domain");
    const Dyadic a = dom.coord("domain low");
    const Dyadic b = dom.coord("domain high");
    dom.end();
    if (!(a < b)) dom.fail("domain low must be below domain high");

    Cursor deg = rows[1];
    deg.expect("degree");
    const int p1 = deg.integer("degree p1");
    const int p2 = deg.integer("degree p2");
    deg.end();
    if (p1 < 0 || p2 < 0) deg.fail("degrees must be nonnegative");

    std::vector<Meshline> lines;
    for (std::size_t i = 2; i < rows.size(); ++i) {
        Cursor c = rows[i];
        c.expect("line");
        const std::string_view d = c.next("direction");
        Meshline l;
        if (d == "H")
            l.dir = Dir::horizontal;
        else if (d == "V")
            l.dir = Dir::vertical;
        else
            c.fail("direction `" + std::string(d) + "` is not H or V");
        l.fixed = c.coord("fixed coordinate");
        l.span.lo = c.coord("span low");
        l.span.hi = c.coord("span high");
        l.mult = c.integer("multiplicity");
        c.end();
        if (!(l.span.lo < l.span.hi)) c.fail("span low must be below span high");
        if (l.mult < 1) c.fail("multiplicity must be positive");
        lines.push_back(l);
    }

    const Box domain{{a, b}, {a, b}};
    try {
        return LRMesh::from_lines(domain, p1, p2, std::move(lines));
    } catch (const std::exception& e) {
        throw ParseError(0, std::string("mesh rejected: ") + e.what());
    }
}

std::string format_set(const LRSet& set) {
    std::ostringstream out;
    out << set_magic << "\n";
    for (const LRBSpline& m : set.members()) {
        out << "bspline x:";
        for (const Dyadic& k : m.kx) out << " " << to_decimal(k);
        out << " y:";
        for (const Dyadic& k : m.ky) out << " " << to_decimal(k);
        out << " w: " << weight_text(m.weight) << "\n";
    }
    return out.str();
}

LRSet parse_set(const std::string& text, MeshPtr mesh) {
    if (!mesh) throw std::invalid_argument("parse_set: null mesh");
    const auto rows = significant_lines(text, set_magic);

    std::vector<LRBSpline> members;
    members.reserve(rows.size());
    for (Cursor c : rows) {
        c.expect("bspline");
        c.expect("x:");
        LRBSpline b;
        for (int i = 0; i < mesh->degree_x() + 2; ++i) b.kx.push_back(c.coord("x knot"));
        c.expect("y:");
        for (int i = 0; i < mesh->degree_y() + 2; ++i) b.ky.push_back(c.coord("y knot"));
        c.expect("w:");
        b.weight = c.real("weight");
        c.end();
        members.push_back(std::move(b));
    }

    try {
        return LRSet::from_members(std::move(mesh), std::move(members));
    } catch (const std::exception& e) {
        throw ParseError(0, std::string("set rejected: ") + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw std::runtime_error("cannot read " + path);
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out.good()) throw std::runtime_error("cannot write " + path);
}

}  // namespace lrg
