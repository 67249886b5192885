#include "lrgrade/svg.hpp"

#include <charconv>
#include <sstream>

namespace lrg {

namespace {

/// Shortest round-trip decimal; keeps the output identical run to run.
std::string px(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

class Canvas {
public:
    Canvas(const Box& domain, const RenderOptions& opt)
        : lo_(domain.x.lo.to_double()),
          scale_(opt.size / (domain.x.hi.to_double() - lo_)),
          size_(opt.size),
          margin_(opt.margin) {}

    // SVG y grows downward; the domain is drawn in the usual orientation
    double x(const Dyadic& v) const { return margin_ + (v.to_double() - lo_) * scale_; }
    double y(const Dyadic& v) const { return margin_ + size_ - (v.to_double() - lo_) * scale_; }

    std::string rect(const Box& b, const char* style) const {
        std::ostringstream s;
        s << "  <rect x=\"" << px(x(b.x.lo)) << "\" y=\"" << px(y(b.y.hi)) << "\" width=\""
          << px((b.x.hi - b.x.lo).to_double() * scale_) << "\" height=\""
          << px((b.y.hi - b.y.lo).to_double() * scale_) << "\" " << style << "/>\n";
        return s.str();
    }

    std::string line(double x1, double y1, double x2, double y2, const std::string& style) const {
        std::ostringstream s;
        s << "  <line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2) << "\" y2=\"" << px(y2)
          << "\" " << style << "/>\n";
        return s.str();
    }

private:
    double lo_, scale_, size_, margin_;
};

}  // namespace

std::string render_svg(const LRMesh& mesh, const RenderOptions& opt) {
    const Canvas c(mesh.domain(), opt);
    const double side = opt.size + 2 * opt.margin;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(side) << "\" height=\"" << px(side)
        << "\" viewBox=\"0 0 " << px(side) << " " << px(side) << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << px(side) << "\" height=\"" << px(side) << "\" fill=\"white\"/>\n";

    for (const Box& b : opt.region) out << c.rect(b, "fill=\"#d9d9d9\"");
    for (const Box& b : opt.shadow) out << c.rect(b, "fill=\"#bcd8ee\"");

    for (const Meshline& l : mesh.lines()) {
        const std::string style = "stroke=\"black\" stroke-width=\"" + px(1.0 + 0.8 * (l.mult - 1)) + "\"";
        if (l.dir == Dir::horizontal)
            out << c.line(c.x(l.span.lo), c.y(l.fixed), c.x(l.span.hi), c.y(l.fixed), style);
        else
            out << c.line(c.x(l.fixed), c.y(l.span.lo), c.x(l.fixed), c.y(l.span.hi), style);
    }

    if (opt.support) {
        const LRBSpline& m = *opt.support;
        const LocalMesh lm = local_mesh(m);
        const Box sup = m.support();
        const std::string grid = "stroke=\"#c03028\" stroke-width=\"1.2\" stroke-dasharray=\"5 3\"";
        for (const Dyadic& v : lm.xs)
            if (sup.x.lo < v && v < sup.x.hi) out << c.line(c.x(v), c.y(sup.y.lo), c.x(v), c.y(sup.y.hi), grid);
        for (const Dyadic& v : lm.ys)
            if (sup.y.lo < v && v < sup.y.hi) out << c.line(c.x(sup.x.lo), c.y(v), c.x(sup.x.hi), c.y(v), grid);
        out << c.rect(sup, "fill=\"none\" stroke=\"#c03028\" stroke-width=\"2.4\"");
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace lrg
