#include "shipctl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "shipctl/numfmt.hpp"

namespace shipctl {

namespace {

constexpr const char* kPalette[] = {"#1f6fb4", "#d1495b", "#2e933c", "#8332ac",
                                    "#e08f1e", "#21a0a0", "#6b4c2a", "#52525b"};

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

// pixel coordinates rounded to 1/100 so the output stays short and stable
void append_px(std::string& out, double v) {
    append_double(out, std::round(v * 100.0) / 100.0);
}

struct Range {
    double lo;
    double hi;
    double span() const { return hi - lo; }
};

Range padded(Range r) {
    if (r.hi == r.lo) {
        const double d = r.hi != 0 ? 0.1 * std::abs(r.hi) : 1.0;
        return {r.lo - d, r.hi + d};
    }
    const double d = 0.04 * r.span();
    return {r.lo - d, r.hi + d};
}

// 1-2-5 tick step targeting about six intervals
double nice_step(double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step;
    if (frac <= 1.0) step = 1.0;
    else if (frac <= 2.0) step = 2.0;
    else if (frac <= 5.0) step = 5.0;
    else step = 10.0;
    return step * mag;
}

std::vector<double> ticks(const Range& r) {
    const double step = nice_step(r.span());
    std::vector<double> out;
    double v = std::ceil(r.lo / step) * step;
    for (; v <= r.hi + 1e-9 * r.span(); v += step) {
        if (std::abs(v) < 1e-12 * r.span()) v = 0.0;  // avoid "-0" labels
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string render_svg(std::span<const PlotSeries> series, const AxesSpec& axes) {
    if (series.empty()) throw std::invalid_argument("render_svg: no series");
    for (const PlotSeries& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("render_svg: series '" + s.label +
                                        "' has mismatched x/y sizes");
        if (s.x.size() < 2)
            throw std::invalid_argument("render_svg: series '" + s.label +
                                        "' needs at least two points");
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                throw std::invalid_argument("render_svg: series '" + s.label +
                                            "' has non-finite points");
    }

    Range rx{series[0].x[0], series[0].x[0]};
    Range ry{series[0].y[0], series[0].y[0]};
    for (const PlotSeries& s : series) {
        for (double v : s.x) {
            rx.lo = std::min(rx.lo, v);
            rx.hi = std::max(rx.hi, v);
        }
        for (double v : s.y) {
            ry.lo = std::min(ry.lo, v);
            ry.hi = std::max(ry.hi, v);
        }
    }
    rx = padded(rx);
    ry = padded(ry);

    const double ml = 66, mr = 18, mt = 30, mb = 48;
    const double pw = axes.width - ml - mr;
    const double ph = axes.height - mt - mb;
    auto px = [&](double v) { return ml + (v - rx.lo) / rx.span() * pw; };
    auto py = [&](double v) { return mt + ph - (v - ry.lo) / ry.span() * ph; };

    std::string o;
    o.reserve(1 << 16);
    o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"";
    append_px(o, axes.width);
    o += "\" height=\"";
    append_px(o, axes.height);
    o += "\" viewBox=\"0 0 ";
    append_px(o, axes.width);
    o += ' ';
    append_px(o, axes.height);
    o += "\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes box and ticks
    auto line = [&](double x1, double y1, double x2, double y2, const char* style) {
        o += "<line x1=\"";
        append_px(o, x1);
        o += "\" y1=\"";
        append_px(o, y1);
        o += "\" x2=\"";
        append_px(o, x2);
        o += "\" y2=\"";
        append_px(o, y2);
        o += "\" stroke=\"";
        o += style;
        o += "\" stroke-width=\"1\"/>\n";
    };
    auto text = [&](double x, double y, const char* anchor, const std::string& body,
                    const char* extra = "") {
        o += "<text x=\"";
        append_px(o, x);
        o += "\" y=\"";
        append_px(o, y);
        o += "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"";
        o += anchor;
        o += "\"";
        o += extra;
        o += ">";
        o += escape(body);
        o += "</text>\n";
    };

    for (double v : ticks(rx)) {
        line(px(v), mt, px(v), mt + ph, "#dddddd");
        line(px(v), mt + ph, px(v), mt + ph + 5, "#444444");
        text(px(v), mt + ph + 18, "middle", format_double(v));
    }
    for (double v : ticks(ry)) {
        line(ml, py(v), ml + pw, py(v), "#dddddd");
        line(ml - 5, py(v), ml, py(v), "#444444");
        text(ml - 8, py(v) + 4, "end", format_double(v));
    }
    line(ml, mt, ml, mt + ph, "#444444");
    line(ml, mt + ph, ml + pw, mt + ph, "#444444");

    if (!axes.title.empty()) text(ml + pw / 2, 18, "middle", axes.title);
    if (!axes.x_label.empty()) text(ml + pw / 2, mt + ph + 38, "middle", axes.x_label);
    if (!axes.y_label.empty()) {
        std::string rot = " transform=\"rotate(-90 14 " +
                          format_double(std::round((mt + ph / 2) * 100) / 100) + ")\"";
        text(14, mt + ph / 2, "middle", axes.y_label, rot.c_str());
    }

    for (std::size_t k = 0; k < series.size(); ++k) {
        const PlotSeries& s = series[k];
        o += "<polyline fill=\"none\" stroke=\"";
        o += kPalette[k % std::size(kPalette)];
        o += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) o += ' ';
            append_px(o, px(s.x[i]));
            o += ',';
            append_px(o, py(s.y[i]));
        }
        o += "\"/>\n";
    }

    // legend, top-right corner of the plot box
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double ly = mt + 14 + 16 * static_cast<double>(k);
        o += "<line x1=\"";
        append_px(o, ml + pw - 120);
        o += "\" y1=\"";
        append_px(o, ly - 4);
        o += "\" x2=\"";
        append_px(o, ml + pw - 96);
        o += "\" y2=\"";
        append_px(o, ly - 4);
        o += "\" stroke=\"";
        o += kPalette[k % std::size(kPalette)];
        o += "\" stroke-width=\"2\"/>\n";
        text(ml + pw - 90, ly, "start", series[k].label);
    }

    o += "</svg>\n";
    return o;
}

void emit_svg(std::span<const PlotSeries> series,
              const std::filesystem::path& path, const AxesSpec& axes) {
    const std::string body = render_svg(series, axes);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace shipctl
