#ifndef TPMS_PIPELINE_SVG_HPP
#define TPMS_PIPELINE_SVG_HPP

// Minimal line/scatter charts written as standalone SVG.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace tpms::pipeline {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = false; // points only, no connecting line
    bool dashed = false;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<Series> series;
};

namespace svg_detail {

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

inline std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

/// Ticks at 1, 2 or 5 times a power of ten covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi)
{
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
        ticks.push_back(t);
    return ticks;
}

} // namespace svg_detail

inline std::string render_svg(const Chart& chart)
{
    using namespace svg_detail;
    constexpr double W = 720, H = 460, L = 80, R = 190, T = 50, B = 60;
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    auto ty = [&](double v) { return chart.log_y ? std::log10(v) : v; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : chart.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (chart.log_y && !(s.y[i] > 0.0)))
                continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!std::isfinite(x0)) {
        x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    }
    if (x1 == x0)
        x0 -= 0.5, x1 += 0.5;
    if (chart.log_y) {
        y0 = std::floor(y0);
        y1 = std::max(std::ceil(y1), y0 + 1);
    } else {
        const double pad = y1 > y0 ? 0.05 * (y1 - y0) : 0.5;
        y0 -= pad;
        y1 += pad;
    }
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (ty(y) - y0) / (y1 - y0) * (H - T - B); };
    auto pyt = [&](double t) { return H - B - (t - y0) / (y1 - y0) * (H - T - B); };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
                      "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(W / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">" + escape(chart.title) +
           "</text>\n";
    out += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W - L - R) + "\" height=\"" +
           num(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : nice_ticks(x0, x1)) {
        out += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(H - B) + "\" x2=\"" + num(px(t)) + "\" y2=\"" +
               num(H - B + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + num(px(t)) + "\" y=\"" + num(H - B + 18) + "\" text-anchor=\"middle\">" +
               tick_label(t) + "</text>\n";
    }
    std::vector<double> yt;
    if (chart.log_y)
        for (double e = y0; e <= y1 + 1e-9; e += 1.0)
            yt.push_back(e);
    else
        yt = nice_ticks(y0, y1);
    for (double t : yt) {
        out += "<line x1=\"" + num(L - 5) + "\" y1=\"" + num(pyt(t)) + "\" x2=\"" + num(W - R) + "\" y2=\"" +
               num(pyt(t)) + "\" stroke=\"#dddddd\"/>\n";
        out += "<text x=\"" + num(L - 8) + "\" y=\"" + num(pyt(t) + 4) + "\" text-anchor=\"end\">" +
               (chart.log_y ? "1e" + tick_label(t) : tick_label(t)) + "</text>\n";
    }
    out += "<text x=\"" + num(L + (W - L - R) / 2) + "\" y=\"" + num(H - 15) + "\" text-anchor=\"middle\">" +
           escape(chart.x_label) + "</text>\n";
    out += "<text transform=\"translate(20," + num(T + (H - T - B) / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">" + escape(chart.y_label) + "</text>\n";

    for (std::size_t s = 0; s < chart.series.size(); ++s) {
        const auto& ser = chart.series[s];
        const std::string colour = palette[s % std::size(palette)];
        std::string pts;
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            if (!std::isfinite(ser.y[i]) || (chart.log_y && !(ser.y[i] > 0.0)))
                continue;
            const double cy = std::clamp(py(ser.y[i]), T, H - B);
            if (ser.markers)
                out += "<circle cx=\"" + num(px(ser.x[i])) + "\" cy=\"" + num(cy) + "\" r=\"3\" fill=\"" + colour +
                       "\"/>\n";
            else
                pts += num(px(ser.x[i])) + "," + num(cy) + " ";
        }
        if (!pts.empty())
            out += "<polyline fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\"" +
                   (ser.dashed ? " stroke-dasharray=\"5,3\"" : "") + " points=\"" + pts + "\"/>\n";
        const double ly = T + 10 + 18 * static_cast<double>(s);
        out += "<line x1=\"" + num(W - R + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(W - R + 32) + "\" y2=\"" +
               num(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"" +
               (ser.dashed ? " stroke-dasharray=\"5,3\"" : "") + "/>\n";
        out += "<text x=\"" + num(W - R + 38) + "\" y=\"" + num(ly + 4) + "\">" + escape(ser.name) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace tpms::pipeline

#endif // TPMS_PIPELINE_SVG_HPP
