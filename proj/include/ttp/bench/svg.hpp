#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace ttp::bench {

inline const char* palette(std::size_t i)
{
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % 10];
}

inline std::string svg_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string svg_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct BarSeries {
    std::string name;
    std::vector<double> values; // one per category
};

// Grouped vertical bars: one group per category, one bar per series.
inline std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                                 const std::vector<BarSeries>& series, const std::string& x_label,
                                 const std::string& y_label)
{
    const double W = 720, H = 420, left = 70, right = 160, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    double ymax = 0.0;
    for (const auto& s : series)
        for (double v : s.values) ymax = std::max(ymax, v);
    if (ymax <= 0.0) ymax = 1.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << svg_escape(title) << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double v = ymax * t / 5.0;
        const double y = top + ph - ph * t / 5.0;
        os << "<line x1=\"" << left - 4 << "\" y1=\"" << svg_num(y) << "\" x2=\"" << left << "\" y2=\"" << svg_num(y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << left - 7 << "\" y=\"" << svg_num(y + 4) << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
    }
    const std::size_t nc = std::max<std::size_t>(1, categories.size());
    const double gw = pw / static_cast<double>(nc);
    const double bw = gw * 0.8 / static_cast<double>(std::max<std::size_t>(1, series.size()));
    for (std::size_t c = 0; c < categories.size(); ++c) {
        const double gx = left + gw * static_cast<double>(c) + gw * 0.1;
        for (std::size_t s = 0; s < series.size(); ++s) {
            const double v = c < series[s].values.size() ? series[s].values[c] : 0.0;
            const double h = ph * v / ymax;
            os << "<rect x=\"" << svg_num(gx + bw * static_cast<double>(s)) << "\" y=\"" << svg_num(top + ph - h)
               << "\" width=\"" << svg_num(bw) << "\" height=\"" << svg_num(h) << "\" fill=\"" << palette(s) << "\"/>\n";
        }
        os << "<text x=\"" << svg_num(gx + gw * 0.4) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
           << svg_escape(categories[c]) << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << svg_escape(x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << top + ph / 2
       << ")\">" << svg_escape(y_label) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double y = top + 10 + 20.0 * static_cast<double>(s);
        os << "<rect x=\"" << left + pw + 15 << "\" y=\"" << svg_num(y - 10) << "\" width=\"12\" height=\"12\" fill=\"" << palette(s) << "\"/>\n";
        os << "<text x=\"" << left + pw + 32 << "\" y=\"" << svg_num(y) << "\">" << svg_escape(series[s].name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

struct XYSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool line = false; // polyline instead of markers
};

inline std::string scatter_chart_svg(const std::string& title, const std::vector<XYSeries>& series,
                                     const std::string& x_label, const std::string& y_label)
{
    const double W = 720, H = 420, left = 70, right = 200, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return left + pw * (x - xmin) / (xmax - xmin); };
    auto py = [&](double y) { return top + ph - ph * (y - ymin) / (ymax - ymin); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << svg_escape(title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 5.0;
        const double yv = ymin + (ymax - ymin) * t / 5.0;
        os << "<text x=\"" << svg_num(px(xv)) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << svg_num(py(yv) + 4) << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        if (ser.line) {
            os << "<polyline fill=\"none\" stroke=\"" << palette(s) << "\" stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < ser.x.size(); ++i) {
                if (!std::isfinite(ser.y[i])) continue;
                const double y = std::clamp(ser.y[i], ymin, ymax);
                os << svg_num(px(ser.x[i])) << ',' << svg_num(py(y)) << ' ';
            }
            os << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < ser.x.size(); ++i) {
                if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
                os << "<circle cx=\"" << svg_num(px(ser.x[i])) << "\" cy=\"" << svg_num(py(ser.y[i]))
                   << "\" r=\"3\" fill=\"" << palette(s) << "\" fill-opacity=\"0.6\"/>\n";
            }
        }
        const double ly = top + 10 + 20.0 * static_cast<double>(s);
        os << "<rect x=\"" << left + pw + 15 << "\" y=\"" << svg_num(ly - 10) << "\" width=\"12\" height=\"12\" fill=\"" << palette(s) << "\"/>\n";
        os << "<text x=\"" << left + pw + 32 << "\" y=\"" << svg_num(ly) << "\">" << svg_escape(ser.name) << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << svg_escape(x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << top + ph / 2
       << ")\">" << svg_escape(y_label) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace ttp::bench
