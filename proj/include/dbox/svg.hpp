#pragma once

// Minimal polyline chart writer for the sweep panels. One chart per
// observable, one series per outcome channel, optional log10 y axis for the
// probability panels that span many orders of magnitude.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dbox/errors.hpp"

namespace dbox::svg {

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::vector<double> linear_ticks(double lo, double hi, int target = 6) {
    std::vector<double> ticks;
    const double span = hi - lo;
    if (!(span > 0)) return {lo};
    double step = std::pow(10.0, std::floor(std::log10(span / target)));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (span / (step * mult) <= target) {
            step *= mult;
            break;
        }
    }
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 0.5 * step; v += step) ticks.push_back(v);
    return ticks;
}

} // namespace detail

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

class LineChart {
public:
    LineChart(std::string title, std::string x_label, std::string y_label,
              bool log_y = false)
        : title_(std::move(title)), x_label_(std::move(x_label)),
          y_label_(std::move(y_label)), log_y_(log_y) {}

    void add_series(std::string label, std::vector<std::pair<double, double>> points) {
        series_.push_back({std::move(label), std::move(points)});
    }

    std::string render() const {
        constexpr double width = 960, height = 600;
        constexpr double ml = 80, mr = 150, mt = 45, mb = 55;
        const double plot_w = width - ml - mr, plot_h = height - mt - mb;

        double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
        double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
        for (const auto& s : series_) {
            for (const auto& [x, y] : s.points) {
                if (log_y_ && !(y > 0)) continue;
                x_lo = std::min(x_lo, x);
                x_hi = std::max(x_hi, x);
                const double yy = log_y_ ? std::log10(y) : y;
                y_lo = std::min(y_lo, yy);
                y_hi = std::max(y_hi, yy);
            }
        }
        if (!std::isfinite(x_lo) || !std::isfinite(x_hi)) { x_lo = 0; x_hi = 1; }
        if (!std::isfinite(y_lo) || !std::isfinite(y_hi)) { y_lo = 0; y_hi = 1; }
        if (!(x_lo < x_hi)) { x_lo -= 1; x_hi += 1; }
        if (!(y_lo < y_hi)) { y_lo -= 1; y_hi += 1; }
        const double y_pad = 0.04 * (y_hi - y_lo);
        y_lo -= y_pad;
        y_hi += y_pad;

        auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * plot_w; };
        auto py = [&](double y) {
            const double yy = log_y_ ? std::log10(y) : y;
            return mt + (y_hi - yy) / (y_hi - y_lo) * plot_h;
        };

        static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                        "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                        "#bcbd22", "#17becf"};
        constexpr int n_colors = 10;

        std::string out;
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"600\" "
               "viewBox=\"0 0 960 600\">\n";
        out += "<rect width=\"960\" height=\"600\" fill=\"white\"/>\n";
        out += "<text x=\"480\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"17\">" + title_ + "</text>\n";

        // axes box
        out += "<rect x=\"" + detail::fmt(ml) + "\" y=\"" + detail::fmt(mt) + "\" width=\"" +
               detail::fmt(plot_w) + "\" height=\"" + detail::fmt(plot_h) +
               "\" fill=\"none\" stroke=\"black\"/>\n";

        for (double t : detail::linear_ticks(x_lo, x_hi)) {
            const double x = px(t);
            out += "<line x1=\"" + detail::fmt(x) + "\" y1=\"" + detail::fmt(mt + plot_h) +
                   "\" x2=\"" + detail::fmt(x) + "\" y2=\"" + detail::fmt(mt + plot_h + 5) +
                   "\" stroke=\"black\"/>\n";
            out += "<text x=\"" + detail::fmt(x) + "\" y=\"" + detail::fmt(mt + plot_h + 20) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
                   detail::fmt(t) + "</text>\n";
        }
        // y ticks: whole decades when logarithmic
        std::vector<double> yticks;
        if (log_y_) {
            for (double d = std::ceil(y_lo); d <= std::floor(y_hi); d += 1.0)
                yticks.push_back(d);
        } else {
            yticks = detail::linear_ticks(y_lo, y_hi);
        }
        for (double t : yticks) {
            const double y = mt + (y_hi - t) / (y_hi - y_lo) * plot_h;
            out += "<line x1=\"" + detail::fmt(ml - 5) + "\" y1=\"" + detail::fmt(y) +
                   "\" x2=\"" + detail::fmt(ml) + "\" y2=\"" + detail::fmt(y) +
                   "\" stroke=\"black\"/>\n";
            const std::string label = log_y_ ? ("1e" + detail::fmt(t)) : detail::fmt(t);
            out += "<text x=\"" + detail::fmt(ml - 9) + "\" y=\"" + detail::fmt(y + 4) +
                   "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
                   label + "</text>\n";
        }
        out += "<text x=\"" + detail::fmt(ml + plot_w / 2) + "\" y=\"" +
               detail::fmt(height - 12) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
               x_label_ + "</text>\n";
        out += "<text x=\"20\" y=\"" + detail::fmt(mt + plot_h / 2) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
               "transform=\"rotate(-90 20 " + detail::fmt(mt + plot_h / 2) + ")\">" +
               y_label_ + "</text>\n";

        int idx = 0;
        for (const auto& s : series_) {
            const char* color = palette[idx % n_colors];
            std::string path;
            bool pen_down = false;
            for (const auto& [x, y] : s.points) {
                if (log_y_ && !(y > 0)) { pen_down = false; continue; }
                path += pen_down ? " L " : " M ";
                path += detail::fmt(px(x)) + " " + detail::fmt(py(y));
                pen_down = true;
            }
            if (!path.empty())
                out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
                       "\" stroke-width=\"1.4\"/>\n";
            const double ly = mt + 16 + 18 * idx;
            out += "<line x1=\"" + detail::fmt(width - mr + 12) + "\" y1=\"" +
                   detail::fmt(ly - 4) + "\" x2=\"" + detail::fmt(width - mr + 34) +
                   "\" y2=\"" + detail::fmt(ly - 4) + "\" stroke=\"" + color +
                   "\" stroke-width=\"2\"/>\n";
            out += "<text x=\"" + detail::fmt(width - mr + 40) + "\" y=\"" + detail::fmt(ly) +
                   "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
            ++idx;
        }
        out += "</svg>\n";
        return out;
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path);
        out << render();
        if (!out) throw std::runtime_error("write failed for " + path);
    }

private:
    std::string title_, x_label_, y_label_;
    bool log_y_;
    std::vector<Series> series_;
};

} // namespace dbox::svg
