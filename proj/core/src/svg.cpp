#include "eoconv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "eoconv/errors.hpp"

namespace eoconv {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 560.0;
constexpr double kMarginLeft = 86.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 48.0;
constexpr double kMarginBottom = 56.0;
constexpr int kMaxSeries = 6;
constexpr int kTicks = 5;

const char* const kPalette[kMaxSeries] = {"#1f77b4", "#d62728", "#2ca02c",
                                          "#9467bd", "#ff7f0e", "#17becf"};

std::string num(double v, const char* spec = "%.2f") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string escaped(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    [[nodiscard]] bool valid() const { return lo <= hi; }
    void pad() {
        if (lo == hi) {
            const double step = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
            lo -= step;
            hi += step;
        }
    }
};

} // namespace

std::string render_sweep_svg(const SweepTable& table, const std::string& title) {
    if (table.columns.empty())
        throw DomainError("sweep table has no columns");
    const std::size_t n_cols = table.columns.size();
    const std::size_t n_series = std::min<std::size_t>(n_cols - 1, kMaxSeries);
    if (n_series == 0)
        throw DomainError("sweep table has no series columns to plot");

    // Collect finite points per series.
    Range x_range;
    Range y_range;
    bool all_positive = true;
    for (const auto& row : table.rows) {
        if (row.size() < n_cols || !std::isfinite(row[0])) continue;
        bool any = false;
        for (std::size_t s = 0; s < n_series; ++s) {
            const double y = row[1 + s];
            if (!std::isfinite(y)) continue;
            any = true;
            y_range.include(y);
            if (!(y > 0.0)) all_positive = false;
        }
        if (any) x_range.include(row[0]);
    }
    if (!x_range.valid() || !y_range.valid())
        throw DomainError("sweep table has no finite points to plot");

    const bool log_y = all_positive && y_range.lo > 0.0 &&
                       std::log10(y_range.hi / y_range.lo) > 3.0;
    Range y_plot = y_range;
    if (log_y) {
        y_plot.lo = std::log10(y_range.lo);
        y_plot.hi = std::log10(y_range.hi);
    }
    x_range.pad();
    y_plot.pad();

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto x_px = [&](double x) {
        return kMarginLeft + (x - x_range.lo) / (x_range.hi - x_range.lo) * plot_w;
    };
    const auto y_px = [&](double y) {
        const double v = log_y ? std::log10(y) : y;
        return kMarginTop + (y_plot.hi - v) / (y_plot.hi - y_plot.lo) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
           num(kWidth, "%.0f") + " " + num(kHeight, "%.0f") +
           "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    svg += "<rect width=\"" + num(kWidth, "%.0f") + "\" height=\"" +
           num(kHeight, "%.0f") + "\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + num(kWidth / 2.0) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-size=\"16\">" + escaped(title) + "</text>\n";

    // Grid and tick labels.
    for (int t = 0; t <= kTicks; ++t) {
        const double fx = x_range.lo + (x_range.hi - x_range.lo) * t / kTicks;
        const double px = x_px(fx);
        svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(kMarginTop) +
               "\" x2=\"" + num(px) + "\" y2=\"" + num(kMarginTop + plot_h) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + num(px) + "\" y=\"" +
               num(kMarginTop + plot_h + 18.0) + "\" text-anchor=\"middle\">" +
               num(fx, "%.4g") + "</text>\n";

        const double fv = y_plot.lo + (y_plot.hi - y_plot.lo) * t / kTicks;
        const double py = kMarginTop + plot_h - plot_h * t / kTicks;
        svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(py) +
               "\" x2=\"" + num(kMarginLeft + plot_w) + "\" y2=\"" + num(py) +
               "\" stroke=\"#dddddd\"/>\n";
        const double label = log_y ? std::pow(10.0, fv) : fv;
        svg += "<text x=\"" + num(kMarginLeft - 8.0) + "\" y=\"" + num(py + 4.0) +
               "\" text-anchor=\"end\">" + num(label, "%.4g") + "</text>\n";
    }
    svg += "<rect x=\"" + num(kMarginLeft) + "\" y=\"" + num(kMarginTop) +
           "\" width=\"" + num(plot_w) + "\" height=\"" + num(plot_h) +
           "\" fill=\"none\" stroke=\"#444444\"/>\n";

    // Axis titles.
    svg += "<text x=\"" + num(kMarginLeft + plot_w / 2.0) + "\" y=\"" +
           num(kHeight - 14.0) + "\" text-anchor=\"middle\">" +
           escaped(table.columns[0]) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + num(kMarginTop + plot_h / 2.0) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           num(kMarginTop + plot_h / 2.0) + ")\">" +
           escaped(log_y ? "value (log scale)" : "value") + "</text>\n";

    // Series polylines (break at non-finite or non-positive-in-log points).
    for (std::size_t s = 0; s < n_series; ++s) {
        const char* color = kPalette[s];
        std::string points;
        const auto flush = [&] {
            if (points.empty()) return;
            svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"1.6\" points=\"" + points + "\"/>\n";
            points.clear();
        };
        for (const auto& row : table.rows) {
            if (row.size() < n_cols) continue;
            const double x = row[0];
            const double y = row[1 + s];
            const bool drawable =
                std::isfinite(x) && std::isfinite(y) && (!log_y || y > 0.0);
            if (!drawable) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += num(x_px(x)) + "," + num(y_px(y));
        }
        flush();

        // Legend entry.
        const double ly = kMarginTop + 10.0 + 18.0 * static_cast<double>(s);
        const double lx = kMarginLeft + plot_w - 190.0;
        svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(lx + 26.0) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"1.6\"/>\n";
        svg += "<text x=\"" + num(lx + 32.0) + "\" y=\"" + num(ly + 4.0) + "\">" +
               escaped(table.columns[1 + s]) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace eoconv
