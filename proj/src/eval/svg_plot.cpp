#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tactile/error.hpp"
#include "tactile/eval.hpp"

namespace tactile {

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string escape(const std::string& s) {
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

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("box plot of an empty series");
    std::sort(values.begin(), values.end());
    BoxStats s{};
    s.q1 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.q3 = quantile(values, 0.75);
    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;
    s.min = s.q1;
    s.max = s.q3;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            s.outliers.push_back(v);
        } else {
            s.min = std::min(s.min, v);
            s.max = std::max(s.max, v);
        }
    }
    return s;
}

std::string box_plot_svg(const std::vector<BoxSeries>& series, const std::string& title, const std::string& y_label) {
    constexpr double width_per_box = 140.0;
    constexpr double left = 70.0;
    constexpr double right = 20.0;
    constexpr double top = 40.0;
    constexpr double plot_h = 300.0;
    constexpr double bottom = 60.0;
    const double width = left + right + width_per_box * static_cast<double>(std::max<std::size_t>(series.size(), 1));
    const double height = top + plot_h + bottom;

    std::vector<BoxStats> boxes;
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& s : series) {
        boxes.push_back(box_stats(s.values));
        lo = std::min(lo, *std::min_element(s.values.begin(), s.values.end()));
        hi = std::max(hi, *std::max_element(s.values.begin(), s.values.end()));
    }
    if (series.empty()) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    auto y = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << num(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
        << num(top + plot_h) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = lo + (hi - lo) * i / 5.0;
        svg << "<line x1=\"" << num(left - 4) << "\" y1=\"" << num(y(v)) << "\" x2=\"" << num(left) << "\" y2=\""
            << num(y(v)) << "\" stroke=\"black\"/>";
        svg << "<text x=\"" << num(left - 7) << "\" y=\"" << num(y(v) + 4) << "\" text-anchor=\"end\">"
            << tick_label(v) << "</text>\n";
    }
    svg << "<text transform=\"translate(16," << num(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(y_label) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const BoxStats& b = boxes[i];
        const double cx = left + width_per_box * (static_cast<double>(i) + 0.5);
        const double half = width_per_box * 0.25;
        svg << "<g class=\"box\" data-label=\"" << escape(series[i].label) << "\">";
        svg << "<line x1=\"" << num(cx) << "\" y1=\"" << num(y(b.max)) << "\" x2=\"" << num(cx) << "\" y2=\""
            << num(y(b.q3)) << "\" stroke=\"black\"/>";
        svg << "<line x1=\"" << num(cx) << "\" y1=\"" << num(y(b.q1)) << "\" x2=\"" << num(cx) << "\" y2=\""
            << num(y(b.min)) << "\" stroke=\"black\"/>";
        for (double w : {b.min, b.max}) {
            svg << "<line x1=\"" << num(cx - half / 2) << "\" y1=\"" << num(y(w)) << "\" x2=\"" << num(cx + half / 2)
                << "\" y2=\"" << num(y(w)) << "\" stroke=\"black\"/>";
        }
        svg << "<rect x=\"" << num(cx - half) << "\" y=\"" << num(y(b.q3)) << "\" width=\"" << num(2 * half)
            << "\" height=\"" << num(std::max(0.5, y(b.q1) - y(b.q3)))
            << "\" fill=\"#9ecae1\" stroke=\"black\"/>";
        svg << "<line x1=\"" << num(cx - half) << "\" y1=\"" << num(y(b.median)) << "\" x2=\"" << num(cx + half)
            << "\" y2=\"" << num(y(b.median)) << "\" stroke=\"#08306b\" stroke-width=\"2\"/>";
        for (double o : b.outliers) {
            svg << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(y(o)) << "\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>";
        }
        svg << "<text x=\"" << num(cx) << "\" y=\"" << num(top + plot_h + 20) << "\" text-anchor=\"middle\">"
            << escape(series[i].label) << "</text>";
        svg << "<text x=\"" << num(cx) << "\" y=\"" << num(top + plot_h + 36)
            << "\" text-anchor=\"middle\" font-size=\"10\">n=" << series[i].values.size() << "</text>";
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::pair<std::string, std::string>> report_plots(const EvalReport& report) {
    std::vector<std::string> metrics = {"rms"};
    if (report.experiment == "technical") {
        metrics.push_back("mse");
        metrics.push_back("ssim");
    } else {
        metrics.push_back("rms_mm");
    }
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& metric : metrics) {
        std::vector<BoxSeries> series;
        for (auto& [label, values] : metric_groups(report, metric)) {
            if (!values.empty()) series.push_back({label, std::move(values)});
        }
        if (series.empty()) continue;
        const std::string title = report.experiment + " (" + report.path + " path): " + metric;
        out.emplace_back(metric, box_plot_svg(series, title, metric));
    }
    return out;
}

}  // namespace tactile
