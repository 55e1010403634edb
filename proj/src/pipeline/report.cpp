#include <array>
#include <algorithm>
#include <cstdio>
#include <map>
#include <string>

#include "radclust/pipeline/sweep.hpp"

namespace radclust::pipeline {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
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

constexpr std::array<const char*, 9> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#17becf"};

} // namespace

std::string render_report_csv(const SweepReport& report) {
    std::string out = "algorithm,k,silhouette,runtime_ms,converged\n";
    for (const auto& r : report.rows) {
        out += display_name(r.algorithm);
        out += ',' + std::to_string(r.k) + ',';
        if (r.silhouette) {
            out += fixed(*r.silhouette, 4);
        }
        out += ',';
        if (r.runtime_ms) {
            out += fixed(*r.runtime_ms, 1);
        }
        out += r.converged ? ",true\n" : ",false\n";
    }
    return out;
}

std::string render_chart_svg(const SweepReport& report) {
    constexpr double kWidth = 720.0;
    constexpr double kHeight = 420.0;
    constexpr double kLeft = 60.0;
    constexpr double kRight = 250.0; // legend column
    constexpr double kTop = 40.0;
    constexpr double kBottom = 50.0;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    std::size_t k_lo = 0;
    std::size_t k_hi = 0;
    for (const auto& r : report.rows) {
        k_lo = k_lo == 0 ? r.k : std::min(k_lo, r.k);
        k_hi = std::max(k_hi, r.k);
    }
    auto px = [&](std::size_t k) {
        if (k_hi == k_lo) {
            return kLeft + plot_w / 2.0;
        }
        return kLeft + plot_w * static_cast<double>(k - k_lo) / static_cast<double>(k_hi - k_lo);
    };
    auto py = [&](double s) { return kTop + plot_h * (1.0 - std::clamp(s, 0.0, 1.0)); };

    // Series in first-appearance order.
    std::vector<Algorithm> order;
    std::map<Algorithm, std::vector<const SweepRow*>> series;
    for (const auto& r : report.rows) {
        auto& s = series[r.algorithm];
        if (s.empty()) {
            order.push_back(r.algorithm);
        }
        s.push_back(&r);
    }

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
           fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + ' ' + fixed(kHeight, 0) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + fixed(kLeft, 2) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
           "Silhouette score vs number of clusters</text>\n";

    // Axes, y grid at 0.2 steps and x ticks at each k.
    out += "<g font-family=\"sans-serif\" font-size=\"11\" stroke-width=\"1\">\n";
    for (int t = 0; t <= 5; ++t) {
        const double v = 0.2 * t;
        const double y = py(v);
        out += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(y, 2) + "\" x2=\"" + fixed(kLeft + plot_w, 2) +
               "\" y2=\"" + fixed(y, 2) + "\" stroke=\"#dddddd\"/>\n";
        out += "<text x=\"" + fixed(kLeft - 8, 2) + "\" y=\"" + fixed(y + 4, 2) + "\" text-anchor=\"end\">" +
               fixed(v, 1) + "</text>\n";
    }
    if (k_hi > 0) {
        for (std::size_t k = k_lo; k <= k_hi; ++k) {
            out += "<text x=\"" + fixed(px(k), 2) + "\" y=\"" + fixed(kTop + plot_h + 18, 2) +
                   "\" text-anchor=\"middle\">" + std::to_string(k) + "</text>\n";
        }
    }
    out += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(kTop, 2) + "\" x2=\"" + fixed(kLeft, 2) +
           "\" y2=\"" + fixed(kTop + plot_h, 2) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(kTop + plot_h, 2) + "\" x2=\"" +
           fixed(kLeft + plot_w, 2) + "\" y2=\"" + fixed(kTop + plot_h, 2) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fixed(kLeft + plot_w / 2, 2) + "\" y=\"" + fixed(kHeight - 12, 2) +
           "\" text-anchor=\"middle\">clusters (k)</text>\n";
    out += "<text x=\"16\" y=\"" + fixed(kTop + plot_h / 2, 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fixed(kTop + plot_h / 2, 2) + ")\">silhouette</text>\n";
    out += "</g>\n";

    for (std::size_t s = 0; s < order.size(); ++s) {
        const Algorithm a = order[s];
        const char* color = kPalette[static_cast<std::size_t>(a) % kPalette.size()];
        const auto& rows = series[a];
        out += "<g class=\"series\" data-algorithm=\"" + std::string(cli_name(a)) + "\">\n";
        // One polyline per run of consecutive plotted cells.
        std::string points;
        std::size_t run = 0;
        auto flush = [&] {
            if (run >= 2) {
                out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" +
                       points + "\"/>\n";
            }
            points.clear();
            run = 0;
        };
        for (const SweepRow* r : rows) {
            if (!r->silhouette) {
                flush();
                continue;
            }
            if (!points.empty()) {
                points += ' ';
            }
            points += fixed(px(r->k), 2) + ',' + fixed(py(*r->silhouette), 2);
            ++run;
        }
        flush();
        for (const SweepRow* r : rows) {
            if (r->silhouette) {
                out += "<circle cx=\"" + fixed(px(r->k), 2) + "\" cy=\"" + fixed(py(*r->silhouette), 2) +
                       "\" r=\"3\" fill=\"" + color + "\"/>\n";
            }
        }
        out += "</g>\n";

        const double ly = kTop + 8.0 + 20.0 * static_cast<double>(s);
        const double lx = kLeft + plot_w + 20.0;
        out += "<g class=\"legend\"><line x1=\"" + fixed(lx, 2) + "\" y1=\"" + fixed(ly, 2) + "\" x2=\"" +
               fixed(lx + 20, 2) + "\" y2=\"" + fixed(ly, 2) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/><text x=\"" + fixed(lx + 26, 2) + "\" y=\"" + fixed(ly + 4, 2) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(display_name(a)) + "</text></g>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace radclust::pipeline
