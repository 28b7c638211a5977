#include "kgenfit/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "kgenfit/kernels.hpp"
#include "kgenfit/version.hpp"

namespace kgenfit::report {

namespace {

constexpr double kPanelW = 440.0;
constexpr double kPanelH = 360.0;
constexpr double kMarginL = 58.0;
constexpr double kMarginB = 42.0;
constexpr double kMarginT = 34.0;
constexpr int kMaxPoints = 400;
constexpr int kCurvePoints = 240;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Curve {
    const char* css;
    std::vector<double> y;  // tail probability at grid x
};

struct Panel {
    std::string id;
    std::string title;
    std::vector<double> px, py;  // empirical points
    std::vector<double> grid;
    std::vector<Curve> curves;
};

void render_panel(std::string& svg, const Panel& panel, double x0, double y_min) {
    const double x_max = panel.grid.empty() ? 1.0 : panel.grid.back();
    const double lo = std::log10(y_min);
    auto sx = [&](double x) { return x0 + kMarginL + (x / x_max) * (kPanelW - kMarginL - 12.0); };
    auto sy = [&](double y) {
        const double clamped = std::max(y, y_min);
        const double frac = (std::log10(clamped) - lo) / (0.0 - lo);
        return kMarginT + (1.0 - frac) * (kPanelH - kMarginT - kMarginB);
    };

    svg += "<g id=\"" + panel.id + "\" data-ymin=\"" + fmt(y_min) + "\">\n";
    svg += "<rect x=\"" + fmt(x0 + kMarginL) + "\" y=\"" + fmt(kMarginT) + "\" width=\"" +
           fmt(kPanelW - kMarginL - 12.0) + "\" height=\"" + fmt(kPanelH - kMarginT - kMarginB) +
           "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg += "<text x=\"" + fmt(x0 + kMarginL) + "\" y=\"" + fmt(kMarginT - 12.0) +
           "\" font-size=\"13\">" + panel.title + "</text>\n";

    // decade ticks on the log y axis
    for (int e = 0; e >= static_cast<int>(std::floor(lo)); --e) {
        const double y = std::pow(10.0, e);
        if (y < y_min) break;
        svg += "<text x=\"" + fmt(x0 + 6.0) + "\" y=\"" + fmt(sy(y) + 4.0) +
               "\" font-size=\"10\">1e" + std::to_string(e) + "</text>\n";
        svg += "<line x1=\"" + fmt(x0 + kMarginL - 4.0) + "\" y1=\"" + fmt(sy(y)) + "\" x2=\"" +
               fmt(x0 + kMarginL) + "\" y2=\"" + fmt(sy(y)) + "\" stroke=\"#888\"/>\n";
    }

    for (const Curve& curve : panel.curves) {
        std::string d;
        bool open = false;
        for (std::size_t i = 0; i < panel.grid.size(); ++i) {
            if (curve.y[i] < y_min * 0.5) {
                open = false;
                continue;
            }
            d += (open ? "L" : "M");
            d += fmt(sx(panel.grid[i]));
            d += " ";
            d += fmt(sy(curve.y[i]));
            open = true;
        }
        svg += "<path class=\"";
        svg += curve.css;
        svg += "\" d=\"" + d + "\" fill=\"none\"/>\n";
    }

    for (std::size_t i = 0; i < panel.px.size(); ++i) {
        svg += "<circle class=\"empirical\" cx=\"" + fmt(sx(panel.px[i])) + "\" cy=\"" +
               fmt(sy(panel.py[i])) + "\" r=\"2\"/>\n";
    }
    svg += "</g>\n";
}

// empirical unconditional tail of one side: magnitudes ascending,
// y_i = (#{m_j >= m_i}) / n_total
void empirical_points(const std::vector<double>& tail, double n_total, Panel& panel) {
    std::vector<double> m(tail.begin(), tail.end());
    std::sort(m.begin(), m.end());
    const std::size_t k = m.size();
    const std::size_t stride = std::max<std::size_t>(1, k / kMaxPoints);
    for (std::size_t i = 0; i < k; i += stride) {
        panel.px.push_back(m[i]);
        panel.py.push_back(static_cast<double>(k - i) / n_total);
    }
    if ((k - 1) % stride != 0 && k > 0) {
        panel.px.push_back(m[k - 1]);
        panel.py.push_back(1.0 / n_total);
    }
}

}  // namespace

std::string render_tail_plot(const InstrumentReport& rep, const TailSamples& tails) {
    const double n_total =
        static_cast<double>(tails.neg.size() + tails.pos.size() + tails.zero_count);
    const double y_min = 1.0 / (2.0 * n_total);

    const kappa::KappaParams* kn = nullptr;
    const kappa::KappaParams* kp = nullptr;
    const stable::StableParams* st = nullptr;
    const NormalParams* nm = nullptr;
    if (auto it = rep.fits.find("kappa_neg"); it != rep.fits.end())
        kn = std::get_if<kappa::KappaParams>(&it->second.params);
    if (auto it = rep.fits.find("kappa_pos"); it != rep.fits.end())
        kp = std::get_if<kappa::KappaParams>(&it->second.params);
    if (auto it = rep.fits.find("stable"); it != rep.fits.end())
        st = std::get_if<stable::StableParams>(&it->second.params);
    if (auto it = rep.fits.find("normal"); it != rep.fits.end())
        nm = std::get_if<NormalParams>(&it->second.params);

    auto build_panel = [&](bool negative) {
        Panel panel;
        panel.id = negative ? "panel-neg" : "panel-pos";
        panel.title = rep.ticker + (negative ? "  P(R < -r), negative tail"
                                             : "  P(R > r), positive tail");
        const auto& tail = negative ? tails.neg : tails.pos;
        empirical_points(tail, n_total, panel);
        const double m_max = *std::max_element(tail.begin(), tail.end()) * 1.02;
        panel.grid.resize(kCurvePoints);
        for (int i = 0; i < kCurvePoints; ++i)
            panel.grid[i] = m_max * (i + 1) / static_cast<double>(kCurvePoints);

        const kappa::KappaParams* kside = negative ? kn : kp;
        const double weight = negative ? tails.q : 1.0 - tails.q;
        if (kside) {
            Curve c{"curve-kappa", std::vector<double>(panel.grid.size())};
            kernels::active_ops().kappa_survival(panel.grid.data(), panel.grid.size(),
                                                 kside->kappa, kside->alpha, kside->beta,
                                                 c.y.data());
            for (double& y : c.y) y *= weight;
            panel.curves.push_back(std::move(c));
        }
        if (st) {
            std::vector<double> xs(panel.grid.size());
            for (std::size_t i = 0; i < xs.size(); ++i)
                xs[i] = negative ? -panel.grid[i] : panel.grid[i];
            const std::vector<double> cdfs = stable::cdf_batch(xs, *st);
            Curve c{"curve-stable", std::vector<double>(panel.grid.size())};
            for (std::size_t i = 0; i < cdfs.size(); ++i)
                c.y[i] = negative ? cdfs[i] : 1.0 - cdfs[i];
            panel.curves.push_back(std::move(c));
        }
        if (nm) {
            Curve c{"curve-normal", std::vector<double>(panel.grid.size())};
            for (std::size_t i = 0; i < panel.grid.size(); ++i) {
                const double x = negative ? -panel.grid[i] : panel.grid[i];
                const double surv = normal_survival(x, *nm);
                c.y[i] = negative ? 1.0 - surv : surv;
            }
            panel.curves.push_back(std::move(c));
        }
        return panel;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(2.0 * kPanelW + 20.0) +
           "\" height=\"" + fmt(kPanelH) + "\" data-tool=\"kgenfit " + std::string(kVersion) +
           "\">\n";
    svg += "<style>.curve-kappa{stroke:#c0392b;stroke-width:1.5}"
           ".curve-stable{stroke:#2471a3;stroke-width:1.5}"
           ".curve-normal{stroke:#1e8449;stroke-width:1.5}"
           ".empirical{fill:#222}text{font-family:sans-serif}</style>\n";
    render_panel(svg, build_panel(true), 0.0, y_min);
    render_panel(svg, build_panel(false), kPanelW + 20.0, y_min);
    svg += "<text x=\"" + fmt(kPanelW - 60.0) + "\" y=\"" + fmt(kPanelH - 8.0) +
           "\" font-size=\"11\">kappa (red)  stable (blue)  normal (green)</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace kgenfit::report
