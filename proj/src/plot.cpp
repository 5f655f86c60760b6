#include "characteristica/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace characteristica {

namespace {

constexpr double kPanelW = 330, kPanelH = 250, kGap = 46, kMargin = 52;
const char* kPalette[4] = {"#2b6cb0", "#c53030", "#2f855a", "#975a16"};

struct Frame {
    double x0, y0;  // top-left of the drawing area in page coordinates
    double lo1, hi1, lo2, hi2;

    double px(double v) const { return x0 + (v - lo1) / (hi1 - lo1) * kPanelW; }
    double py(double v) const { return y0 + (hi2 - v) / (hi2 - lo2) * kPanelH; }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void panel_box(std::ostringstream& svg, const Frame& f, const std::string& label) {
    svg << "<rect x='" << fmt(f.x0) << "' y='" << fmt(f.y0) << "' width='" << kPanelW
        << "' height='" << kPanelH
        << "' fill='none' stroke='#888' stroke-width='1'/>\n";
    svg << "<text x='" << fmt(f.x0) << "' y='" << fmt(f.y0 - 8)
        << "' font-size='13' font-family='monospace' fill='#333'>" << label << "</text>\n";
}

void polyline(std::ostringstream& svg, const Frame& f, const Curve& c, const char* color) {
    if (c.points.size() < 2) return;
    std::size_t stride = std::max<std::size_t>(1, c.points.size() / 600);
    svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.2' points='";
    for (std::size_t i = 0; i < c.points.size(); i += stride)
        svg << fmt(f.px(c.points[i].a)) << "," << fmt(f.py(c.points[i].b)) << " ";
    const SamplePoint& last = c.points.back();
    svg << fmt(f.px(last.a)) << "," << fmt(f.py(last.b));
    svg << "'/>\n";
}

void seed_dot(std::ostringstream& svg, const Frame& f, const SamplePoint& s, const char* color) {
    svg << "<circle cx='" << fmt(f.px(s.a)) << "' cy='" << fmt(f.py(s.b))
        << "' r='2.4' fill='" << color << "'/>\n";
}

void axis_labels(std::ostringstream& svg, const Frame& f, const VarPair& vars) {
    svg << "<text x='" << fmt(f.x0 + kPanelW / 2) << "' y='" << fmt(f.y0 + kPanelH + 16)
        << "' font-size='11' font-family='monospace' fill='#555' text-anchor='middle'>"
        << vars.first << "</text>\n";
    svg << "<text x='" << fmt(f.x0 - 10) << "' y='" << fmt(f.y0 + kPanelH / 2)
        << "' font-size='11' font-family='monospace' fill='#555' text-anchor='middle'>"
        << vars.second << "</text>\n";
}

}  // namespace

std::vector<SamplePoint> seed_grid(const SampleRegion& region, int per_side) {
    std::vector<SamplePoint> seeds;
    double lo1 = region.lo1.value(), hi1 = region.hi1.value();
    double lo2 = region.lo2.value(), hi2 = region.hi2.value();
    for (int i = 0; i < per_side; ++i)
        for (int j = 0; j < per_side; ++j) {
            double u = (i + 1.0) / (per_side + 1.0);
            double v = (j + 1.0) / (per_side + 1.0);
            seeds.push_back({lo1 + u * (hi1 - lo1), lo2 + v * (hi2 - lo2)});
        }
    return seeds;
}

std::string curves_svg(const std::vector<CurveFamily>& families, const SampleRegion& region,
                       const VarPair& vars, const std::string& title) {
    double page_w = kMargin * 2 + kPanelW * 2 + kGap;
    double page_h = kMargin * 2 + kPanelH * 2 + kGap + 24;

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fmt(page_w) << "' height='"
        << fmt(page_h) << "' viewBox='0 0 " << fmt(page_w) << " " << fmt(page_h) << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << fmt(page_w / 2) << "' y='24' font-size='15' font-family='monospace' "
        << "fill='#111' text-anchor='middle'>" << title << "</text>\n";

    double top = kMargin + 24;
    Frame frames[4] = {
        {kMargin, top, 0, 1, 0, 1},
        {kMargin + kPanelW + kGap, top, 0, 1, 0, 1},
        {kMargin, top + kPanelH + kGap, 0, 1, 0, 1},
        {kMargin + kPanelW + kGap, top + kPanelH + kGap, 0, 1, 0, 1},
    };
    for (Frame& f : frames) {
        f.lo1 = region.lo1.value();
        f.hi1 = region.hi1.value();
        f.lo2 = region.lo2.value();
        f.hi2 = region.hi2.value();
    }

    // panels 1 and 2: each family alone
    for (std::size_t k = 0; k < 2; ++k) {
        const Frame& f = frames[k];
        std::string label = k < families.size() ? "family " + families[k].name : "(empty)";
        panel_box(svg, f, label);
        axis_labels(svg, f, vars);
        if (k < families.size()) {
            const char* color = kPalette[k % 4];
            for (const Curve& c : families[k].curves) {
                polyline(svg, f, c, color);
                seed_dot(svg, f, c.seed, color);
            }
        }
    }

    // panel 3: overlay
    {
        const Frame& f = frames[2];
        panel_box(svg, f, "both families");
        axis_labels(svg, f, vars);
        for (std::size_t k = 0; k < families.size(); ++k)
            for (const Curve& c : families[k].curves) polyline(svg, f, c, kPalette[k % 4]);
    }

    // panel 4: invariant drift per curve, log scale down to 1e-16
    {
        const Frame& f = frames[3];
        panel_box(svg, f, "invariant drift (log10)");
        int total = 0;
        for (const CurveFamily& fam : families) total += static_cast<int>(fam.curves.size());
        if (total > 0) {
            double bw = kPanelW / total;
            int idx = 0;
            for (std::size_t k = 0; k < families.size(); ++k)
                for (const Curve& c : families[k].curves) {
                    double drift = std::max(c.invariant_drift, 1e-16);
                    double frac = (std::log10(drift) + 16.0) / 16.0;  // 1e-16 .. 1
                    frac = std::clamp(frac, 0.0, 1.0);
                    double bh = frac * (kPanelH - 8);
                    svg << "<rect x='" << fmt(f.x0 + idx * bw + 1) << "' y='"
                        << fmt(f.y0 + kPanelH - bh) << "' width='" << fmt(bw - 2)
                        << "' height='" << fmt(bh) << "' fill='" << kPalette[k % 4] << "'/>\n";
                    ++idx;
                }
            // reference line at 1e-6
            double ref = ((-6.0) + 16.0) / 16.0 * (kPanelH - 8);
            svg << "<line x1='" << fmt(f.x0) << "' y1='" << fmt(f.y0 + kPanelH - ref)
                << "' x2='" << fmt(f.x0 + kPanelW) << "' y2='" << fmt(f.y0 + kPanelH - ref)
                << "' stroke='#444' stroke-dasharray='4 3' stroke-width='1'/>\n";
            svg << "<text x='" << fmt(f.x0 + 4) << "' y='" << fmt(f.y0 + kPanelH - ref - 4)
                << "' font-size='10' font-family='monospace' fill='#444'>1e-6</text>\n";
        }
    }

    svg << "</svg>\n";
    return svg.str();
}

std::string curves_csv(const std::vector<CurveFamily>& families, const VarPair& vars) {
    std::ostringstream csv;
    csv << "family,curve,index," << vars.first << "," << vars.second << "\n";
    char buf[80];
    for (const CurveFamily& fam : families) {
        for (std::size_t c = 0; c < fam.curves.size(); ++c) {
            const std::vector<SamplePoint>& pts = fam.curves[c].points;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g", pts[i].a, pts[i].b);
                csv << fam.name << "," << c << "," << i << "," << buf << "\n";
            }
        }
    }
    return csv.str();
}

}  // namespace characteristica
