#include "ouq/render/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>

#include "ouq/error.hpp"

namespace ouq::render {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string header(double w, double h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" viewBox=\"0 0 " + num(w) + ' ' + num(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n"
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle", int size = 12) {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\" font-size=\"" +
           std::to_string(size) + "\">" + esc(s) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0) {
    return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

// piecewise-linear viridis approximation, t in [0,1]
std::string colormap(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{{68, 1, 84},
                                                                {59, 82, 139},
                                                                {33, 145, 140},
                                                                {94, 201, 98},
                                                                {253, 231, 37}}};
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    const double pos = t * (stops.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), stops.size() - 2);
    const double f = pos - static_cast<double>(i);
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

} // namespace

std::string line_chart_svg(const std::vector<Series>& series, const ChartLabels& labels) {
    constexpr double W = 640, H = 420, L = 60, R = 170, T = 40, B = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 0;
    bool any = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw ValidationError("series '" + s.name + "' has mismatched x/y lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    ymin = std::min(ymin, 0.0);
    if (xmax - xmin < 1e-12) xmax = xmin + 1;
    if (ymax - ymin < 1e-12) ymax = ymin + 1;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::string out = header(W, H);
    out += text(W / 2, 22, labels.title, "middle", 14);
    out += line(L, H - B, W - R, H - B, "black");
    out += line(L, T, L, H - B, "black");
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        out += line(px(xv), H - B, px(xv), H - B + 4, "black");
        out += text(px(xv), H - B + 17, num(xv));
        out += line(L - 4, py(yv), L, py(yv), "black");
        out += text(L - 7, py(yv) + 4, num(yv), "end");
    }
    out += text((L + W - R) / 2, H - 10, labels.x_axis);
    out += "<text transform=\"translate(16," + num((T + H - B) / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           esc(labels.y_axis) + "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const std::string color = kPalette[s % kPalette.size()];
        std::string pts;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            pts += num(px(series[s].x[i])) + ',' + num(py(series[s].y[i])) + ' ';
        }
        out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = T + 10 + 16.0 * static_cast<double>(s);
        out += line(W - R + 10, ly, W - R + 30, ly, color, 2);
        out += text(W - R + 35, ly + 4, series[s].name, "start");
    }
    return out + "</svg>\n";
}

std::string simplex_heatmap_svg(const std::vector<HeatmapCell>& cells, double grid_step, const std::string& title) {
    if (cells.empty() || cells.front().p.size() != 3) throw ValidationError("heatmap rendering needs K = 3 cells");
    const int n = static_cast<int>(std::lround(1.0 / grid_step));
    std::map<std::pair<int, int>, double> value;  // (i1, i2) -> tu
    double lo = cells.front().tu, hi = cells.front().tu;
    for (const auto& c : cells) {
        value[{static_cast<int>(std::lround(c.p[0] * n)), static_cast<int>(std::lround(c.p[1] * n))}] = c.tu;
        lo = std::min(lo, c.tu);
        hi = std::max(hi, c.tu);
    }
    const double span = hi - lo > 1e-12 ? hi - lo : 1.0;

    constexpr double W = 560, H = 520, side = 440, ox = 40, oy = 470;
    // vertices: class 1 bottom-left, class 2 bottom-right, class 3 top
    auto point = [&](int a, int b) {
        const int c = n - a - b;
        const double x = ox + side * (b + 0.5 * c) / n;
        const double y = oy - side * std::sqrt(3.0) / 2.0 * c / n;
        return std::pair{x, y};
    };
    auto at = [&](int a, int b) {
        auto it = value.find({a, b});
        if (it == value.end()) throw ValidationError("heatmap lattice is incomplete");
        return it->second;
    };
    auto tri = [&](std::array<std::pair<int, int>, 3> v) {
        std::string pts;
        double mean = 0;
        for (auto [a, b] : v) {
            auto [x, y] = point(a, b);
            pts += num(x) + ',' + num(y) + ' ';
            mean += at(a, b) / 3.0;
        }
        const auto fill = colormap((mean - lo) / span);
        return "<polygon points=\"" + pts + "\" fill=\"" + fill + "\" stroke=\"" + fill + "\" stroke-width=\"0.3\"/>\n";
    };

    std::string out = header(W, H);
    out += text(W / 2, 22, title, "middle", 14);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; a + b < n; ++b) {
            out += tri({std::pair{a + 1, b}, std::pair{a, b + 1}, std::pair{a, b}});
            if (a + b <= n - 2) out += tri({std::pair{a + 1, b}, std::pair{a, b + 1}, std::pair{a + 1, b + 1}});
        }
    }
    auto [x1, y1] = point(n, 0);
    auto [x2, y2] = point(0, n);
    auto [x3, y3] = point(0, 0);
    out += text(x1, y1 + 18, "y=1");
    out += text(x2, y2 + 18, "y=2");
    out += text(x3, y3 - 8, "y=3");
    out += text(W - 10, 50, "min " + num(lo), "end");
    out += text(W - 10, 66, "max " + num(hi), "end");
    return out + "</svg>\n";
}

std::string cd_diagram_svg(const stats::TestReport& report, const std::string& title) {
    const std::size_t t = report.treatments.size();
    if (t < 2 || report.avg_ranks.size() != t) throw ValidationError("CD diagram needs at least two ranked treatments");
    constexpr double W = 640, L = 60, R = 60, axis_y = 70;
    const double H = 120 + 18.0 * static_cast<double>(t) + 10.0 * static_cast<double>(report.groups.size());
    auto px = [&](double r) { return L + (r - 1.0) / (static_cast<double>(t) - 1.0) * (W - L - R); };

    std::string out = header(W, H);
    out += text(W / 2, 22, title, "middle", 14);
    out += line(px(1), axis_y, px(static_cast<double>(t)), axis_y, "black", 1.5);
    for (std::size_t r = 1; r <= t; ++r) {
        out += line(px(double(r)), axis_y - 5, px(double(r)), axis_y, "black");
        out += text(px(double(r)), axis_y - 9, std::to_string(r));
    }
    std::vector<std::size_t> order(t);
    for (std::size_t i = 0; i < t; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return report.avg_ranks[a] < report.avg_ranks[b]; });
    double gy = axis_y + 12;
    for (const auto& g : report.groups) {
        if (g.size() < 2) continue;
        double lo = report.avg_ranks[g.front()], hi = lo;
        for (auto i : g) {
            lo = std::min(lo, report.avg_ranks[i]);
            hi = std::max(hi, report.avg_ranks[i]);
        }
        out += line(px(lo) - 3, gy, px(hi) + 3, gy, "black", 3);
        gy += 10;
    }
    const double base = gy + 14;
    for (std::size_t pos = 0; pos < t; ++pos) {
        const auto i = order[pos];
        const double x = px(report.avg_ranks[i]);
        const double y = base + 18.0 * static_cast<double>(pos);
        const bool left = pos < (t + 1) / 2;
        const double end = left ? L - 10 : W - R + 10;
        out += line(x, axis_y, x, y, "#555");
        out += line(x, y, end + (left ? 0 : 0), y, "#555");
        out += text(left ? end + 2 : end - 2, y - 3,
                    report.treatments[i] + " (" + num(report.avg_ranks[i]) + ")", left ? "start" : "end");
    }
    return out + "</svg>\n";
}

} // namespace ouq::render
