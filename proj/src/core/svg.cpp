#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cavkit {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 64, kRight = 24, kTop = 40, kBottom = 48;

const char* const kColors[] = {"#1f6fb4", "#d95f02", "#2a9d4e", "#b03a8c", "#7a6a2f", "#555555"};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out.push_back(c);
    }
    return out;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    void widen(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

// Nice tick spacing: 1/2/5 * 10^k covering the range in ~5 steps.
std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    if (span <= 0.0) return {lo};
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step)
        out.push_back(std::fabs(t) < 1e-12 * span ? 0.0 : t);
    return out;
}

void open_svg(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">"
       << escape(title) << "</text>\n";
}

void draw_axes(std::ostringstream& os, const Range& xr, const Range& yr,
               const std::string& x_label, const std::string& y_label) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    auto sx = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
    auto sy = [&](double v) { return y0 - (v - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };

    os << "<g stroke=\"#333\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
       << "\"/>\n";
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
       << "\"/>\n</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double t : ticks(xr.lo, xr.hi)) {
        const double px = sx(t);
        os << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\""
           << y0 + 4 << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << px << "\" y=\"" << y0 + 17 << "\" text-anchor=\"middle\">"
           << fmt(t) << "</text>\n";
    }
    for (double t : ticks(yr.lo, yr.hi)) {
        const double py = sy(t);
        os << "<line x1=\"" << x0 - 4 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\""
           << py << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << x0 - 7 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
           << fmt(t) << "</text>\n";
    }
    os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 10
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << (y0 + y1) / 2
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
       << (y0 + y1) / 2 << ")\">" << escape(y_label) << "</text>\n</g>\n";
}

void draw_legend(std::ostringstream& os, const std::vector<std::string>& labels) {
    double y = kTop + 4;
    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const char* color = kColors[i % std::size(kColors)];
        os << "<rect x=\"" << kWidth - kRight - 150 << "\" y=\"" << y - 9
           << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
        os << "<text x=\"" << kWidth - kRight - 133 << "\" y=\"" << y + 1 << "\">"
           << escape(labels[i]) << "</text>\n";
        y += 17;
    }
    os << "</g>\n";
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PlotSeries>& series) {
    Range xr{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    Range yr{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            xr.widen(x);
            yr.widen(y);
        }
    if (xr.lo > xr.hi) {
        xr = {0, 1};
        yr = {0, 1};
    }
    if (xr.lo == xr.hi) xr.hi = xr.lo + 1.0;
    if (yr.lo == yr.hi) yr.hi = yr.lo + 1.0;

    std::ostringstream os;
    open_svg(os, title);
    draw_axes(os, xr, yr, x_label, y_label);
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    auto sx = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
    auto sy = [&](double v) { return y0 - (v - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kColors[i % std::size(kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : series[i].points) os << fmt(sx(x)) << "," << fmt(sy(y)) << " ";
        os << "\"/>\n";
        for (const auto& [x, y] : series[i].points)
            os << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y))
               << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        labels.push_back(series[i].label);
    }
    draw_legend(os, labels);
    os << "</svg>\n";
    return os.str();
}

std::string render_histogram(const std::string& title, const std::string& x_label,
                             const std::vector<HistogramSeries>& series) {
    Range xr{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    Range yr{0.0, 0.0};
    for (const auto& s : series) {
        for (double e : s.edges) xr.widen(e);
        for (double c : s.counts) yr.widen(c);
    }
    if (xr.lo > xr.hi) xr = {0, 1};
    if (xr.lo == xr.hi) xr.hi = xr.lo + 1.0;
    if (yr.hi == 0.0) yr.hi = 1.0;

    std::ostringstream os;
    open_svg(os, title);
    draw_axes(os, xr, yr, x_label, "count");
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    auto sx = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
    auto sy = [&](double v) { return y0 - (v - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kColors[i % std::size(kColors)];
        for (std::size_t b = 0; b < series[i].counts.size(); ++b) {
            const double px = sx(series[i].edges[b]);
            const double pw = sx(series[i].edges[b + 1]) - px;
            const double py = sy(series[i].counts[b]);
            os << "<rect x=\"" << fmt(px) << "\" y=\"" << fmt(py) << "\" width=\"" << fmt(pw)
               << "\" height=\"" << fmt(y0 - py) << "\" fill=\"" << color
               << "\" fill-opacity=\"0.45\"/>\n";
        }
        labels.push_back(series[i].label);
    }
    draw_legend(os, labels);
    os << "</svg>\n";
    return os.str();
}

}  // namespace cavkit
