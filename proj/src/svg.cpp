#include "rgas/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rgas {

namespace {

constexpr int kWidth = 640, kHeight = 440;
constexpr int kLeft = 70, kRight = 30, kTop = 50, kBottom = 60;

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(4) << v;
    return ss.str();
}

} // namespace

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<ChartSeries>& series, bool log_x) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("write_line_chart_svg: x/y size mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = log_x ? std::log10(s.x[i]) : s.x[i];
            const double e = s.y_err.empty() ? 0.0 : s.y_err[i];
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, s.y[i] - e);
            ymax = std::max(ymax, s.y[i] + e);
        }
    }
    if (!(xmax >= xmin)) { xmin = 0.0; xmax = 1.0; }
    if (!(ymax >= ymin)) { ymin = 0.0; ymax = 1.0; }
    if (xmax == xmin) { xmin -= 0.5; xmax += 0.5; }
    if (ymax == ymin) { ymin -= 0.5; ymax += 0.5; }
    const double ypad = 0.08 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) {
        const double u = log_x ? std::log10(x) : x;
        return kLeft + (u - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight);
    };
    auto py = [&](double y) {
        return kHeight - kBottom - (y - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom);
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // axes
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double xshown = log_x ? std::pow(10.0, xv) : xv;
        const double xpix = kLeft + (xv - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight);
        out << "<line x1=\"" << xpix << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << xpix
            << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << xpix << "\" y=\"" << kHeight - kBottom + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(xshown) << "</text>\n";
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        const double ypix = py(yv);
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << ypix << "\" x2=\"" << kLeft
            << "\" y2=\"" << ypix << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << ypix + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(yv)
            << "</text>\n";
    }
    out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << (kTop + kHeight - kBottom) / 2 << ")\">" << y_label
        << "</text>\n";

    int legend_y = kTop + 4;
    for (const auto& s : series) {
        if (s.x.empty()) continue;
        std::ostringstream pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts << px(s.x[i]) << "," << py(s.y[i]) << " ";
        out << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
                << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";
            if (!s.y_err.empty() && s.y_err[i] > 0.0) {
                out << "<line x1=\"" << px(s.x[i]) << "\" y1=\"" << py(s.y[i] - s.y_err[i])
                    << "\" x2=\"" << px(s.x[i]) << "\" y2=\"" << py(s.y[i] + s.y_err[i])
                    << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
            }
        }
        out << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << legend_y
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << s.color << "\">" << s.name << "</text>\n";
        legend_y += 16;
    }
    out << "</svg>\n";
}

} // namespace rgas
