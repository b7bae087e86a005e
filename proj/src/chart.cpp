#include "fuzzyepi/chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <locale>
#include <stdexcept>

#include "fuzzyepi/csv.hpp"

namespace fuzzyepi {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 30.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

// Largest of 1/2/5 * 10^k not above `span / 4`, so axes carry 4-8 ticks.
double nice_step(double span) {
    const double raw = span / 4.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {5.0, 2.0, 1.0}) {
        if (mag * m <= raw) return mag * m;
    }
    return mag;
}

std::string poly_points(const TimeSeries& series, std::uint32_t DailyRecord::*field, double x0,
                        double x_scale, double y1, double y_scale) {
    std::string pts;
    for (const DailyRecord& r : series) {
        pts += format_number(x0 + r.day * x_scale);
        pts += ',';
        pts += format_number(y1 - static_cast<double>(r.*field) * y_scale);
        pts += ' ';
    }
    if (!pts.empty()) pts.pop_back();
    return pts;
}

} // namespace

void write_chart(const std::string& path, const TimeSeries& series) {
    if (series.empty()) throw std::invalid_argument("write_chart requires a non-empty series");

    std::uint32_t y_max = 1;
    for (const DailyRecord& r : series) {
        y_max = std::max({y_max, r.infected, r.new_infections});
    }
    const double day_span = std::max(1, series.back().day - series.front().day);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double x_scale = plot_w / day_span;
    const double y_scale = plot_h / static_cast<double>(y_max);
    const double x0 = kLeft - series.front().day * x_scale;
    const double y1 = kTop + plot_h;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.imbue(std::locale::classic());

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">Infections per day</text>\n";

    const double y_step = nice_step(static_cast<double>(y_max));
    for (double v = 0.0; v <= static_cast<double>(y_max) + 1e-9; v += y_step) {
        const double y = y1 - v * y_scale;
        out << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + plot_w
            << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << format_number(v) << "</text>\n";
    }
    const double x_step = nice_step(day_span);
    for (double v = 0.0; v <= day_span + 1e-9; v += x_step) {
        const double x = kLeft + v * x_scale;
        out << "<line x1=\"" << x << "\" y1=\"" << y1 << "\" x2=\"" << x << "\" y2=\"" << y1 + 5
            << "\" stroke=\"#444444\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << y1 + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << format_number(series.front().day + v) << "</text>\n";
    }

    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << y1
        << "\" stroke=\"#444444\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << y1 << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << y1 << "\" stroke=\"#444444\"/>\n";
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">day</text>\n";
    out << "<text x=\"18\" y=\"" << kTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << kTop + plot_h / 2 << ")\">agents</text>\n";

    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\""
        << poly_points(series, &DailyRecord::infected, x0, x_scale, y1, y_scale) << "\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"1.5\" points=\""
        << poly_points(series, &DailyRecord::new_infections, x0, x_scale, y1, y_scale) << "\"/>\n";

    const double lx = kLeft + plot_w - 190;
    out << "<rect x=\"" << lx << "\" y=\"" << kTop + 6 << "\" width=\"180\" height=\"44\" "
        << "fill=\"white\" stroke=\"#cccccc\"/>\n";
    out << "<line x1=\"" << lx + 10 << "\" y1=\"" << kTop + 20 << "\" x2=\"" << lx + 34
        << "\" y2=\"" << kTop + 20 << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << lx + 40 << "\" y=\"" << kTop + 24
        << "\" font-family=\"sans-serif\" font-size=\"12\">active infections</text>\n";
    out << "<line x1=\"" << lx + 10 << "\" y1=\"" << kTop + 38 << "\" x2=\"" << lx + 34
        << "\" y2=\"" << kTop + 38 << "\" stroke=\"#ff7f0e\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << lx + 40 << "\" y=\"" << kTop + 42
        << "\" font-family=\"sans-serif\" font-size=\"12\">new infections</text>\n";

    out << "</svg>\n";
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
}

} // namespace fuzzyepi
