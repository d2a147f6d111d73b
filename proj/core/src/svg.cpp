#include "styledisp/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "styledisp/error.hpp"

namespace styledisp {

namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 40.0;

std::string num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", v);
    return buffer;
}

std::string escape(std::string_view s) {
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

}  // namespace

PlotBounds bounds_of(const Matrix& coords) {
    if (coords.rows() == 0 || coords.cols() < 2) throw InvalidArgument("bounds_of: need 2-D points");
    PlotBounds b{coords.col(0).minCoeff(), coords.col(0).maxCoeff(), coords.col(1).minCoeff(),
                 coords.col(1).maxCoeff()};
    const double px = std::max(b.x_max - b.x_min, 1e-9) * 0.05;
    const double py = std::max(b.y_max - b.y_min, 1e-9) * 0.05;
    return {b.x_min - px, b.x_max + px, b.y_min - py, b.y_max + py};
}

std::string scatter_svg(const Matrix& points, std::string_view title, double d_bar,
                        const std::optional<PlotBounds>& bounds) {
    if (points.rows() == 0 || points.cols() < 2) throw InvalidArgument("scatter_svg: need 2-D points");
    const PlotBounds b = bounds ? *bounds : bounds_of(points);
    const double span_x = b.x_max - b.x_min;
    const double span_y = b.y_max - b.y_min;
    auto sx = [&](double x) { return kMargin + (x - b.x_min) / span_x * (kWidth - 2 * kMargin); };
    auto sy = [&](double y) { return kHeight - kMargin - (y - b.y_min) / span_y * (kHeight - 2 * kMargin); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
        << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"#999\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"14\">" << escape(title) << "</text>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"34\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\">d&#772; = " << num(d_bar) << "</text>\n";
    out << "<g fill=\"#3b6ea5\" fill-opacity=\"0.6\">\n";
    double cx = 0.0;
    double cy = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        cx += points(i, 0);
        cy += points(i, 1);
        out << "<circle cx=\"" << num(sx(points(i, 0))) << "\" cy=\"" << num(sy(points(i, 1))) << "\" r=\"3\"/>\n";
    }
    out << "</g>\n";
    cx /= static_cast<double>(points.rows());
    cy /= static_cast<double>(points.rows());
    out << "<circle cx=\"" << num(sx(cx)) << "\" cy=\"" << num(sy(cy))
        << "\" r=\"6\" fill=\"#c0392b\" stroke=\"black\"/>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace styledisp
