#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "styledisp/matrix.hpp"

namespace styledisp {

struct PlotBounds {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
};

// Bounding box of the first two columns, padded by 5%.
PlotBounds bounds_of(const Matrix& coords);

// Scatter of the first two columns with the centroid marked and the
// dispersion value printed under the title.
std::string scatter_svg(const Matrix& points, std::string_view title, double d_bar,
                        const std::optional<PlotBounds>& bounds = std::nullopt);

}  // namespace styledisp
