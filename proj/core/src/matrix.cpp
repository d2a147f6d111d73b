#include "styledisp/matrix.hpp"

#include <cmath>
#include <cstdio>

#include "styledisp/error.hpp"

namespace styledisp {

void require_finite(const Matrix& m, std::string_view context) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j))) {
                throw DataError(std::string(context) + ": non-finite value at row " + std::to_string(i) +
                                ", column " + std::to_string(j));
            }
        }
    }
}

Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= static_cast<std::size_t>(m.rows())) {
            throw InvalidArgument("take_rows: row " + std::to_string(rows[i]) + " out of range");
        }
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

std::string format_double(double value) {
    char buffer[32];
    const int n = std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return std::string(buffer, static_cast<std::size_t>(n));
}

}  // namespace styledisp
