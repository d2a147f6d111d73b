#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace styledisp {

// Rows are documents in corpus order, columns are dimensions.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Throws DataError naming the first non-finite entry.
void require_finite(const Matrix& m, std::string_view context);

// Copies the listed rows, in the given order.
Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& rows);

// "%.17g": shortest form that always round-trips a double.
std::string format_double(double value);

}  // namespace styledisp
