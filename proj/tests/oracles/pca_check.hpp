#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "styledisp/reducer.hpp"

namespace oracle {

struct PcaComparison {
    double max_sin_angle = 0.0;     // largest principal angle between the d-dim subspaces (sine)
    double max_variance_error = 0.0;
};

// Recovers the axes pca_reduce projected onto (least squares against the
// centered data) and compares them with the covariance eigenvectors.
inline PcaComparison compare_pca(const styledisp::Matrix& m, std::size_t d) {
    const auto reduced = styledisp::pca_reduce(m, d);
    const Eigen::MatrixXd x = m;
    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd coords = reduced.coords;
    const Eigen::MatrixXd axes = centered.colPivHouseholderQr().solve(coords);

    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    const auto eig = jacobi_eigen(covariance(rows));

    Eigen::MatrixXd ref(m.cols(), d);
    for (std::size_t k = 0; k < d; ++k)
        for (Eigen::Index j = 0; j < m.cols(); ++j) ref(j, k) = eig.vectors[k][j];

    // Orthonormal basis of the recovered axes, then sin of the largest angle
    // = spectral norm of the part of `ref` outside span(axes).
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(axes);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.cols(), d);
    const Eigen::MatrixXd residual = ref - q * (q.transpose() * ref);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);

    PcaComparison out;
    out.max_sin_angle = svd.singularValues().maxCoeff();
    for (std::size_t k = 0; k < d; ++k)
        out.max_variance_error = std::max(out.max_variance_error, std::abs(reduced.explained_variance[k] - eig.values[k]));
    return out;
}

}  // namespace oracle
