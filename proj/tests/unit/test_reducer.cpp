#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "../oracles/pca_check.hpp"
#include "styledisp/error.hpp"
#include "styledisp/reducer.hpp"
#include "styledisp/rng.hpp"
#include "support.hpp"

using namespace styledisp;

namespace {

Matrix random_rotation(Rng& rng, Eigen::Index n) {
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return Matrix(qr.householderQ() * Eigen::MatrixXd::Identity(n, n));
}

double max_pairwise_distance_gap(const Matrix& a, const Matrix& b) {
    double gap = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i + 1; j < a.rows(); ++j)
            gap = std::max(gap, std::abs((a.row(i) - a.row(j)).norm() - (b.row(i) - b.row(j)).norm()));
    return gap;
}

}  // namespace

TEST(Pca, MatchesJacobiOracle) {
    Rng rng(123);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix m = testing_support::random_matrix(rng, 50, 8);
        for (std::size_t d : {1u, 3u, 8u}) {
            auto cmp = oracle::compare_pca(m, d);
            EXPECT_LT(cmp.max_sin_angle, 1e-6);
            EXPECT_LT(cmp.max_variance_error, 1e-9);
        }
    }
}

TEST(Pca, VarianceOrderingAndTotal) {
    Rng rng(9);
    Matrix m = testing_support::random_matrix(rng, 30, 6);
    auto r = pca_reduce(m, 4);
    double sum = 0.0;
    for (std::size_t k = 0; k < r.explained_variance.size(); ++k) {
        sum += r.explained_variance[k];
        if (k > 0) EXPECT_LE(r.explained_variance[k], r.explained_variance[k - 1]);
    }
    EXPECT_LE(sum, r.total_variance * (1.0 + 1e-12));
    EXPECT_EQ(r.coords.rows(), 30);
    EXPECT_EQ(r.coords.cols(), 4);
}

TEST(Pca, CollinearAndDegenerate) {
    Matrix line(10, 3);
    for (int i = 0; i < 10; ++i) line.row(i) << i, 2.0 * i - 1.0, -0.5 * i + 4.0;
    auto r = pca_reduce(line, 1);
    EXPECT_GE(r.explained_variance[0] / r.total_variance, 0.9999);

    Matrix same = Matrix::Constant(5, 3, 2.5);
    auto z = pca_reduce(same, 2);
    EXPECT_TRUE(z.coords.isZero(0.0));
    EXPECT_EQ(z.explained_variance, std::vector<double>({0.0, 0.0}));

    EXPECT_THROW(pca_reduce(same, 0), InvalidArgument);
    EXPECT_THROW(pca_reduce(same, 4), InvalidArgument);
    EXPECT_THROW(pca_reduce(Matrix::Zero(3, 5), 3), InvalidArgument);
}

TEST(Pca, SignConventionLargestLoadingPositive) {
    Rng rng(31);
    Matrix m = testing_support::random_matrix(rng, 40, 5);
    auto r = pca_reduce(m, 3);
    const Eigen::MatrixXd x = m;
    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd axes = centered.colPivHouseholderQr().solve(Eigen::MatrixXd(r.coords));
    for (Eigen::Index k = 0; k < axes.cols(); ++k) {
        Eigen::Index idx = 0;
        axes.col(k).cwiseAbs().maxCoeff(&idx);
        EXPECT_GT(axes(idx, k), 0.0);
    }
    // Negating the input flips every axis, so the convention restores the
    // same loadings and negated coordinates.
    auto neg = pca_reduce(Matrix(-m), 3);
    EXPECT_LT((neg.coords + r.coords).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Pca, TranslationAndRotation) {
    Rng rng(77);
    Matrix m = testing_support::random_matrix(rng, 25, 6);
    auto base = pca_reduce(m, 3);

    Matrix shifted = m;
    shifted.rowwise() += Eigen::RowVectorXd::LinSpaced(6, -40.0, 90.0);
    EXPECT_LT((pca_reduce(shifted, 3).coords - base.coords).cwiseAbs().maxCoeff(), 1e-8);

    Matrix rotated = m * random_rotation(rng, 6);
    EXPECT_LT(max_pairwise_distance_gap(pca_reduce(rotated, 3).coords, base.coords), 1e-8);
}

TEST(FullDimension, PassThrough) {
    Rng rng(1);
    Matrix m = testing_support::random_matrix(rng, 4, 3);
    auto r = full_dimension(m);
    EXPECT_EQ(r.coords, m);
    EXPECT_EQ(r.method, ReductionMethod::FullD);
    EXPECT_EQ(r.target_dim, 3u);
}

TEST(UmapCurve, DefaultFit) {
    auto [a, b] = fit_membership_curve(0.1, 1.0);
    EXPECT_NEAR(a, 1.577, 0.02);
    EXPECT_NEAR(b, 0.895, 0.01);
}

TEST(UmapParams, Validation) {
    UmapParams p;
    EXPECT_NO_THROW(p.validate());
    p.n_neighbors = 1;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = {};
    p.min_dist = 0.0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = {};
    p.n_epochs = 0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = {};
    p.learning_rate = -1.0;
    EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(UmapDetail, KnnCalibrationAndUnion) {
    Rng rng(5);
    Matrix m = testing_support::random_matrix(rng, 60, 5);
    const std::size_t k = 10;
    auto g = umap_detail::exact_knn(m, k);
    ASSERT_EQ(g.indices.size(), 60 * k);
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t s = 0; s < k; ++s) {
            EXPECT_NE(g.indices[i * k + s], i);
            if (s > 0) EXPECT_LE(g.distances[i * k + s - 1], g.distances[i * k + s]);
        }
        // Brute-force nearest neighbour check.
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < g.n; ++j)
            if (j != i) best = std::min(best, (m.row(i) - m.row(j)).norm());
        EXPECT_NEAR(g.distances[i * k], best, 1e-12);
    }
    auto cal = umap_detail::calibrate(g);
    for (std::size_t i = 0; i < g.n; ++i) {
        EXPECT_LT(cal.residual[i], 1e-5);
        EXPECT_EQ(umap_detail::membership(g, cal, i, 0), 1.0);
    }
    auto edges = umap_detail::fuzzy_union(g, cal);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        EXPECT_LT(edges[e].i, edges[e].j);
        EXPECT_GE(edges[e].weight, 0.0);
        EXPECT_LE(edges[e].weight, 1.0);
        if (e > 0)
            EXPECT_TRUE(std::make_pair(edges[e - 1].i, edges[e - 1].j) < std::make_pair(edges[e].i, edges[e].j));
    }
}

TEST(Umap, SameSeedBitIdenticalAndFinite) {
    Rng rng(8);
    Matrix m = testing_support::random_matrix(rng, 80, 10);
    UmapParams p;
    p.n_epochs = 60;
    auto a = umap_reduce(m, 2, p, 17);
    auto b = umap_reduce(m, 2, p, 17);
    EXPECT_EQ(a.coords, b.coords);
    EXPECT_TRUE(a.coords.allFinite());
    auto c = umap_reduce(m, 2, p, 18);
    EXPECT_NE(a.coords, c.coords);
    EXPECT_EQ(a.seed, std::optional<std::uint64_t>(17));
}

TEST(Umap, SeparatesDistantBlobs) {
    Rng rng(13);
    Matrix m(100, 16);
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 16; ++j) m(i, j) = (j == 0 && i >= 50 ? 100.0 : 0.0) + rng.normal(0.0, 0.1);
    auto r = umap_reduce(m, 2, UmapParams{}, 3);
    Eigen::RowVector2d c0 = r.coords.topRows(50).colwise().mean();
    Eigen::RowVector2d c1 = r.coords.bottomRows(50).colwise().mean();
    const double between = (c0 - c1).norm();
    for (int i = 0; i < 100; ++i) EXPECT_LT((r.coords.row(i) - (i < 50 ? c0 : c1)).norm(), between);
}

TEST(Umap, Preconditions) {
    Matrix m = Matrix::Zero(15, 3);
    for (int i = 0; i < 15; ++i) m(i, 0) = i;
    EXPECT_THROW(umap_reduce(m, 2, UmapParams{}, 0), InvalidArgument);
    Matrix bad = Matrix::Zero(30, 3);
    bad(4, 1) = std::nan("");
    EXPECT_THROW(umap_reduce(bad, 2, UmapParams{}, 0), DataError);
}

TEST(MultiSeed, OrderAndErrors) {
    Rng rng(21);
    Matrix m = testing_support::random_matrix(rng, 40, 4);
    UmapParams p;
    p.n_epochs = 30;
    std::vector<std::uint64_t> seeds{5, 2, 9};
    auto all = multi_seed_reduce(m, 2, p, seeds, 2);
    ASSERT_EQ(all.size(), 3u);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        EXPECT_EQ(all[i].seed, std::optional<std::uint64_t>(seeds[i]));
        EXPECT_EQ(all[i].coords, umap_reduce(m, 2, p, seeds[i]).coords);
    }
    std::vector<std::uint64_t> none;
    std::vector<std::uint64_t> dup{1, 1};
    EXPECT_THROW(multi_seed_reduce(m, 2, p, none), InvalidArgument);
    EXPECT_THROW(multi_seed_reduce(m, 2, p, dup), InvalidArgument);
}

TEST(ReducedIo, RoundTrip) {
    Rng rng(2);
    Matrix m = testing_support::random_matrix(rng, 30, 4);
    UmapParams p;
    p.n_epochs = 20;
    auto r = umap_reduce(m, 2, p, 4);
    std::vector<std::string> ids;
    for (int i = 0; i < 30; ++i) ids.push_back("doc" + std::to_string(i));
    std::stringstream ss;
    write_reduced(r, ids, "model-x", ss);
    auto back = read_reduced(ss);
    EXPECT_EQ(back.model_id, "model-x");
    EXPECT_EQ(back.doc_ids, ids);
    EXPECT_EQ(back.set.coords, r.coords);
    EXPECT_EQ(back.set.method, ReductionMethod::UMAP);
    EXPECT_EQ(back.set.seed, r.seed);
    std::stringstream junk("{\"kind\":\"embeddings\"}\n");
    EXPECT_THROW(read_reduced(junk), DataError);
}
