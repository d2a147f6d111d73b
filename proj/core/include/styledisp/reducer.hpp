#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "styledisp/matrix.hpp"

namespace styledisp {

enum class ReductionMethod { PCA, UMAP, FullD };

std::string_view method_name(ReductionMethod method);
ReductionMethod parse_method(std::string_view name);

struct ReducedSet {
    ReductionMethod method = ReductionMethod::FullD;
    std::size_t target_dim = 0;
    std::optional<std::uint64_t> seed;    // UMAP only
    Matrix coords;                        // n_rows x target_dim, input row order
    std::vector<double> explained_variance;  // PCA only, non-increasing
    double total_variance = 0.0;          // PCA only
};

// Projection of the mean-centered rows onto the top-d principal axes.
// Requires 1 <= d <= min(n_rows - 1, n_cols). Each axis is signed so its
// largest-magnitude loading is positive. Identical rows give zero coords.
ReducedSet pca_reduce(const Matrix& m, std::size_t d);

// Pass-through at full dimensionality.
ReducedSet full_dimension(const Matrix& m);

struct UmapParams {
    std::size_t n_neighbors = 15;
    double min_dist = 0.1;
    double spread = 1.0;
    std::size_t n_epochs = 200;
    std::size_t negative_sample_rate = 5;
    double learning_rate = 1.0;
    // Output-space membership curve 1 / (1 + a d^(2b)). Zero means "fit
    // from min_dist and spread".
    double curve_a = 0.0;
    double curve_b = 0.0;

    void validate() const;
    // Copy with curve_a / curve_b filled in.
    UmapParams resolved() const;
};

// Least-squares fit of (a, b) to the min_dist membership curve.
std::pair<double, double> fit_membership_curve(double min_dist, double spread);

// Seed-deterministic UMAP: exact kNN, smooth-kNN calibration, fuzzy union,
// spectral initialization (seeded random fallback), then negative-sampling
// SGD with edges visited in a seeded shuffled order each epoch.
ReducedSet umap_reduce(const Matrix& m, std::size_t d, const UmapParams& params, std::uint64_t seed);

// One independent reduction per seed, in seed order.
std::vector<ReducedSet> multi_seed_reduce(const Matrix& m, std::size_t d, const UmapParams& params,
                                          std::span<const std::uint64_t> seeds, std::size_t max_parallel = 1);

// Reduced coordinates in the embedding record format with a header that also
// carries {method, target_dim, seed}.
void write_reduced(const ReducedSet& set, const std::vector<std::string>& doc_ids, std::string_view model_id,
                   std::ostream& out);
struct ImportedReduction {
    std::string model_id;
    std::vector<std::string> doc_ids;
    ReducedSet set;
};
ImportedReduction read_reduced(std::istream& in, std::string_view source_name = "<stream>");
void export_reduced(const ReducedSet& set, const std::vector<std::string>& doc_ids, std::string_view model_id,
                    const std::filesystem::path& path);
ImportedReduction import_reduced(const std::filesystem::path& path);

// UMAP building blocks, exposed for invariant tests.
namespace umap_detail {

struct KnnGraph {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::size_t> indices;  // n * k, nearest first, self excluded
    std::vector<double> distances;     // n * k
};

KnnGraph exact_knn(const Matrix& m, std::size_t k);

struct Calibration {
    std::vector<double> rho;
    std::vector<double> sigma;
    std::vector<double> residual;  // |sum_j exp(-max(0, d_ij - rho_i) / sigma_i) - log2(k)|
};

Calibration calibrate(const KnnGraph& graph);

// Directed membership exp(-max(0, d_ij - rho_i) / sigma_i) for neighbor slot s of i.
double membership(const KnnGraph& graph, const Calibration& cal, std::size_t i, std::size_t slot);

struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;  // i < j
    double weight = 0.0;
};

// Symmetrized w = a + b - a*b over both directed memberships; sorted by (i, j).
std::vector<Edge> fuzzy_union(const KnnGraph& graph, const Calibration& cal);

// Smallest nontrivial eigenvectors of the symmetric normalized Laplacian via
// seeded block power iteration; nullopt if not converged in max_iterations.
std::optional<Matrix> spectral_embedding(std::size_t n, const std::vector<Edge>& edges, std::size_t d,
                                         std::uint64_t seed, std::size_t max_iterations = 10000);

}  // namespace umap_detail

}  // namespace styledisp
