#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "styledisp/embedding.hpp"
#include "styledisp/matrix.hpp"

namespace styledisp {

struct Assignment {
    std::vector<int> labels;  // each in [0, k)
    int k = 0;
    double inertia = 0.0;     // sum of squared distances to own centroid
    Matrix centroids;
    // Inertia after every Lloyd iteration of the winning restart.
    std::vector<double> inertia_trace;
};

// k-means++ seeding, Lloyd iterations until the assignment stops changing or
// 300 iterations, best of `restarts` by inertia. Bit-deterministic in seed.
Assignment kmeans(const Matrix& coords, int k, std::uint64_t seed, int restarts = 10);

// (1/N) sum over clusters of the largest class count in the cluster.
double purity(std::span<const int> clusters, std::span<const int> truth);

// 2 I(clusters; truth) / (H(clusters) + H(truth)), natural log; 1 when both
// partitions are trivial.
double nmi(std::span<const int> clusters, std::span<const int> truth);

struct ValidationScores {
    double purity = 0.0;
    double nmi = 0.0;
    double s_bar = 0.0;
};

double sbar(double purity, double nmi);
ValidationScores score(std::span<const int> clusters, std::span<const int> truth);

struct MajorityEntry {
    int cluster = 0;
    int majority_class = 0;
    double fraction = 0.0;
    std::size_t size = 0;
    bool tie = false;
};

// Per non-empty cluster: its most frequent class (lowest id wins ties).
std::vector<MajorityEntry> majority_map(std::span<const int> clusters, std::span<const int> truth);

// Dimension key in sweeps; 0 stands for FullD.
inline constexpr std::size_t kFullDim = 0;
std::string dim_label(std::size_t dim);

struct SweepRow {
    std::string model_id;
    std::map<std::size_t, ValidationScores> by_dim;
};

struct SweepTable {
    std::vector<std::size_t> dims;  // in requested order
    std::vector<SweepRow> rows;     // sorted by score at the first dim (2D when requested), descending
    std::map<std::size_t, double> mean_sbar;
    std::map<std::size_t, double> median_sbar;
    std::vector<std::size_t> ranking;  // dims by mean s_bar, descending
};

struct SweepOptions {
    std::vector<std::size_t> dims{2, 3, 5, 10, kFullDim};
    int k = 4;
    std::uint64_t seed = 0;
    int restarts = 10;
};

// PCA (or pass-through for FullD) -> kmeans -> scores for every model and dim.
// All sets must cover the same doc_ids in the same order as `truth`.
SweepTable sweep(const std::vector<EmbeddingSet>& sets, std::span<const int> truth, const SweepOptions& options);

std::string sweep_csv(const SweepTable& table);
std::string sweep_json(const SweepTable& table);

}  // namespace styledisp
