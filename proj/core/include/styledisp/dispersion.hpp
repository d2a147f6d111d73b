#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "styledisp/corpus.hpp"
#include "styledisp/matrix.hpp"
#include "styledisp/reducer.hpp"
#include "styledisp/stats.hpp"

namespace styledisp {

// Euclidean distance of each member row to the members' centroid, in
// member order.
std::vector<double> centroid_distances(const Matrix& coords, std::span<const std::size_t> member_rows);

// Elementwise mean over seeds of equally long distance lists.
std::vector<double> seed_mean_distances(const std::vector<std::vector<double>>& per_seed);

// Mean of the per-document seed-averaged distances.
double cell_dispersion(std::span<const double> per_doc);

struct CellDispersion {
    CellId cell;
    std::vector<std::string> doc_ids;
    std::vector<double> per_doc;  // seed-averaged distance per document
    double mean = 0.0;
};

struct DispersionTable {
    std::vector<CellDispersion> cells;  // canonical cell order, present cells only
    std::vector<std::uint64_t> seeds;
    ReductionMethod method = ReductionMethod::UMAP;
    std::size_t target_dim = 0;

    const CellDispersion& cell(CellId id) const;
    bool has(CellId id) const;
};

// Per seed and cell: centroid of that seed's coordinates, then distances;
// averaged over seeds per document. `row_cells[i]` labels coordinate row i.
DispersionTable compute_dispersion(const std::vector<ReducedSet>& reductions, const std::vector<CellId>& row_cells,
                                   const std::vector<std::string>& doc_ids);

enum class HypothesisId { TPrime, TDoublePrime, SPrime, SDoublePrime, TopicOverStyle };

inline constexpr std::array<HypothesisId, 5> kAllHypotheses{
    HypothesisId::TPrime, HypothesisId::TDoublePrime, HypothesisId::SPrime, HypothesisId::SDoublePrime,
    HypothesisId::TopicOverStyle};

// T', T'', S', S'', T-S
std::string_view hypothesis_name(HypothesisId id);
// Predicted (larger, smaller) cell pair.
std::pair<CellId, CellId> hypothesis_cells(HypothesisId id);

struct HypothesisVerdict {
    HypothesisId id = HypothesisId::TPrime;
    CellId lhs;
    CellId rhs;
    double lhs_mean = 0.0;
    double rhs_mean = 0.0;
    bool direction_ok = false;  // mean(lhs) > mean(rhs), strictly
    double t_stat = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    std::string stars;
};

std::vector<HypothesisVerdict> test_hypotheses(const DispersionTable& table,
                                               stats::TTestKind kind = stats::TTestKind::Welch);

struct ModelVerdicts {
    std::string model_id;
    std::vector<HypothesisVerdict> verdicts;
};

// One row per model; per hypothesis a PASS/FAIL cell and a star column.
std::string hypotheses_csv(const std::vector<ModelVerdicts>& rows);
std::string hypotheses_json(const std::vector<ModelVerdicts>& rows, stats::TTestKind kind);
// Terminal rendering with check/cross glyphs.
std::string hypotheses_text(const std::vector<ModelVerdicts>& rows);

std::string dispersion_json(const DispersionTable& table, std::string_view model_id);
DispersionTable parse_dispersion_json(std::string_view json_text);

}  // namespace styledisp
