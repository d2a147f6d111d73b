#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "styledisp/corpus.hpp"
#include "styledisp/dispersion.hpp"
#include "styledisp/stylometry.hpp"

namespace styledisp {

enum class PairingMode { Cartesian, Indexed };

std::string_view pairing_name(PairingMode mode);
PairingMode parse_pairing(std::string_view name);

// Column-oriented: delta_d[k] pairs with delta_f[g][k].
struct DeltaSeries {
    CellId x;
    CellId y;
    PairingMode mode = PairingMode::Cartesian;
    std::vector<double> delta_d;
    std::array<std::vector<double>, kFeatureGroups.size()> delta_f;

    std::size_t size() const { return delta_d.size(); }
};

// Cartesian: every (i in X, j in Y), i outer. Indexed: i-th with i-th.
DeltaSeries delta_series(CellId x, CellId y, const DispersionTable& dispersion, const FeatureTable& features,
                         PairingMode mode = PairingMode::Cartesian);

struct CorrelationEntry {
    FeatureGroup group;
    bool masked = false;
    std::string mask_reason;  // "not significant" or "zero variance"
    double r = 0.0;
    double p = 1.0;
    std::string stars;
};

struct CorrelationMatrix {
    CellId x;
    CellId y;
    PairingMode mode = PairingMode::Cartesian;
    std::size_t n = 0;
    std::vector<CorrelationEntry> entries;  // figure order

    const CorrelationEntry& entry(FeatureGroup group) const;
};

// Masks a feature when its ground shift from y to x has p >= .05, or when
// the feature delta is constant.
CorrelationMatrix correlation_matrix(const DeltaSeries& series, const GroundFrequencyTable& ground);

std::string correlation_csv(const std::vector<CorrelationMatrix>& matrices);
std::string correlation_json(const std::vector<CorrelationMatrix>& matrices, std::string_view model_id);

}  // namespace styledisp
