#include "styledisp/correlate.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "styledisp/csv.hpp"
#include "styledisp/error.hpp"
#include "styledisp/stats.hpp"

namespace styledisp {

std::string_view pairing_name(PairingMode mode) {
    return mode == PairingMode::Cartesian ? "cartesian" : "indexed";
}

PairingMode parse_pairing(std::string_view name) {
    if (name == "cartesian") return PairingMode::Cartesian;
    if (name == "indexed") return PairingMode::Indexed;
    throw InvalidArgument("unknown pairing mode \"" + std::string(name) + "\"");
}

namespace {

std::vector<const StyleFeatures*> features_for(const CellDispersion& cell, const FeatureTable& features) {
    std::vector<const StyleFeatures*> out;
    out.reserve(cell.doc_ids.size());
    for (const std::string& id : cell.doc_ids) {
        const StyleFeatures* f = features.find(id);
        if (f == nullptr) throw DataError("no feature row for document " + id);
        out.push_back(f);
    }
    return out;
}

}  // namespace

DeltaSeries delta_series(CellId x, CellId y, const DispersionTable& dispersion, const FeatureTable& features,
                         PairingMode mode) {
    const CellDispersion& dx = dispersion.cell(x);
    const CellDispersion& dy = dispersion.cell(y);
    const auto fx = features_for(dx, features);
    const auto fy = features_for(dy, features);
    DeltaSeries s{x, y, mode, {}, {}};
    auto push = [&](std::size_t i, std::size_t j) {
        s.delta_d.push_back(dx.per_doc[i] - dy.per_doc[j]);
        for (std::size_t g = 0; g < kFeatureGroups.size(); ++g) {
            s.delta_f[g].push_back(fx[i]->groups[g] - fy[j]->groups[g]);
        }
    };
    if (mode == PairingMode::Indexed) {
        if (dx.per_doc.size() != dy.per_doc.size()) {
            throw InvalidArgument("indexed pairing needs equal cell sizes, got " + std::to_string(dx.per_doc.size()) +
                                  " and " + std::to_string(dy.per_doc.size()));
        }
        for (std::size_t i = 0; i < dx.per_doc.size(); ++i) push(i, i);
    } else {
        const std::size_t total = dx.per_doc.size() * dy.per_doc.size();
        s.delta_d.reserve(total);
        for (auto& column : s.delta_f) column.reserve(total);
        for (std::size_t i = 0; i < dx.per_doc.size(); ++i) {
            for (std::size_t j = 0; j < dy.per_doc.size(); ++j) push(i, j);
        }
    }
    return s;
}

const CorrelationEntry& CorrelationMatrix::entry(FeatureGroup group) const {
    for (const CorrelationEntry& e : entries) {
        if (e.group == group) return e;
    }
    throw InvalidArgument("correlation matrix has no entry for " + std::string(group_name(group)));
}

namespace {

bool constant(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

CorrelationMatrix correlation_matrix(const DeltaSeries& series, const GroundFrequencyTable& ground) {
    if (series.size() < 3) {
        throw InvalidArgument("correlation_matrix: needs at least 3 pairs, got " + std::to_string(series.size()));
    }
    CorrelationMatrix m{series.x, series.y, series.mode, series.size(), {}};
    const bool flat_d = constant(series.delta_d);
    for (std::size_t g = 0; g < kFeatureGroups.size(); ++g) {
        CorrelationEntry e;
        e.group = kFeatureGroups[g];
        const GroundComparison& shift = ground.comparison(e.group, series.x);
        if (shift.from != series.y) {
            throw InvalidArgument("ground comparison runs from " + std::string(cell_name(shift.from)) + ", not " +
                                  std::string(cell_name(series.y)));
        }
        if (!(shift.p < 0.05)) {
            e.masked = true;
            e.mask_reason = "not significant";
        } else if (flat_d || constant(series.delta_f[g])) {
            e.masked = true;
            e.mask_reason = "zero variance";
        } else {
            const stats::PearsonResult r = stats::pearson(series.delta_d, series.delta_f[g]);
            e.r = r.r;
            e.p = r.p;
            e.stars = std::string(stats::stars(r.p));
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

std::string correlation_csv(const std::vector<CorrelationMatrix>& matrices) {
    std::ostringstream out;
    out << "comparison,pairing,n,feature,r,p,stars,masked,reason\n";
    for (const CorrelationMatrix& m : matrices) {
        const std::string comparison = std::string(cell_name(m.x)) + "-" + std::string(cell_name(m.y));
        for (const CorrelationEntry& e : m.entries) {
            out << comparison << ',' << pairing_name(m.mode) << ',' << m.n << ',' << group_name(e.group) << ',';
            if (e.masked) {
                out << "-,-,," << "true," << csv::field(e.mask_reason);
            } else {
                out << csv::number(e.r) << ',' << csv::number(e.p) << ',' << e.stars << ",false,";
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string correlation_json(const std::vector<CorrelationMatrix>& matrices, std::string_view model_id) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    out["model_id"] = std::string(model_id);
    out["comparisons"] = nlohmann::ordered_json::array();
    for (const CorrelationMatrix& m : matrices) {
        nlohmann::ordered_json c = nlohmann::ordered_json::object();
        c["x"] = std::string(cell_name(m.x));
        c["y"] = std::string(cell_name(m.y));
        c["pairing"] = std::string(pairing_name(m.mode));
        c["n"] = m.n;
        c["features"] = nlohmann::ordered_json::array();
        for (const CorrelationEntry& e : m.entries) {
            nlohmann::ordered_json f = nlohmann::ordered_json::object();
            f["feature"] = std::string(group_name(e.group));
            f["masked"] = e.masked;
            if (e.masked) {
                f["reason"] = e.mask_reason;
                f["r"] = nullptr;
                f["p"] = nullptr;
            } else {
                f["r"] = e.r;
                f["p"] = e.p;
                f["stars"] = e.stars;
            }
            c["features"].push_back(f);
        }
        out["comparisons"].push_back(c);
    }
    return out.dump(2) + "\n";
}

}  // namespace styledisp
