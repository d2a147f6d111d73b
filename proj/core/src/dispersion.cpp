#include "styledisp/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "styledisp/csv.hpp"
#include "styledisp/error.hpp"

namespace styledisp {

std::vector<double> centroid_distances(const Matrix& coords, std::span<const std::size_t> member_rows) {
    if (member_rows.empty()) throw InvalidArgument("centroid_distances: empty member list");
    const auto cols = coords.cols();
    Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(cols);
    for (std::size_t r : member_rows) {
        if (r >= static_cast<std::size_t>(coords.rows())) {
            throw InvalidArgument("centroid_distances: row " + std::to_string(r) + " out of range");
        }
        centroid += coords.row(static_cast<Eigen::Index>(r));
    }
    centroid /= static_cast<double>(member_rows.size());
    std::vector<double> out;
    out.reserve(member_rows.size());
    for (std::size_t r : member_rows) out.push_back((coords.row(static_cast<Eigen::Index>(r)) - centroid).norm());
    return out;
}

std::vector<double> seed_mean_distances(const std::vector<std::vector<double>>& per_seed) {
    if (per_seed.empty()) throw InvalidArgument("seed_mean_distances: no seeds");
    const std::size_t n = per_seed.front().size();
    for (const auto& list : per_seed) {
        if (list.size() != n) throw InvalidArgument("seed_mean_distances: ragged per-seed lists");
    }
    std::vector<double> out(n, 0.0);
    for (const auto& list : per_seed) {
        for (std::size_t i = 0; i < n; ++i) out[i] += list[i];
    }
    for (double& v : out) v /= static_cast<double>(per_seed.size());
    return out;
}

double cell_dispersion(std::span<const double> per_doc) {
    if (per_doc.empty()) throw InvalidArgument("cell_dispersion: empty cell");
    double sum = 0.0;
    for (double v : per_doc) sum += v;
    return sum / static_cast<double>(per_doc.size());
}

const CellDispersion& DispersionTable::cell(CellId id) const {
    for (const CellDispersion& c : cells) {
        if (c.cell == id) return c;
    }
    throw InvalidArgument("dispersion table has no cell " + std::string(cell_name(id)));
}

bool DispersionTable::has(CellId id) const {
    return std::any_of(cells.begin(), cells.end(), [id](const CellDispersion& c) { return c.cell == id; });
}

DispersionTable compute_dispersion(const std::vector<ReducedSet>& reductions, const std::vector<CellId>& row_cells,
                                   const std::vector<std::string>& doc_ids) {
    if (reductions.empty()) throw InvalidArgument("compute_dispersion: no reductions");
    if (row_cells.size() != doc_ids.size()) throw InvalidArgument("compute_dispersion: labels and ids differ in length");
    DispersionTable table;
    table.method = reductions.front().method;
    table.target_dim = reductions.front().target_dim;
    for (const ReducedSet& r : reductions) {
        if (static_cast<std::size_t>(r.coords.rows()) != row_cells.size()) {
            throw InvalidArgument("compute_dispersion: reduction row count does not match labels");
        }
        if (r.seed) table.seeds.push_back(*r.seed);
    }
    for (CellId cell : cells::kAll) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < row_cells.size(); ++i) {
            if (row_cells[i] == cell) members.push_back(i);
        }
        if (members.empty()) continue;
        std::vector<std::vector<double>> per_seed;
        per_seed.reserve(reductions.size());
        for (const ReducedSet& r : reductions) per_seed.push_back(centroid_distances(r.coords, members));
        CellDispersion c;
        c.cell = cell;
        for (std::size_t m : members) c.doc_ids.push_back(doc_ids[m]);
        c.per_doc = seed_mean_distances(per_seed);
        c.mean = cell_dispersion(c.per_doc);
        table.cells.push_back(std::move(c));
    }
    return table;
}

std::string_view hypothesis_name(HypothesisId id) {
    switch (id) {
        case HypothesisId::TPrime: return "T'";
        case HypothesisId::TDoublePrime: return "T''";
        case HypothesisId::SPrime: return "S'";
        case HypothesisId::SDoublePrime: return "S''";
        case HypothesisId::TopicOverStyle: return "T-S";
    }
    return "?";
}

std::pair<CellId, CellId> hypothesis_cells(HypothesisId id) {
    switch (id) {
        case HypothesisId::TPrime: return {cells::kFeneonGen, cells::kQueneauRef};
        case HypothesisId::TDoublePrime: return {cells::kFeneonRef, cells::kQueneauGen};
        case HypothesisId::SPrime: return {cells::kQueneauRef, cells::kQueneauGen};
        case HypothesisId::SDoublePrime: return {cells::kFeneonGen, cells::kFeneonRef};
        case HypothesisId::TopicOverStyle: return {cells::kFeneonRef, cells::kQueneauRef};
    }
    throw InvalidArgument("unknown hypothesis");
}

std::vector<HypothesisVerdict> test_hypotheses(const DispersionTable& table, stats::TTestKind kind) {
    for (CellId cell : cells::kAll) {
        if (!table.has(cell) || table.cell(cell).per_doc.size() < 2) {
            throw InvalidArgument("test_hypotheses: cell " + std::string(cell_name(cell)) +
                                  " needs at least 2 documents");
        }
    }
    std::vector<HypothesisVerdict> out;
    for (HypothesisId id : kAllHypotheses) {
        const auto [lhs, rhs] = hypothesis_cells(id);
        const CellDispersion& a = table.cell(lhs);
        const CellDispersion& b = table.cell(rhs);
        HypothesisVerdict v;
        v.id = id;
        v.lhs = lhs;
        v.rhs = rhs;
        v.lhs_mean = stats::mean(a.per_doc);
        v.rhs_mean = stats::mean(b.per_doc);
        v.direction_ok = v.lhs_mean > v.rhs_mean;
        const stats::TTestResult t = stats::two_sample_t(kind, a.per_doc, b.per_doc);
        v.t_stat = t.t;
        v.df = t.df;
        v.p_value = t.p;
        v.stars = stats::stars(t.p);
        out.push_back(v);
    }
    return out;
}

namespace {

std::string fmt(const char* pattern, double v) {
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, pattern, v);
    return buffer;
}

}  // namespace

std::string hypotheses_csv(const std::vector<ModelVerdicts>& rows) {
    std::ostringstream out;
    out << "model";
    for (HypothesisId id : kAllHypotheses) {
        const std::string name(hypothesis_name(id));
        out << ',' << csv::field(name) << ',' << csv::field(name + "_stars") << ',' << csv::field(name + "_p");
    }
    out << '\n';
    for (const ModelVerdicts& row : rows) {
        out << csv::field(row.model_id);
        for (const HypothesisVerdict& v : row.verdicts) {
            out << ',' << (v.direction_ok ? "PASS" : "FAIL") << ',' << v.stars << ',' << fmt("%.6g", v.p_value);
        }
        out << '\n';
    }
    return out.str();
}

std::string hypotheses_json(const std::vector<ModelVerdicts>& rows, stats::TTestKind kind) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    out["test"] = std::string(stats::to_string(kind)) + " two-sided";
    out["models"] = nlohmann::ordered_json::array();
    for (const ModelVerdicts& row : rows) {
        nlohmann::ordered_json m = nlohmann::ordered_json::object();
        m["model_id"] = row.model_id;
        m["hypotheses"] = nlohmann::ordered_json::array();
        for (const HypothesisVerdict& v : row.verdicts) {
            nlohmann::ordered_json h = nlohmann::ordered_json::object();
            h["id"] = std::string(hypothesis_name(v.id));
            h["lhs"] = std::string(cell_name(v.lhs));
            h["rhs"] = std::string(cell_name(v.rhs));
            h["lhs_mean"] = v.lhs_mean;
            h["rhs_mean"] = v.rhs_mean;
            h["direction_ok"] = v.direction_ok;
            h["t"] = v.t_stat;
            h["df"] = v.df;
            h["p"] = v.p_value;
            h["stars"] = v.stars;
            m["hypotheses"].push_back(h);
        }
        out["models"].push_back(m);
    }
    return out.dump(2) + "\n";
}

std::string hypotheses_text(const std::vector<ModelVerdicts>& rows) {
    std::size_t width = 5;
    for (const ModelVerdicts& row : rows) width = std::max(width, row.model_id.size());
    std::ostringstream out;
    out << std::string(width, ' ');
    for (HypothesisId id : kAllHypotheses) {
        const std::string name(hypothesis_name(id));
        out << "  " << name << std::string(5 - name.size(), ' ');
    }
    out << '\n';
    for (const ModelVerdicts& row : rows) {
        out << row.model_id << std::string(width - row.model_id.size(), ' ');
        for (const HypothesisVerdict& v : row.verdicts) {
            const std::string mark = std::string(v.direction_ok ? "✓" : "✗") + v.stars;
            out << "  " << mark << std::string(5 - (1 + v.stars.size()), ' ');
        }
        out << '\n';
    }
    return out.str();
}

std::string dispersion_json(const DispersionTable& table, std::string_view model_id) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    out["model_id"] = std::string(model_id);
    out["method"] = std::string(method_name(table.method));
    out["target_dim"] = table.target_dim;
    out["seeds"] = table.seeds;
    out["cells"] = nlohmann::ordered_json::array();
    for (const CellDispersion& c : table.cells) {
        nlohmann::ordered_json cell = nlohmann::ordered_json::object();
        cell["cell"] = std::string(cell_name(c.cell));
        cell["mean"] = c.mean;
        cell["documents"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < c.doc_ids.size(); ++i) {
            cell["documents"].push_back({{"doc_id", c.doc_ids[i]}, {"d_bar", c.per_doc[i]}});
        }
        out["cells"].push_back(cell);
    }
    return out.dump(2) + "\n";
}

DispersionTable parse_dispersion_json(std::string_view json_text) {
    nlohmann::json in;
    try {
        in = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("malformed dispersion artifact: ") + e.what());
    }
    try {
        DispersionTable table;
        table.method = parse_method(in.at("method").get<std::string>());
        table.target_dim = in.at("target_dim").get<std::size_t>();
        table.seeds = in.at("seeds").get<std::vector<std::uint64_t>>();
        for (const auto& c : in.at("cells")) {
            CellDispersion cell;
            const auto id = parse_cell(c.at("cell").get<std::string>());
            if (!id) throw DataError("dispersion artifact: unknown cell");
            cell.cell = *id;
            cell.mean = c.at("mean").get<double>();
            for (const auto& d : c.at("documents")) {
                cell.doc_ids.push_back(d.at("doc_id").get<std::string>());
                cell.per_doc.push_back(d.at("d_bar").get<double>());
            }
            table.cells.push_back(std::move(cell));
        }
        return table;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("dispersion artifact has unexpected shape: ") + e.what());
    }
}

}  // namespace styledisp
