#include "styledisp/reducer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "styledisp/embedding.hpp"
#include "styledisp/error.hpp"
#include "styledisp/parallel.hpp"

namespace styledisp {

using nlohmann::json;

std::string_view method_name(ReductionMethod method) {
    switch (method) {
        case ReductionMethod::PCA: return "PCA";
        case ReductionMethod::UMAP: return "UMAP";
        case ReductionMethod::FullD: return "FullD";
    }
    return "?";
}

ReductionMethod parse_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "pca") return ReductionMethod::PCA;
    if (lower == "umap") return ReductionMethod::UMAP;
    if (lower == "fulld" || lower == "full") return ReductionMethod::FullD;
    throw InvalidArgument("unknown reduction method '" + std::string(name) + "'");
}

ReducedSet pca_reduce(const Matrix& m, std::size_t d) {
    const auto n = static_cast<std::size_t>(m.rows());
    const auto p = static_cast<std::size_t>(m.cols());
    if (n == 0 || p == 0) throw InvalidArgument("pca_reduce: empty matrix");
    require_finite(m, "pca_reduce");
    if (d < 1 || d > std::min(n - 1, p)) {
        throw InvalidArgument("pca_reduce: target dimension " + std::to_string(d) + " outside [1, " +
                              std::to_string(std::min(n - 1, p)) + "]");
    }

    const Eigen::RowVectorXd centroid = m.colwise().mean();
    const Matrix centered = m.rowwise() - centroid;
    const double denom = static_cast<double>(n - 1);

    ReducedSet out;
    out.method = ReductionMethod::PCA;
    out.target_dim = d;
    out.total_variance = centered.squaredNorm() / denom;

    if (centered.cwiseAbs().maxCoeff() == 0.0) {
        out.coords = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
        out.explained_variance.assign(d, 0.0);
        return out;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(centered), Eigen::ComputeThinV);
    Eigen::MatrixXd axes = svd.matrixV().leftCols(static_cast<Eigen::Index>(d));
    for (Eigen::Index c = 0; c < axes.cols(); ++c) {
        Eigen::Index arg = 0;
        axes.col(c).cwiseAbs().maxCoeff(&arg);
        if (axes(arg, c) < 0.0) axes.col(c) *= -1.0;
    }
    out.coords = centered * axes;
    const auto& sv = svd.singularValues();
    out.explained_variance.reserve(d);
    for (std::size_t c = 0; c < d; ++c) {
        const double s = sv(static_cast<Eigen::Index>(c));
        out.explained_variance.push_back(s * s / denom);
    }
    return out;
}

ReducedSet full_dimension(const Matrix& m) {
    if (m.rows() == 0) throw InvalidArgument("full_dimension: empty matrix");
    require_finite(m, "full_dimension");
    ReducedSet out;
    out.method = ReductionMethod::FullD;
    out.target_dim = static_cast<std::size_t>(m.cols());
    out.coords = m;
    return out;
}

std::vector<ReducedSet> multi_seed_reduce(const Matrix& m, std::size_t d, const UmapParams& params,
                                          std::span<const std::uint64_t> seeds, std::size_t max_parallel) {
    if (seeds.empty()) throw InvalidArgument("multi_seed_reduce: empty seed list");
    std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
    if (distinct.size() != seeds.size()) throw InvalidArgument("multi_seed_reduce: duplicate seeds");
    const UmapParams resolved = params.resolved();
    auto results = ordered_parallel_map(seeds.size(), max_parallel,
                                        [&](std::size_t s) { return umap_reduce(m, d, resolved, seeds[s]); });
    std::vector<ReducedSet> out;
    out.reserve(results.size());
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

void write_reduced(const ReducedSet& set, const std::vector<std::string>& doc_ids, std::string_view model_id,
                   std::ostream& out) {
    if (doc_ids.size() != static_cast<std::size_t>(set.coords.rows())) {
        throw InvalidArgument("write_reduced: doc_ids and coordinate rows differ");
    }
    json header = json::object();
    header["schema_version"] = kEmbeddingSchemaVersion;
    header["kind"] = "reduced";
    header["model_id"] = std::string(model_id);
    header["dim"] = set.target_dim;
    header["method"] = std::string(method_name(set.method));
    header["target_dim"] = set.target_dim;
    header["seed"] = set.seed ? json(*set.seed) : json(nullptr);
    out << header.dump() << '\n';
    // Vector lines share the embedding-file record layout.
    const std::vector<std::string> ids = doc_ids;
    EmbeddingSet rows(std::string(model_id.empty() ? "reduced" : model_id), ids, set.coords);
    std::ostringstream body;
    write_embeddings(rows, body);
    const std::string text = body.str();
    out << text.substr(text.find('\n') + 1);
}

ImportedReduction read_reduced(std::istream& in, std::string_view source_name) {
    std::string header_line;
    while (std::getline(in, header_line)) {
        if (header_line.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    json header;
    try {
        header = json::parse(header_line);
    } catch (const json::parse_error& e) {
        throw DataError(std::string(source_name) + ": malformed header: " + e.what());
    }
    if (!header.is_object() || header.value("kind", "") != "reduced") {
        throw DataError(std::string(source_name) + ": not a reduced-coordinates file");
    }
    std::ostringstream rebuilt;
    json emb_header = json::object();
    emb_header["schema_version"] = header.value("schema_version", -1);
    emb_header["model_id"] = header.value("model_id", std::string("reduced"));
    if (emb_header["model_id"].get<std::string>().empty()) emb_header["model_id"] = "reduced";
    emb_header["dim"] = header.value("target_dim", std::size_t{0});
    rebuilt << emb_header.dump() << '\n' << in.rdbuf();
    std::istringstream body(rebuilt.str());
    EmbeddingSet rows = read_embeddings(body, source_name);

    ImportedReduction out;
    out.model_id = header.value("model_id", std::string());
    out.doc_ids = rows.doc_ids();
    out.set.method = parse_method(header.value("method", std::string()));
    out.set.target_dim = rows.dim();
    if (header.contains("seed") && header["seed"].is_number_unsigned()) out.set.seed = header["seed"].get<std::uint64_t>();
    out.set.coords = rows.matrix();
    return out;
}

void export_reduced(const ReducedSet& set, const std::vector<std::string>& doc_ids, std::string_view model_id,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_reduced(set, doc_ids, model_id, out);
}

ImportedReduction import_reduced(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return read_reduced(in, path.string());
}

}  // namespace styledisp
