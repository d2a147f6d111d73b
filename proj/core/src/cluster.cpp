#include "styledisp/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "styledisp/error.hpp"
#include "styledisp/reducer.hpp"
#include "styledisp/rng.hpp"
#include "styledisp/stats.hpp"

namespace styledisp {

namespace {

constexpr int kMaxLloydIterations = 300;

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
    return (a.row(i) - b.row(j)).squaredNorm();
}

Matrix plus_plus_seeds(const Matrix& x, int k, Rng& rng) {
    const auto n = static_cast<std::size_t>(x.rows());
    Matrix centers(k, x.cols());
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::size_t pick = rng.below(n);
    for (int c = 0; c < k; ++c) {
        centers.row(c) = x.row(static_cast<Eigen::Index>(pick));
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            best[i] = std::min(best[i], squared_distance(x, static_cast<Eigen::Index>(i), centers, c));
            total += best[i];
        }
        if (c + 1 == k) break;
        if (total <= 0.0) {
            pick = rng.below(n);
            continue;
        }
        const double target = rng.uniform() * total;
        double acc = 0.0;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += best[i];
            if (acc > target && best[i] > 0.0) {
                pick = i;
                break;
            }
        }
        while (best[pick] <= 0.0 && pick > 0) --pick;
    }
    return centers;
}

struct LloydResult {
    std::vector<int> labels;
    Matrix centroids;
    double inertia = 0.0;
    std::vector<double> trace;
};

LloydResult lloyd(const Matrix& x, Matrix centers) {
    const auto n = static_cast<std::size_t>(x.rows());
    const auto k = static_cast<int>(centers.rows());
    LloydResult out;
    out.labels.assign(n, -1);
    std::vector<double> cost(n, 0.0);

    for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = squared_distance(x, static_cast<Eigen::Index>(i), centers, c);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (out.labels[i] != best) changed = true;
            out.labels[i] = best;
            cost[i] = best_d;
            inertia += best_d;
        }
        if (!changed && iter > 0) break;

        // Empty clusters take the point currently farthest from its centroid.
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (int label : out.labels) ++counts[static_cast<std::size_t>(label)];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            std::optional<std::size_t> donor;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[static_cast<std::size_t>(out.labels[i])] > 1 && (!donor || cost[i] > cost[*donor])) {
                    donor = i;
                }
            }
            const std::size_t far = *donor;  // exists because k <= n
            --counts[static_cast<std::size_t>(out.labels[far])];
            inertia -= cost[far];
            cost[far] = 0.0;
            out.labels[far] = c;
            counts[static_cast<std::size_t>(c)] = 1;
        }
        out.trace.push_back(inertia);

        centers.setZero();
        for (std::size_t i = 0; i < n; ++i) centers.row(out.labels[i]) += x.row(static_cast<Eigen::Index>(i));
        for (int c = 0; c < k; ++c) centers.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }

    out.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.inertia += squared_distance(x, static_cast<Eigen::Index>(i), centers, out.labels[i]);
    }
    out.centroids = std::move(centers);
    return out;
}

struct Contingency {
    std::vector<std::vector<double>> counts;  // [cluster][class]
    std::vector<double> row_sums;
    std::vector<double> col_sums;
    double n = 0.0;
};

std::vector<int> compress(std::span<const int> labels, std::size_t& distinct) {
    std::map<int, int> ids;
    for (int l : labels) ids.emplace(l, 0);
    int next = 0;
    for (auto& kv : ids) kv.second = next++;
    distinct = ids.size();
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) out.push_back(ids[l]);
    return out;
}

Contingency contingency(std::span<const int> clusters, std::span<const int> truth) {
    if (clusters.size() != truth.size()) {
        throw InvalidArgument("cluster/class label length mismatch (" + std::to_string(clusters.size()) + " vs " +
                              std::to_string(truth.size()) + ")");
    }
    if (clusters.empty()) throw InvalidArgument("empty labelling");
    std::size_t kc = 0;
    std::size_t kt = 0;
    const auto c = compress(clusters, kc);
    const auto t = compress(truth, kt);
    Contingency out;
    out.counts.assign(kc, std::vector<double>(kt, 0.0));
    out.row_sums.assign(kc, 0.0);
    out.col_sums.assign(kt, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        out.counts[static_cast<std::size_t>(c[i])][static_cast<std::size_t>(t[i])] += 1.0;
        out.row_sums[static_cast<std::size_t>(c[i])] += 1.0;
        out.col_sums[static_cast<std::size_t>(t[i])] += 1.0;
    }
    out.n = static_cast<double>(c.size());
    return out;
}

double entropy(const std::vector<double>& sums, double n) {
    double h = 0.0;
    for (double s : sums) {
        if (s > 0.0) h -= (s / n) * std::log(s / n);
    }
    return h;
}

}  // namespace

Assignment kmeans(const Matrix& coords, int k, std::uint64_t seed, int restarts) {
    if (coords.rows() == 0 || coords.cols() == 0) throw InvalidArgument("kmeans: empty matrix");
    if (k < 1) throw InvalidArgument("kmeans: k must be >= 1");
    if (static_cast<Eigen::Index>(k) > coords.rows()) {
        throw InvalidArgument("kmeans: k = " + std::to_string(k) + " exceeds " + std::to_string(coords.rows()) + " rows");
    }
    if (restarts < 1) throw InvalidArgument("kmeans: restarts must be >= 1");
    require_finite(coords, "kmeans");

    Rng rng(seed);
    std::optional<LloydResult> best;
    for (int r = 0; r < restarts; ++r) {
        LloydResult run = lloyd(coords, plus_plus_seeds(coords, k, rng));
        if (!best || run.inertia < best->inertia) best = std::move(run);
    }
    Assignment out;
    out.labels = std::move(best->labels);
    out.k = k;
    out.inertia = best->inertia;
    out.centroids = std::move(best->centroids);
    out.inertia_trace = std::move(best->trace);
    return out;
}

double purity(std::span<const int> clusters, std::span<const int> truth) {
    const Contingency table = contingency(clusters, truth);
    double sum = 0.0;
    for (const auto& row : table.counts) sum += *std::max_element(row.begin(), row.end());
    return sum / table.n;
}

double nmi(std::span<const int> clusters, std::span<const int> truth) {
    const Contingency table = contingency(clusters, truth);
    const double hc = entropy(table.row_sums, table.n);
    const double ht = entropy(table.col_sums, table.n);
    if (hc + ht == 0.0) return 1.0;
    double mi = 0.0;
    for (std::size_t i = 0; i < table.counts.size(); ++i) {
        for (std::size_t j = 0; j < table.counts[i].size(); ++j) {
            const double nij = table.counts[i][j];
            if (nij > 0.0) {
                mi += (nij / table.n) * std::log(table.n * nij / (table.row_sums[i] * table.col_sums[j]));
            }
        }
    }
    return std::clamp(2.0 * mi / (hc + ht), 0.0, 1.0);
}

double sbar(double p, double n) {
    if (!(p >= 0.0 && p <= 1.0) || !(n >= 0.0 && n <= 1.0)) {
        throw InvalidArgument("sbar: purity and nmi must lie in [0, 1]");
    }
    return (p + n) / 2.0;
}

ValidationScores score(std::span<const int> clusters, std::span<const int> truth) {
    ValidationScores s;
    s.purity = purity(clusters, truth);
    s.nmi = nmi(clusters, truth);
    s.s_bar = sbar(s.purity, s.nmi);
    return s;
}

std::vector<MajorityEntry> majority_map(std::span<const int> clusters, std::span<const int> truth) {
    if (clusters.size() != truth.size()) {
        throw InvalidArgument("majority_map: length mismatch (" + std::to_string(clusters.size()) + " vs " +
                              std::to_string(truth.size()) + ")");
    }
    std::map<int, std::map<int, std::size_t>> counts;
    for (std::size_t i = 0; i < clusters.size(); ++i) ++counts[clusters[i]][truth[i]];
    std::vector<MajorityEntry> out;
    for (const auto& [cluster, classes] : counts) {
        MajorityEntry e;
        e.cluster = cluster;
        std::size_t best = 0;
        for (const auto& [cls, count] : classes) {
            e.size += count;
            if (count > best) {
                best = count;
                e.majority_class = cls;
                e.tie = false;
            } else if (count == best) {
                e.tie = true;  // std::map order keeps the lower class id
            }
        }
        e.fraction = static_cast<double>(best) / static_cast<double>(e.size);
        out.push_back(e);
    }
    return out;
}

std::string dim_label(std::size_t dim) { return dim == kFullDim ? "FullD" : std::to_string(dim) + "D"; }

SweepTable sweep(const std::vector<EmbeddingSet>& sets, std::span<const int> truth, const SweepOptions& options) {
    if (sets.empty()) throw InvalidArgument("sweep: no embedding sets");
    if (options.dims.empty()) throw InvalidArgument("sweep: no dimensions");
    for (const EmbeddingSet& set : sets) {
        if (set.doc_ids() != sets.front().doc_ids()) {
            throw InvalidArgument("sweep: model '" + set.model_id() + "' covers a different document set");
        }
    }
    if (sets.front().size() != truth.size()) throw InvalidArgument("sweep: truth labels do not match documents");

    SweepTable table;
    table.dims = options.dims;
    for (const EmbeddingSet& set : sets) {
        SweepRow row;
        row.model_id = set.model_id();
        for (std::size_t dim : options.dims) {
            const ReducedSet reduced = dim == kFullDim ? full_dimension(set.matrix()) : pca_reduce(set.matrix(), dim);
            const Assignment a = kmeans(reduced.coords, options.k, options.seed, options.restarts);
            row.by_dim[dim] = score(a.labels, truth);
        }
        table.rows.push_back(std::move(row));
    }

    const std::size_t order_dim =
        std::find(options.dims.begin(), options.dims.end(), 2) != options.dims.end() ? 2 : options.dims.front();
    std::stable_sort(table.rows.begin(), table.rows.end(), [order_dim](const SweepRow& x, const SweepRow& y) {
        const double sx = x.by_dim.at(order_dim).s_bar;
        const double sy = y.by_dim.at(order_dim).s_bar;
        if (sx != sy) return sx > sy;
        return x.model_id < y.model_id;
    });

    for (std::size_t dim : options.dims) {
        std::vector<double> values;
        for (const SweepRow& row : table.rows) values.push_back(row.by_dim.at(dim).s_bar);
        table.mean_sbar[dim] = stats::mean(values);
        table.median_sbar[dim] = stats::median(values);
    }
    table.ranking = options.dims;
    std::stable_sort(table.ranking.begin(), table.ranking.end(),
                     [&](std::size_t x, std::size_t y) { return table.mean_sbar.at(x) > table.mean_sbar.at(y); });
    return table;
}

namespace {

std::string fixed(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.4f", v);
    return buffer;
}

}  // namespace

std::string sweep_csv(const SweepTable& table) {
    std::ostringstream out;
    out << "model";
    for (std::size_t dim : table.dims) {
        const std::string label = dim_label(dim);
        out << ',' << label << "_purity," << label << "_nmi," << label << "_sbar";
    }
    out << '\n';
    for (const SweepRow& row : table.rows) {
        out << row.model_id;
        for (std::size_t dim : table.dims) {
            const ValidationScores& s = row.by_dim.at(dim);
            out << ',' << fixed(s.purity) << ',' << fixed(s.nmi) << ',' << fixed(s.s_bar);
        }
        out << '\n';
    }
    for (const char* stat : {"mean", "median"}) {
        const auto& values = std::string(stat) == "mean" ? table.mean_sbar : table.median_sbar;
        out << stat;
        for (std::size_t dim : table.dims) out << ",,," << fixed(values.at(dim));
        out << '\n';
    }
    out << "ranking";
    for (std::size_t i = 0; i < table.ranking.size(); ++i) out << (i ? ";" : ",") << dim_label(table.ranking[i]);
    out << '\n';
    return out.str();
}

std::string sweep_json(const SweepTable& table) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    nlohmann::ordered_json dims = nlohmann::ordered_json::array();
    for (std::size_t dim : table.dims) dims.push_back(dim_label(dim));
    out["dims"] = dims;
    out["models"] = nlohmann::ordered_json::array();
    for (const SweepRow& row : table.rows) {
        nlohmann::ordered_json m = nlohmann::ordered_json::object();
        m["model_id"] = row.model_id;
        for (std::size_t dim : table.dims) {
            const ValidationScores& s = row.by_dim.at(dim);
            m[dim_label(dim)] = {{"purity", s.purity}, {"nmi", s.nmi}, {"s_bar", s.s_bar}};
        }
        out["models"].push_back(m);
    }
    nlohmann::ordered_json mean = nlohmann::ordered_json::object();
    nlohmann::ordered_json median = nlohmann::ordered_json::object();
    for (std::size_t dim : table.dims) {
        mean[dim_label(dim)] = table.mean_sbar.at(dim);
        median[dim_label(dim)] = table.median_sbar.at(dim);
    }
    out["mean_sbar"] = mean;
    out["median_sbar"] = median;
    nlohmann::ordered_json ranking = nlohmann::ordered_json::array();
    for (std::size_t dim : table.ranking) ranking.push_back(dim_label(dim));
    out["ranking"] = ranking;
    return out.dump(2) + "\n";
}

}  // namespace styledisp
