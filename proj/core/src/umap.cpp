#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "styledisp/error.hpp"
#include "styledisp/reducer.hpp"
#include "styledisp/rng.hpp"

namespace styledisp {

void UmapParams::validate() const {
    if (n_neighbors < 2) throw InvalidArgument("umap: n_neighbors must be >= 2");
    if (!(min_dist > 0.0 && min_dist <= 1.0)) throw InvalidArgument("umap: min_dist must lie in (0, 1]");
    if (!(spread > 0.0) || min_dist > spread) throw InvalidArgument("umap: spread must be positive and >= min_dist");
    if (n_epochs == 0) throw InvalidArgument("umap: n_epochs must be positive");
    if (negative_sample_rate == 0) throw InvalidArgument("umap: negative_sample_rate must be positive");
    if (!(learning_rate > 0.0)) throw InvalidArgument("umap: learning_rate must be positive");
    if (curve_a < 0.0 || curve_b < 0.0) throw InvalidArgument("umap: curve parameters must be positive");
}

UmapParams UmapParams::resolved() const {
    validate();
    UmapParams out = *this;
    if (out.curve_a == 0.0 || out.curve_b == 0.0) {
        std::tie(out.curve_a, out.curve_b) = fit_membership_curve(min_dist, spread);
    }
    return out;
}

std::pair<double, double> fit_membership_curve(double min_dist, double spread) {
    constexpr int kSamples = 300;
    std::vector<double> xs(kSamples);
    std::vector<double> ys(kSamples);
    for (int s = 0; s < kSamples; ++s) {
        xs[s] = 3.0 * spread * s / (kSamples - 1);
        ys[s] = xs[s] < min_dist ? 1.0 : std::exp(-(xs[s] - min_dist) / spread);
    }
    auto loss = [&](double a, double b) {
        double sum = 0.0;
        for (int s = 0; s < kSamples; ++s) {
            const double r = 1.0 / (1.0 + a * std::pow(xs[s], 2.0 * b)) - ys[s];
            sum += r * r;
        }
        return sum;
    };

    // Levenberg-Marquardt on two parameters.
    double a = 1.0;
    double b = 1.0;
    double lambda = 1e-3;
    double current = loss(a, b);
    for (int iter = 0; iter < 500; ++iter) {
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
        for (int s = 0; s < kSamples; ++s) {
            const double x = xs[s];
            if (x == 0.0) continue;  // prediction is 1 regardless of (a, b)
            const double x2b = std::pow(x, 2.0 * b);
            const double g = 1.0 / (1.0 + a * x2b);
            const double r = g - ys[s];
            const double da = -x2b * g * g;
            const double db = -a * x2b * 2.0 * std::log(x) * g * g;
            jtj00 += da * da;
            jtj01 += da * db;
            jtj11 += db * db;
            jtr0 += da * r;
            jtr1 += db * r;
        }
        bool improved = false;
        for (int attempt = 0; attempt < 50 && !improved; ++attempt) {
            const double m00 = jtj00 * (1.0 + lambda);
            const double m11 = jtj11 * (1.0 + lambda);
            const double det = m00 * m11 - jtj01 * jtj01;
            if (det == 0.0) {
                lambda *= 10.0;
                continue;
            }
            const double step_a = -(m11 * jtr0 - jtj01 * jtr1) / det;
            const double step_b = -(-jtj01 * jtr0 + m00 * jtr1) / det;
            const double na = a + step_a;
            const double nb = b + step_b;
            if (na > 0.0 && nb > 0.0) {
                const double next = loss(na, nb);
                if (next < current) {
                    const double gain = current - next;
                    a = na;
                    b = nb;
                    current = next;
                    lambda = std::max(lambda / 10.0, 1e-12);
                    improved = true;
                    if (gain < 1e-15 * std::max(1.0, current)) return {a, b};
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!improved) break;
    }
    return {a, b};
}

namespace umap_detail {

KnnGraph exact_knn(const Matrix& m, std::size_t k) {
    const auto n = static_cast<std::size_t>(m.rows());
    if (k >= n) throw InvalidArgument("umap: need more rows than n_neighbors");
    KnnGraph g;
    g.n = n;
    g.k = k;
    g.indices.resize(n * k);
    g.distances.resize(n * k);
    std::vector<std::pair<double, std::size_t>> candidates(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d2 = (m.row(static_cast<Eigen::Index>(i)) - m.row(static_cast<Eigen::Index>(j))).squaredNorm();
            candidates[c++] = {d2, j};
        }
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end());
        for (std::size_t s = 0; s < k; ++s) {
            g.indices[i * k + s] = candidates[s].second;
            g.distances[i * k + s] = std::sqrt(candidates[s].first);
        }
    }
    return g;
}

Calibration calibrate(const KnnGraph& graph) {
    const double target = std::log2(static_cast<double>(graph.k));
    Calibration cal;
    cal.rho.resize(graph.n);
    cal.sigma.resize(graph.n);
    cal.residual.resize(graph.n);
    for (std::size_t i = 0; i < graph.n; ++i) {
        const double* d = &graph.distances[i * graph.k];
        const double rho = d[0];
        auto total = [&](double sigma) {
            double sum = 0.0;
            for (std::size_t s = 0; s < graph.k; ++s) sum += std::exp(-std::max(0.0, d[s] - rho) / sigma);
            return sum;
        };
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        double mid = 1.0;
        double value = total(mid);
        for (int iter = 0; iter < 300; ++iter) {
            if (std::fabs(value - target) < 1e-10) break;
            if (value > target) {
                hi = mid;
                mid = 0.5 * (lo + hi);
            } else {
                lo = mid;
                mid = std::isinf(hi) ? 2.0 * mid : 0.5 * (lo + hi);
            }
            if (mid <= 0.0 || !std::isfinite(mid)) break;
            value = total(mid);
        }
        cal.rho[i] = rho;
        cal.sigma[i] = mid;
        cal.residual[i] = std::fabs(value - target);
    }
    return cal;
}

double membership(const KnnGraph& graph, const Calibration& cal, std::size_t i, std::size_t slot) {
    const double d = graph.distances[i * graph.k + slot];
    return std::exp(-std::max(0.0, d - cal.rho[i]) / cal.sigma[i]);
}

std::vector<Edge> fuzzy_union(const KnnGraph& graph, const Calibration& cal) {
    struct Directed {
        std::size_t lo, hi;
        double w;
        bool forward;  // lo -> hi
    };
    std::vector<Directed> directed;
    directed.reserve(graph.n * graph.k);
    for (std::size_t i = 0; i < graph.n; ++i) {
        for (std::size_t s = 0; s < graph.k; ++s) {
            const std::size_t j = graph.indices[i * graph.k + s];
            const double w = membership(graph, cal, i, s);
            directed.push_back({std::min(i, j), std::max(i, j), w, i < j});
        }
    }
    std::sort(directed.begin(), directed.end(), [](const Directed& x, const Directed& y) {
        return std::tie(x.lo, x.hi, x.forward) < std::tie(y.lo, y.hi, y.forward);
    });
    std::vector<Edge> edges;
    for (std::size_t p = 0; p < directed.size();) {
        double a = 0.0;
        double b = 0.0;
        std::size_t q = p;
        while (q < directed.size() && directed[q].lo == directed[p].lo && directed[q].hi == directed[p].hi) {
            (directed[q].forward ? a : b) = directed[q].w;
            ++q;
        }
        const double w = a + b - a * b;
        if (w > 0.0) edges.push_back({directed[p].lo, directed[p].hi, w});
        p = q;
    }
    return edges;
}

std::optional<Matrix> spectral_embedding(std::size_t n, const std::vector<Edge>& edges, std::size_t d,
                                         std::uint64_t seed, std::size_t max_iterations) {
    if (d + 1 >= n) return std::nullopt;
    Eigen::VectorXd degree = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (const Edge& e : edges) {
        degree(static_cast<Eigen::Index>(e.i)) += e.weight;
        degree(static_cast<Eigen::Index>(e.j)) += e.weight;
    }
    if (degree.minCoeff() <= 0.0) return std::nullopt;
    const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();

    // M = I + D^-1/2 W D^-1/2 = 2I - L_sym, eigenvalues in [0, 2]; the wanted
    // Laplacian eigenvectors are M's largest ones after the trivial sqrt(D).
    auto apply = [&](const Eigen::MatrixXd& x) {
        Eigen::MatrixXd y = x;
        for (const Edge& e : edges) {
            const auto i = static_cast<Eigen::Index>(e.i);
            const auto j = static_cast<Eigen::Index>(e.j);
            const double w = e.weight * inv_sqrt(i) * inv_sqrt(j);
            y.row(i) += w * x.row(j);
            y.row(j) += w * x.row(i);
        }
        return y;
    };
    const Eigen::VectorXd trivial = degree.cwiseSqrt().normalized();

    const std::size_t block = std::min(n - 1, d + 2);
    Rng rng(seed ^ 0x5eedf00dULL);
    Eigen::MatrixXd q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(block));
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        for (Eigen::Index j = 0; j < q.cols(); ++j) q(i, j) = rng.normal();
    }
    auto orthonormalize = [&](Eigen::MatrixXd& x) {
        x -= trivial * (trivial.transpose() * x);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
        x = qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), x.cols());
    };
    orthonormalize(q);

    for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
        Eigen::MatrixXd z = apply(q);
        orthonormalize(z);
        q = std::move(z);
        if (iter % 10 != 0) continue;

        const Eigen::MatrixXd mq = apply(q);
        const Eigen::MatrixXd small = q.transpose() * mq;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (small + small.transpose()));
        // Ritz pairs in decreasing eigenvalue order.
        const Eigen::MatrixXd ritz = q * eig.eigenvectors().rowwise().reverse();
        const Eigen::VectorXd values = eig.eigenvalues().reverse();
        bool converged = true;
        const Eigen::MatrixXd mritz = apply(ritz);
        for (std::size_t c = 0; c < d && converged; ++c) {
            const auto col = static_cast<Eigen::Index>(c);
            const double residual = (mritz.col(col) - values(col) * ritz.col(col)).norm();
            converged = residual < 1e-7;
        }
        if (!converged) continue;

        Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
        for (std::size_t c = 0; c < d; ++c) {
            Eigen::VectorXd v = ritz.col(static_cast<Eigen::Index>(c));
            Eigen::Index arg = 0;
            v.cwiseAbs().maxCoeff(&arg);
            if (v(arg) < 0.0) v = -v;
            out.col(static_cast<Eigen::Index>(c)) = v;
        }
        return out;
    }
    return std::nullopt;
}

}  // namespace umap_detail

namespace {

double clip(double v) { return std::clamp(v, -4.0, 4.0); }

}  // namespace

ReducedSet umap_reduce(const Matrix& m, std::size_t d, const UmapParams& params, std::uint64_t seed) {
    const UmapParams p = params.resolved();
    const auto n = static_cast<std::size_t>(m.rows());
    if (d < 1) throw InvalidArgument("umap: target dimension must be >= 1");
    if (n <= p.n_neighbors) {
        throw InvalidArgument("umap: " + std::to_string(n) + " rows but n_neighbors = " +
                              std::to_string(p.n_neighbors) + " (need n_rows > n_neighbors)");
    }
    require_finite(m, "umap");

    using namespace umap_detail;
    const KnnGraph graph = exact_knn(m, p.n_neighbors);
    const Calibration cal = calibrate(graph);
    const std::vector<Edge> edges = fuzzy_union(graph, cal);

    Rng rng(seed);
    Matrix y(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    if (auto spectral = spectral_embedding(n, edges, d, seed)) {
        const double scale = 10.0 / std::max(spectral->cwiseAbs().maxCoeff(), 1e-300);
        y = *spectral * scale;
        for (Eigen::Index i = 0; i < y.rows(); ++i) {
            for (Eigen::Index j = 0; j < y.cols(); ++j) y(i, j) += rng.normal(0.0, 1e-4);
        }
    } else {
        for (Eigen::Index i = 0; i < y.rows(); ++i) {
            for (Eigen::Index j = 0; j < y.cols(); ++j) y(i, j) = rng.uniform(-10.0, 10.0);
        }
    }
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
        const double lo = y.col(j).minCoeff();
        const double hi = y.col(j).maxCoeff();
        if (hi > lo) y.col(j) = (10.0 * (y.col(j).array() - lo) / (hi - lo)).matrix();
    }

    // Directed sampling edges (both orientations); weak edges that would be
    // sampled less than once over the whole run are dropped.
    double w_max = 0.0;
    for (const Edge& e : edges) w_max = std::max(w_max, e.weight);
    struct Sample {
        std::size_t head, tail;
        double epochs_per_sample;
        double next_sample;
        double epochs_per_negative;
        double next_negative;
    };
    std::vector<Sample> samples;
    samples.reserve(2 * edges.size());
    for (const Edge& e : edges) {
        if (e.weight < w_max / static_cast<double>(p.n_epochs)) continue;
        const double eps = w_max / e.weight;
        const double epn = eps / static_cast<double>(p.negative_sample_rate);
        samples.push_back({e.i, e.j, eps, eps, epn, epn});
        samples.push_back({e.j, e.i, eps, eps, epn, epn});
    }
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    const double a = p.curve_a;
    const double b = p.curve_b;
    const auto dims = static_cast<Eigen::Index>(d);
    std::vector<double> diff(d);
    for (std::size_t epoch = 0; epoch < p.n_epochs; ++epoch) {
        const double alpha = p.learning_rate * (1.0 - static_cast<double>(epoch) / static_cast<double>(p.n_epochs));
        const double now = static_cast<double>(epoch);
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t idx : order) {
            Sample& s = samples[idx];
            if (s.next_sample > now) continue;
            const auto head = static_cast<Eigen::Index>(s.head);
            const auto tail = static_cast<Eigen::Index>(s.tail);

            double d2 = 0.0;
            for (Eigen::Index c = 0; c < dims; ++c) {
                diff[static_cast<std::size_t>(c)] = y(head, c) - y(tail, c);
                d2 += diff[static_cast<std::size_t>(c)] * diff[static_cast<std::size_t>(c)];
            }
            double coeff = 0.0;
            if (d2 > 0.0) coeff = -2.0 * a * b * std::pow(d2, b - 1.0) / (a * std::pow(d2, b) + 1.0);
            for (Eigen::Index c = 0; c < dims; ++c) {
                const double grad = clip(coeff * diff[static_cast<std::size_t>(c)]);
                y(head, c) += grad * alpha;
                y(tail, c) -= grad * alpha;
            }
            s.next_sample += s.epochs_per_sample;

            const auto n_negative = static_cast<std::size_t>(std::max(0.0, (now - s.next_negative) / s.epochs_per_negative));
            for (std::size_t q = 0; q < n_negative; ++q) {
                const auto other = static_cast<Eigen::Index>(rng.below(n));
                if (other == head) continue;
                double nd2 = 0.0;
                for (Eigen::Index c = 0; c < dims; ++c) {
                    diff[static_cast<std::size_t>(c)] = y(head, c) - y(other, c);
                    nd2 += diff[static_cast<std::size_t>(c)] * diff[static_cast<std::size_t>(c)];
                }
                double rep = 0.0;
                if (nd2 > 0.0) rep = 2.0 * b / ((0.001 + nd2) * (a * std::pow(nd2, b) + 1.0));
                for (Eigen::Index c = 0; c < dims; ++c) {
                    const double grad = rep > 0.0 ? clip(rep * diff[static_cast<std::size_t>(c)]) : 4.0;
                    y(head, c) += grad * alpha;
                }
            }
            s.next_negative += static_cast<double>(n_negative) * s.epochs_per_negative;
        }
    }

    require_finite(y, "umap output");
    ReducedSet out;
    out.method = ReductionMethod::UMAP;
    out.target_dim = d;
    out.seed = seed;
    out.coords = std::move(y);
    return out;
}

}  // namespace styledisp
