#include "styledisp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "styledisp/error.hpp"

namespace styledisp::stats {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;
constexpr int kMaxIterations = 20000;

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) return h;
    }
    throw Error("reg_inc_beta: continued fraction did not converge (a=" + std::to_string(a) +
                ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

void require_size(std::span<const double> sample, const char* name) {
    if (sample.size() < 2) {
        throw InvalidArgument(std::string("t-test: sample ") + name + " needs at least 2 values, got " +
                              std::to_string(sample.size()));
    }
}

TTestResult finish(double t, double df) {
    TTestResult out;
    out.t = t;
    out.df = df;
    out.p = student_t_two_sided_p(t, df);
    if (out.p < kPValueFloor) {
        out.p = kPValueFloor;
        out.underflow = true;
    }
    return out;
}

}  // namespace

std::string_view to_string(TTestKind kind) {
    return kind == TTestKind::Welch ? "welch" : "student";
}

TTestKind parse_ttest_kind(std::string_view name) {
    if (name == "welch") return TTestKind::Welch;
    if (name == "student") return TTestKind::Student;
    throw InvalidArgument("unknown t-test kind '" + std::string(name) + "' (expected welch|student)");
}

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidArgument("reg_inc_beta: shape parameters must be positive and finite");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw InvalidArgument("reg_inc_beta: x must lie in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw InvalidArgument("student_t_two_sided_p: df must be positive");
    if (std::isnan(t)) throw InvalidArgument("student_t_two_sided_p: t is NaN");
    if (std::isinf(t)) return 0.0;
    const double t2 = t * t;
    // For |t| small relative to df the complementary form loses no precision.
    if (t2 < df) {
        return 1.0 - reg_inc_beta(0.5, 0.5 * df, t2 / (df + t2));
    }
    return reg_inc_beta(0.5 * df, 0.5, df / (df + t2));
}

double mean(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("mean of empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
    if (values.size() < 2) throw InvalidArgument("sample variance needs at least 2 values");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size() - 1);
}

double median(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("median of empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

TTestResult welch_t(std::span<const double> a, std::span<const double> b) {
    require_size(a, "a");
    require_size(b, "b");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a);
    const double mb = mean(b);
    const double va = sample_variance(a) / na;
    const double vb = sample_variance(b) / nb;
    const double se2 = va + vb;
    if (se2 == 0.0) {
        if (ma == mb) return finish(0.0, na + nb - 2.0);
        throw InvalidArgument("welch_t: zero variance, nonzero difference");
    }
    const double t = (ma - mb) / std::sqrt(se2);
    const double df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    return finish(t, df);
}

TTestResult student_t(std::span<const double> a, std::span<const double> b) {
    require_size(a, "a");
    require_size(b, "b");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a);
    const double mb = mean(b);
    const double df = na + nb - 2.0;
    const double pooled =
        ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / df;
    if (pooled == 0.0) {
        if (ma == mb) return finish(0.0, df);
        throw InvalidArgument("student_t: zero variance, nonzero difference");
    }
    const double t = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    return finish(t, df);
}

TTestResult two_sample_t(TTestKind kind, std::span<const double> a, std::span<const double> b) {
    return kind == TTestKind::Welch ? welch_t(a, b) : student_t(a, b);
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw InvalidArgument("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()) + ")");
    }
    if (x.size() < 3) throw InvalidArgument("pearson: needs at least 3 pairs");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw InvalidArgument("pearson: constant input");

    PearsonResult out;
    out.n = x.size();
    double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
    r = std::clamp(r, -1.0, 1.0);
    if (1.0 - std::fabs(r) <= 4.0 * std::numeric_limits<double>::epsilon()) {
        out.r = r > 0 ? 1.0 : -1.0;
        out.exact = true;
        out.p = kPValueFloor;
        return out;
    }
    out.r = r;
    const double df = static_cast<double>(out.n) - 2.0;
    const double t = r * std::sqrt(df / (1.0 - r * r));
    out.p = student_t_two_sided_p(t, df);
    if (out.p < kPValueFloor) {
        out.p = kPValueFloor;
        out.underflow = true;
    }
    return out;
}

std::string_view stars(double p) {
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

}  // namespace styledisp::stats
