#pragma once

#include <span>
#include <string_view>

namespace styledisp::stats {

// Reported p-values never go below this; smaller values are clamped and
// flagged as underflow.
inline constexpr double kPValueFloor = 1e-300;

struct TTestResult {
    double t = 0.0;
    double df = 0.0;  // Welch-Satterthwaite, not rounded
    double p = 1.0;   // two-sided
    bool underflow = false;
};

struct PearsonResult {
    double r = 0.0;
    std::size_t n = 0;
    double p = 1.0;
    bool exact = false;  // |r| == 1; p reported at the floor
    bool underflow = false;
};

enum class TTestKind { Welch, Student };

std::string_view to_string(TTestKind kind);
TTestKind parse_ttest_kind(std::string_view name);

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

// Two-sided tail probability P(|T| >= |t|) for Student-t with df degrees of
// freedom (df real and positive).
double student_t_two_sided_p(double t, double df);

// Welch's unequal-variance two-sided t-test of mean(a) - mean(b).
TTestResult welch_t(std::span<const double> a, std::span<const double> b);

// Pooled-variance Student two-sample t-test, df = na + nb - 2.
TTestResult student_t(std::span<const double> a, std::span<const double> b);

TTestResult two_sample_t(TTestKind kind, std::span<const double> a, std::span<const double> b);

PearsonResult pearson(std::span<const double> x, std::span<const double> y);

// "", "*" or "**" at the .05/.01 thresholds.
std::string_view stars(double p);

double mean(std::span<const double> values);
// Unbiased sample variance (n - 1 denominator).
double sample_variance(std::span<const double> values);
double median(std::span<const double> values);

}  // namespace styledisp::stats
