#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "../oracles/oracles.hpp"
#include "styledisp/error.hpp"
#include "styledisp/rng.hpp"
#include "styledisp/stats.hpp"

using namespace styledisp;

TEST(RegIncBeta, Endpoints) {
    EXPECT_EQ(stats::reg_inc_beta(2.0, 3.0, 0.0), 0.0);
    EXPECT_EQ(stats::reg_inc_beta(2.0, 3.0, 1.0), 1.0);
    EXPECT_NEAR(stats::reg_inc_beta(1.0, 1.0, 0.5), 0.5, 1e-15);
}

TEST(RegIncBeta, SymmetryGrid) {
    for (double a : {0.3, 0.5, 1.0, 2.5, 10.0, 60.0})
        for (double b : {0.4, 1.0, 3.0, 15.0, 100.0})
            for (double x : {0.01, 0.1, 0.3, 0.5, 0.77, 0.95, 0.999})
                EXPECT_NEAR(stats::reg_inc_beta(a, b, x) + stats::reg_inc_beta(b, a, 1.0 - x), 1.0, 1e-12)
                    << a << " " << b << " " << x;
}

TEST(RegIncBeta, ClosedForms) {
    // I_x(a, 1) = x^a and I_x(1, b) = 1 - (1 - x)^b
    for (double x : {0.2, 0.5, 0.9}) {
        EXPECT_NEAR(stats::reg_inc_beta(3.0, 1.0, x), std::pow(x, 3.0), 1e-14);
        EXPECT_NEAR(stats::reg_inc_beta(1.0, 4.0, x), 1.0 - std::pow(1.0 - x, 4.0), 1e-14);
    }
}

TEST(RegIncBeta, DomainErrors) {
    EXPECT_THROW(stats::reg_inc_beta(0.0, 1.0, 0.5), InvalidArgument);
    EXPECT_THROW(stats::reg_inc_beta(1.0, -1.0, 0.5), InvalidArgument);
    EXPECT_THROW(stats::reg_inc_beta(1.0, 1.0, 1.5), InvalidArgument);
}

TEST(StudentT, MatchesDensityQuadrature) {
    for (double t : {0.0, 0.5, 1.0, 2.0, 3.0})
        for (double df : {1.0, 5.0, 30.0, 120.0}) {
            EXPECT_NEAR(stats::student_t_two_sided_p(t, df), oracle::t_two_sided_p(t, df), 1e-6) << t << " " << df;
            EXPECT_EQ(stats::student_t_two_sided_p(-t, df), stats::student_t_two_sided_p(t, df));
        }
}

TEST(StudentT, NormalLimit) {
    EXPECT_NEAR(stats::student_t_two_sided_p(2.0, 5000.0), 0.0455, 0.001);
}

TEST(StudentT, MonotoneInAbsT) {
    for (double df : {1.0, 3.7, 40.0}) {
        double prev = 1.0;
        for (double t = 0.1; t < 20.0; t += 0.1) {
            const double p = stats::student_t_two_sided_p(t, df);
            EXPECT_LT(p, prev);
            prev = p;
        }
    }
}

TEST(Welch, IdenticalSamples) {
    std::vector<double> a{1.0, 2.0, 4.0, 8.0};
    auto r = stats::welch_t(a, a);
    EXPECT_EQ(r.t, 0.0);
    EXPECT_EQ(r.p, 1.0);
}

TEST(Welch, SwapNegatesT) {
    std::vector<double> a{1.0, 2.5, 3.0, 4.5, 2.2};
    std::vector<double> b{3.0, 4.0, 6.5, 5.0};
    auto ab = stats::welch_t(a, b);
    auto ba = stats::welch_t(b, a);
    EXPECT_EQ(ab.t, -ba.t);
    EXPECT_EQ(ab.p, ba.p);
    EXPECT_EQ(ab.df, ba.df);
}

TEST(Welch, HandComputed) {
    // means 2 and 5, variances 1 and 4, n = 3 each
    std::vector<double> a{1.0, 2.0, 3.0};
    std::vector<double> b{3.0, 5.0, 7.0};
    auto r = stats::welch_t(a, b);
    const double se2 = 1.0 / 3.0 + 4.0 / 3.0;
    EXPECT_NEAR(r.t, -3.0 / std::sqrt(se2), 1e-14);
    const double df = se2 * se2 / ((1.0 / 9.0) / 2.0 + (16.0 / 9.0) / 2.0);
    EXPECT_NEAR(r.df, df, 1e-12);
    EXPECT_NEAR(r.p, oracle::t_two_sided_p(r.t, r.df), 1e-6);
}

TEST(Welch, PValueMatchesQuadratureOnRandomSamples) {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> a, b;
        for (int i = 0; i < 5 + rep; ++i) a.push_back(rng.normal(0.0, 1.0));
        for (int i = 0; i < 4 + 2 * rep; ++i) b.push_back(rng.normal(0.4, 2.0));
        auto r = stats::welch_t(a, b);
        EXPECT_NEAR(r.p, oracle::t_two_sided_p(r.t, r.df), 1e-6);
    }
}

TEST(Welch, DegenerateCases) {
    std::vector<double> one{1.0};
    std::vector<double> two{1.0, 2.0};
    EXPECT_THROW(stats::welch_t(one, two), InvalidArgument);
    std::vector<double> c1{2.0, 2.0, 2.0};
    std::vector<double> c2{3.0, 3.0};
    EXPECT_THROW(stats::welch_t(c1, c2), InvalidArgument);
    auto same = stats::welch_t(c1, c1);
    EXPECT_EQ(same.t, 0.0);
    EXPECT_EQ(same.p, 1.0);
}

TEST(Student, PooledDf) {
    std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    std::vector<double> b{2.0, 4.0, 6.0};
    auto r = stats::student_t(a, b);
    EXPECT_EQ(r.df, 5.0);
    EXPECT_NEAR(r.p, oracle::t_two_sided_p(r.t, r.df), 1e-6);
}

TEST(Pearson, HandExample) {
    std::vector<double> x{1.0, 2.0, 3.0};
    std::vector<double> y{2.0, 4.0, 5.0};
    auto r = stats::pearson(x, y);
    EXPECT_NEAR(r.r, 0.98198050606196574, 1e-12);
    const double t = r.r * std::sqrt(1.0 / (1.0 - r.r * r.r));
    EXPECT_NEAR(r.p, oracle::t_two_sided_p(t, 1.0), 1e-6);
}

TEST(Pearson, ExactLinear) {
    std::vector<double> x{1.0, 2.0, 3.0, 5.0};
    std::vector<double> y;
    for (double v : x) y.push_back(-2.0 * v + 3.0);
    auto neg = stats::pearson(x, y);
    EXPECT_EQ(neg.r, -1.0);
    EXPECT_TRUE(neg.exact);
    EXPECT_EQ(neg.p, stats::kPValueFloor);
    auto pos = stats::pearson(x, x);
    EXPECT_EQ(pos.r, 1.0);
}

TEST(Pearson, AffineInvariance) {
    Rng rng(5);
    std::vector<double> x, y, x2, y2, yneg;
    for (int i = 0; i < 40; ++i) {
        x.push_back(rng.normal());
        y.push_back(0.5 * x.back() + rng.normal());
        x2.push_back(3.5 * x.back() - 7.0);
        y2.push_back(0.01 * y.back() + 100.0);
        yneg.push_back(-y.back());
    }
    const double r = stats::pearson(x, y).r;
    EXPECT_NEAR(stats::pearson(x2, y2).r, r, 1e-12);
    EXPECT_NEAR(stats::pearson(x, yneg).r, -r, 1e-12);
}

TEST(Pearson, PValueMatchesQuadrature) {
    Rng rng(8);
    for (int n : {3, 7, 32, 122}) {
        std::vector<double> x, y;
        for (int i = 0; i < n; ++i) {
            x.push_back(rng.normal());
            y.push_back(0.3 * x.back() + rng.normal());
        }
        auto r = stats::pearson(x, y);
        const double df = n - 2;
        const double t = r.r * std::sqrt(df / (1.0 - r.r * r.r));
        EXPECT_NEAR(r.p, oracle::t_two_sided_p(t, df), 1e-6);
    }
}

TEST(Pearson, Errors) {
    std::vector<double> a{1.0, 2.0, 3.0};
    std::vector<double> b{1.0, 2.0};
    std::vector<double> c{4.0, 4.0, 4.0};
    EXPECT_THROW(stats::pearson(a, b), InvalidArgument);
    EXPECT_THROW(stats::pearson(b, b), InvalidArgument);
    EXPECT_THROW(stats::pearson(a, c), InvalidArgument);
}

TEST(Stars, Thresholds) {
    EXPECT_EQ(stats::stars(0.0099), "**");
    EXPECT_EQ(stats::stars(0.01), "*");
    EXPECT_EQ(stats::stars(0.0499), "*");
    EXPECT_EQ(stats::stars(0.05), "");
    EXPECT_EQ(stats::stars(1.0), "");
}

TEST(Descriptive, MeanVarianceMedian) {
    std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    EXPECT_EQ(stats::mean(v), 2.5);
    EXPECT_NEAR(stats::sample_variance(v), 5.0 / 3.0, 1e-15);
    EXPECT_EQ(stats::median(v), 2.5);
    EXPECT_EQ(stats::parse_ttest_kind("student"), stats::TTestKind::Student);
    EXPECT_THROW(stats::parse_ttest_kind("paired"), InvalidArgument);
}
