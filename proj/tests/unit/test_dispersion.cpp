#include <gtest/gtest.h>

#include <cmath>

#include "styledisp/dispersion.hpp"
#include "styledisp/error.hpp"
#include "styledisp/rng.hpp"
#include "support.hpp"

using namespace styledisp;

namespace {

struct Layout {
    std::vector<CellId> row_cells;
    std::vector<std::string> doc_ids;
};

Layout layout(std::size_t per_cell) {
    Layout l;
    int id = 0;
    for (CellId cell : cells::kAll)
        for (std::size_t i = 0; i < per_cell; ++i) {
            l.row_cells.push_back(cell);
            l.doc_ids.push_back("d" + std::to_string(id++));
        }
    return l;
}

std::vector<ReducedSet> random_reductions(Rng& rng, std::size_t rows, int seeds, const std::array<double, 4>& sd,
                                          std::size_t per_cell) {
    std::vector<ReducedSet> out;
    for (int s = 0; s < seeds; ++s) {
        ReducedSet r;
        r.method = ReductionMethod::UMAP;
        r.target_dim = 2;
        r.seed = s;
        r.coords = Matrix(rows, 2);
        for (std::size_t i = 0; i < rows; ++i)
            for (int j = 0; j < 2; ++j) r.coords(i, j) = rng.normal(0.0, sd[i / per_cell]);
        out.push_back(r);
    }
    return out;
}

DispersionTable table_from_samples(const std::array<std::vector<double>, 4>& samples) {
    DispersionTable t;
    int id = 0;
    for (std::size_t c = 0; c < 4; ++c) {
        CellDispersion cd;
        cd.cell = cells::kAll[c];
        cd.per_doc = samples[c];
        for (std::size_t i = 0; i < samples[c].size(); ++i) cd.doc_ids.push_back("d" + std::to_string(id++));
        cd.mean = cell_dispersion(cd.per_doc);
        t.cells.push_back(cd);
    }
    return t;
}

}  // namespace

TEST(CentroidDistances, HandExamples) {
    Matrix m(3, 2);
    m << 0, 0, 2, 0, 5, 5;
    std::vector<std::size_t> rows{0, 1};
    EXPECT_EQ(centroid_distances(m, rows), (std::vector<double>{1.0, 1.0}));
    Matrix same = Matrix::Constant(4, 3, 1.5);
    std::vector<std::size_t> all{0, 1, 2, 3};
    for (double d : centroid_distances(same, all)) EXPECT_EQ(d, 0.0);
    std::vector<std::size_t> none;
    std::vector<std::size_t> bad{7};
    EXPECT_THROW(centroid_distances(m, none), InvalidArgument);
    EXPECT_THROW(centroid_distances(m, bad), InvalidArgument);
}

TEST(SeedMean, Arithmetic) {
    EXPECT_EQ(seed_mean_distances({{1.0, 2.0}}), (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(seed_mean_distances({{1.0}, {3.0}}), std::vector<double>{2.0});
    EXPECT_THROW(seed_mean_distances({{1.0}, {3.0, 4.0}}), InvalidArgument);
    EXPECT_THROW(seed_mean_distances({}), InvalidArgument);
    std::vector<double> zeros(3, 0.0);
    EXPECT_EQ(cell_dispersion(zeros), 0.0);
    std::vector<double> v{1.0, 2.0, 3.0};
    EXPECT_EQ(cell_dispersion(v), 2.0);
    std::vector<double> empty;
    EXPECT_THROW(cell_dispersion(empty), InvalidArgument);
}

TEST(ComputeDispersion, CentroidPerSeedAndAveraging) {
    // Seed 1 is seed 0 shifted; per-seed centroids make the shift irrelevant.
    auto l = layout(2);
    ReducedSet a, b;
    a.coords = Matrix::Zero(8, 2);
    a.coords(0, 0) = 2.0;
    b.coords = a.coords;
    b.coords.col(1).array() += 100.0;
    b.coords(0, 0) = 6.0;
    auto t = compute_dispersion({a, b}, l.row_cells, l.doc_ids);
    const auto& q = t.cell(cells::kQueneauRef);
    EXPECT_EQ(q.per_doc, (std::vector<double>{2.0, 2.0}));
    EXPECT_EQ(q.mean, 2.0);
    EXPECT_EQ(t.cell(cells::kFeneonGen).mean, 0.0);
    EXPECT_EQ(t.cells.size(), 4u);
    EXPECT_EQ(t.cells[0].cell, cells::kQueneauRef);
}

TEST(ComputeDispersion, TranslationAndScale) {
    Rng rng(4);
    const std::size_t per = 12;
    auto l = layout(per);
    auto base = random_reductions(rng, 4 * per, 3, {1.0, 2.0, 3.0, 4.0}, per);
    auto t0 = compute_dispersion(base, l.row_cells, l.doc_ids);
    auto v0 = test_hypotheses(t0);

    auto shifted = base;
    for (auto& r : shifted)
        for (std::size_t i = 0; i < 4 * per; ++i) {
            // Cell-specific translation, power-of-two scale for exact arithmetic.
            r.coords(i, 0) += 64.0 * static_cast<double>(i / per);
            r.coords(i, 1) -= 32.0;
        }
    auto t1 = compute_dispersion(shifted, l.row_cells, l.doc_ids);
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t i = 0; i < per; ++i) EXPECT_NEAR(t1.cells[c].per_doc[i], t0.cells[c].per_doc[i], 1e-12);

    for (double alpha : {0.25, 4.0}) {
        auto scaled = base;
        for (auto& r : scaled) r.coords *= alpha;
        auto ts = compute_dispersion(scaled, l.row_cells, l.doc_ids);
        for (std::size_t c = 0; c < 4; ++c) {
            EXPECT_EQ(ts.cells[c].mean, alpha * t0.cells[c].mean);
            for (std::size_t i = 0; i < per; ++i) EXPECT_EQ(ts.cells[c].per_doc[i], alpha * t0.cells[c].per_doc[i]);
        }
        auto vs = test_hypotheses(ts);
        for (std::size_t h = 0; h < vs.size(); ++h) {
            EXPECT_EQ(vs[h].direction_ok, v0[h].direction_ok);
            EXPECT_EQ(vs[h].p_value, v0[h].p_value);
            EXPECT_EQ(vs[h].stars, v0[h].stars);
        }
    }
    // A general scale is equal up to rounding.
    auto scaled = base;
    for (auto& r : scaled) r.coords *= 3.7;
    auto ts = compute_dispersion(scaled, l.row_cells, l.doc_ids);
    for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(ts.cells[c].mean, 3.7 * t0.cells[c].mean, 1e-12);
    auto vs = test_hypotheses(ts);
    for (std::size_t h = 0; h < vs.size(); ++h) EXPECT_NEAR(vs[h].p_value, v0[h].p_value, 1e-12);
}

TEST(ComputeDispersion, ZeroIffCoincident) {
    auto l = layout(3);
    ReducedSet r;
    r.coords = Matrix::Zero(12, 2);
    r.coords.row(4) << 1.0, 1.0;  // FENEON_REF first doc
    auto t = compute_dispersion({r}, l.row_cells, l.doc_ids);
    EXPECT_EQ(t.cell(cells::kQueneauRef).mean, 0.0);
    EXPECT_GT(t.cell(cells::kFeneonRef).mean, 0.0);
}

TEST(Hypotheses, PlantedHalfNormalOrdering) {
    Rng rng(2024);
    std::array<std::vector<double>, 4> samples;
    const std::array<double, 4> sigma{2.0, 3.0, 1.0, 4.0};  // QR, FR, QG, FG
    for (std::size_t c = 0; c < 4; ++c)
        for (int i = 0; i < 73; ++i) samples[c].push_back(std::abs(rng.normal(0.0, sigma[c])));
    auto t = table_from_samples(samples);
    EXPECT_GT(t.cell(cells::kFeneonGen).mean, t.cell(cells::kFeneonRef).mean);
    EXPECT_GT(t.cell(cells::kFeneonRef).mean, t.cell(cells::kQueneauRef).mean);
    EXPECT_GT(t.cell(cells::kQueneauRef).mean, t.cell(cells::kQueneauGen).mean);
    auto v = test_hypotheses(t);
    ASSERT_EQ(v.size(), 5u);
    for (const auto& h : v) {
        EXPECT_TRUE(h.direction_ok) << hypothesis_name(h.id);
        if (h.id != HypothesisId::SDoublePrime) {
            EXPECT_LT(h.p_value, 0.01) << hypothesis_name(h.id);
            EXPECT_EQ(h.stars, "**");
        }
    }
}

// 4 vs 3 at n = 73 has expected |t| near 2.3: S'' reaches p < .01 in only
// about a third of draws. Measured here so the limitation stays visible.
TEST(Hypotheses, FourVersusThreeIsUnderpowered) {
    Rng rng(99);
    int significant = 0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        std::vector<double> a, b;
        for (int i = 0; i < 73; ++i) a.push_back(std::abs(rng.normal(0.0, 4.0)));
        for (int i = 0; i < 73; ++i) b.push_back(std::abs(rng.normal(0.0, 3.0)));
        if (stats::welch_t(a, b).p < 0.01) ++significant;
    }
    const double power = static_cast<double>(significant) / reps;
    EXPECT_GT(power, 0.25);
    EXPECT_LT(power, 0.47);
}

TEST(Hypotheses, IdenticalSamplesAndUndersized) {
    std::vector<double> s{1.0, 2.0, 3.0};
    auto v = test_hypotheses(table_from_samples({s, s, s, s}));
    for (const auto& h : v) {
        EXPECT_FALSE(h.direction_ok);
        EXPECT_EQ(h.t_stat, 0.0);
        EXPECT_EQ(h.p_value, 1.0);
        EXPECT_EQ(h.stars, "");
    }
    std::vector<double> one{1.0};
    EXPECT_THROW(test_hypotheses(table_from_samples({s, one, s, s})), InvalidArgument);
}

TEST(Hypotheses, NamesAndCells) {
    EXPECT_EQ(hypothesis_name(HypothesisId::TPrime), "T'");
    EXPECT_EQ(hypothesis_name(HypothesisId::TopicOverStyle), "T-S");
    EXPECT_EQ(hypothesis_cells(HypothesisId::TPrime), std::make_pair(cells::kFeneonGen, cells::kQueneauRef));
    EXPECT_EQ(hypothesis_cells(HypothesisId::TDoublePrime), std::make_pair(cells::kFeneonRef, cells::kQueneauGen));
    EXPECT_EQ(hypothesis_cells(HypothesisId::SPrime), std::make_pair(cells::kQueneauRef, cells::kQueneauGen));
    EXPECT_EQ(hypothesis_cells(HypothesisId::SDoublePrime), std::make_pair(cells::kFeneonGen, cells::kFeneonRef));
    EXPECT_EQ(hypothesis_cells(HypothesisId::TopicOverStyle), std::make_pair(cells::kFeneonRef, cells::kQueneauRef));
}

TEST(Hypotheses, ExportShapes) {
    Rng rng(1);
    std::array<std::vector<double>, 4> samples;
    for (std::size_t c = 0; c < 4; ++c)
        for (int i = 0; i < 10; ++i) samples[c].push_back(std::abs(rng.normal(0.0, 1.0 + static_cast<double>(c))));
    auto t = table_from_samples(samples);
    std::vector<ModelVerdicts> rows{{"model-a", test_hypotheses(t)}};
    const std::string csv = hypotheses_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "model,T',T'_stars,T'_p,T'',T''_stars,T''_p,S',S'_stars,S'_p,S'',S''_stars,S''_p,T-S,T-S_stars,T-S_p");
    EXPECT_NE(csv.find("model-a,"), std::string::npos);
    EXPECT_NE(hypotheses_text(rows).find("model-a"), std::string::npos);
    auto back = parse_dispersion_json(dispersion_json(t, "model-a"));
    ASSERT_EQ(back.cells.size(), 4u);
    for (std::size_t c = 0; c < 4; ++c) {
        EXPECT_EQ(back.cells[c].per_doc, t.cells[c].per_doc);
        EXPECT_EQ(back.cells[c].doc_ids, t.cells[c].doc_ids);
    }
}
