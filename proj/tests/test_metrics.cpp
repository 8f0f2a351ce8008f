#include <cmath>
#include <set>

#include "cw/error.hpp"
#include "cw/aggregate.hpp"
#include "cw/metrics.hpp"
#include "cw/preprocess.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

using cw::GroundTruth;
using cw::RocCurve;
using cw::ScoreVector;

TEST_CASE("roc_curve: perfect separation and all-equal scores") {
    const RocCurve perfect = cw::roc_curve(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0});
    CHECK(perfect.auroc == 1.0);
    CHECK(perfect.fpr.front() == 0.0);
    CHECK(perfect.tpr.front() == 0.0);
    CHECK(perfect.fpr.back() == 1.0);
    CHECK(perfect.tpr.back() == 1.0);

    const RocCurve flat =
        cw::roc_curve(std::vector<double>{0.5, 0.5, 0.5, 0.5}, std::vector<int>{1, 0, 1, 0});
    CHECK(flat.auroc == 0.5);
    CHECK(flat.fpr.size() == 2); // origin plus a single diagonal step
}

TEST_CASE("roc_curve AUROC equals the Mann-Whitney oracle exactly on tied data") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto scores = testutil::tied_scores(50, seed);
        const auto labels = testutil::random_labels(50, seed + 5000);
        const RocCurve curve = cw::roc_curve(scores, labels);
        const double mw = oracle::mann_whitney_auroc(scores, labels);
        CHECK(std::fabs(curve.auroc - mw) <= 1e-12);
    }
}

TEST_CASE("roc_curve vertices are distinct and trapezoid-consistent") {
    const auto scores = testutil::tied_scores(80, 7, 6);
    const auto labels = testutil::random_labels(80, 99);
    const RocCurve curve = cw::roc_curve(scores, labels);

    std::set<std::pair<double, double>> vertices;
    for (std::size_t i = 0; i < curve.fpr.size(); ++i) {
        CHECK(vertices.insert({curve.fpr[i], curve.tpr[i]}).second);
        if (i > 0) {
            CHECK(curve.fpr[i] >= curve.fpr[i - 1]);
            CHECK(curve.tpr[i] >= curve.tpr[i - 1]);
        }
    }
    CHECK(curve.thresholds.size() == curve.fpr.size() - 1);
    for (std::size_t i = 1; i < curve.thresholds.size(); ++i)
        CHECK(curve.thresholds[i] < curve.thresholds[i - 1]);

    double trapezoid = 0.0;
    for (std::size_t i = 1; i < curve.fpr.size(); ++i)
        trapezoid +=
            (curve.fpr[i] - curve.fpr[i - 1]) * 0.5 * (curve.tpr[i] + curve.tpr[i - 1]);
    CHECK(std::fabs(trapezoid - curve.auroc) < 1e-12);
}

TEST_CASE("roc_curve rejects single-class truth") {
    CHECK_THROWS_AS((void)cw::roc_curve(std::vector<double>{1, 2, 3}, std::vector<int>{1, 1, 1}),
                    cw::Error);
}

TEST_CASE("AUROC is invariant under strictly increasing score transforms") {
    const auto scores = testutil::tied_scores(60, 3);
    const auto labels = testutil::random_labels(60, 4);
    std::vector<double> warped(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        warped[i] = std::exp(2.0 * scores[i]) + scores[i];
    CHECK(cw::roc_curve(scores, labels).auroc == cw::roc_curve(warped, labels).auroc);
}

TEST_CASE("AUROC(s) + AUROC(-s) = 1 exactly") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto scores = testutil::tied_scores(45, seed, 5);
        const auto labels = testutil::random_labels(45, seed + 100);
        std::vector<double> neg(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) neg[i] = -scores[i];
        CHECK(cw::roc_curve(scores, labels).auroc + cw::roc_curve(neg, labels).auroc == 1.0);
    }
}

TEST_CASE("pr_curve: perfect separation and flat scores") {
    const cw::PrCurve perfect =
        cw::pr_curve(std::vector<double>{0.9, 0.8, 0.1}, std::vector<int>{1, 1, 0});
    CHECK(perfect.aupr == 1.0);

    const cw::PrCurve flat =
        cw::pr_curve(std::vector<double>{1, 1, 1, 1}, std::vector<int>{1, 0, 1, 0});
    CHECK(flat.aupr == 0.5); // single step at precision = prevalence
}

TEST_CASE("pr_curve matches the brute-force threshold sweep oracle") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto scores = testutil::tied_scores(50, seed * 3, 7);
        const auto labels = testutil::random_labels(50, seed + 2000);
        const cw::PrCurve curve = cw::pr_curve(scores, labels);
        CHECK(std::fabs(curve.aupr - oracle::average_precision(scores, labels)) <= 1e-12);
    }
}

TEST_CASE("evaluate_two_sided reports the better side per metric") {
    // Anti-informative scores: AUROC 0.2 raw must be reported as 0.8 flipped.
    std::vector<double> scores{0.1, 0.2, 0.3, 0.4, 0.5};
    GroundTruth truth{{1, 1, 0, 1, 0}};
    const RocCurve raw = cw::roc_curve(scores, truth.labels);
    REQUIRE(raw.auroc < 0.5);
    ScoreVector sv;
    sv.scores = scores;
    const cw::MetricReport report = cw::evaluate_two_sided(sv, truth);
    CHECK(report.auroc == doctest::Approx(1.0 - raw.auroc));
    CHECK(report.auroc_orientation == cw::Orientation::flipped);
    CHECK(report.auroc >= 0.5);

    // Exact 0.5 both ways keeps the as-computed orientation.
    ScoreVector tie;
    tie.scores = {1.0, 1.0, 1.0, 1.0};
    GroundTruth tie_truth{{1, 0, 1, 0}};
    const cw::MetricReport tied = cw::evaluate_two_sided(tie, tie_truth);
    CHECK(tied.auroc == 0.5);
    CHECK(tied.auroc_orientation == cw::Orientation::as_computed);
    CHECK(tied.aupr_orientation == cw::Orientation::as_computed);
}

TEST_CASE("evaluate_two_sided equals max of both sides on random data") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto scores = testutil::tied_scores(40, seed * 11, 9);
        const auto labels = testutil::random_labels(40, seed + 321);
        std::vector<double> neg(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) neg[i] = -scores[i];
        ScoreVector sv;
        sv.scores = scores;
        GroundTruth truth{labels};
        const cw::MetricReport report = cw::evaluate_two_sided(sv, truth);
        CHECK(report.auroc ==
              std::max(cw::roc_curve(scores, labels).auroc, cw::roc_curve(neg, labels).auroc));
        CHECK(report.aupr ==
              std::max(cw::pr_curve(scores, labels).aupr, cw::pr_curve(neg, labels).aupr));
        CHECK(report.auroc >= 0.5);
        // AUPR of the two-sided report never drops below prevalence.
        double prevalence = 0.0;
        for (int y : labels) prevalence += y;
        prevalence /= static_cast<double>(labels.size());
        CHECK(report.aupr >= prevalence - 1e-12);
    }
}

TEST_CASE("spearman_abs: identical, reversed, and oracle-checked inputs") {
    std::vector<double> a{1, 2, 3, 4, 5};
    std::vector<double> reversed{5, 4, 3, 2, 1};
    CHECK(cw::spearman_abs(a, a) == doctest::Approx(1.0));
    CHECK(cw::spearman_abs(a, reversed) == doctest::Approx(1.0));

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = testutil::tied_scores(30, seed, 12);
        const auto y = testutil::tied_scores(30, seed + 50, 12);
        // Oracle: rank both by hand (tie-averaged) then Pearson.
        const auto rx = cw::tie_averaged_ranks(x);
        const auto ry = cw::tie_averaged_ranks(y);
        CHECK(std::fabs(cw::spearman_abs(x, y) - std::fabs(oracle::pearson(rx, ry))) < 1e-12);
    }

    CHECK_THROWS_AS((void)cw::spearman_abs(std::vector<double>{1, 1, 1},
                                           std::vector<double>{1, 2, 3}),
                    cw::Error);
}

TEST_CASE("tpr_difference_at_fpr interpolates the curve") {
    const auto scores = testutil::tied_scores(40, 17, 10);
    const auto labels = testutil::random_labels(40, 18);
    const RocCurve curve = cw::roc_curve(scores, labels);

    // A point on the curve differs by zero.
    for (std::size_t i = 0; i < curve.fpr.size(); ++i) {
        const double at = cw::tpr_at_fpr(curve, curve.fpr[i]);
        CHECK(at >= curve.tpr[i] - 1e-12); // upper envelope at vertical steps
        if (i + 1 < curve.fpr.size() && curve.fpr[i + 1] > curve.fpr[i])
            CHECK(cw::tpr_difference_at_fpr(curve, curve.fpr[i], at) == doctest::Approx(0.0));
    }

    // Perfect curve: TPR=1 for any FPR>0; other point at 0.8 gives +0.2.
    const RocCurve perfect =
        cw::roc_curve(std::vector<double>{4, 3, 2, 1}, std::vector<int>{1, 1, 0, 0});
    CHECK(cw::tpr_difference_at_fpr(perfect, 0.5, 0.8) == doctest::Approx(0.2));

    // Manual piecewise-linear oracle on a midpoint.
    for (std::size_t i = 1; i < curve.fpr.size(); ++i) {
        if (curve.fpr[i] == curve.fpr[i - 1]) continue;
        const double mid = 0.5 * (curve.fpr[i] + curve.fpr[i - 1]);
        const double expect =
            curve.tpr[i - 1] + (curve.tpr[i] - curve.tpr[i - 1]) *
                                   (mid - curve.fpr[i - 1]) / (curve.fpr[i] - curve.fpr[i - 1]);
        CHECK(cw::tpr_at_fpr(curve, mid) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("proportion_of_differences matches its definition") {
    // Thresholded scores equal to the binary crowd wisdom give zero.
    ScoreVector sv;
    sv.scores = {0.9, 0.8, 0.2, 0.1};
    const std::vector<int> binary{1, 1, 0, 0};
    const cw::PropDiffResult zero = cw::proportion_of_differences(binary, sv);
    CHECK(!zero.excluded);
    CHECK(zero.value == 0.0);

    // Single-valued binary output is an excluded-replicate signal, not a crash.
    const cw::PropDiffResult excluded =
        cw::proportion_of_differences(std::vector<int>{1, 1, 1, 1}, sv);
    CHECK(excluded.excluded);

    // Random replicate: recompute from the definitions.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto raw_scores = testutil::tied_scores(30, seed * 5, 16);
        const auto binary_cw = testutil::random_labels(30, seed + 77);
        ScoreVector scored;
        scored.scores = raw_scores;
        const cw::PropDiffResult got = cw::proportion_of_differences(binary_cw, scored);

        std::vector<double> oriented = raw_scores;
        if (cw::roc_curve(raw_scores, binary_cw).auroc < 0.5)
            for (double& s : oriented) s = -s;
        std::size_t ones = 0;
        for (int y : binary_cw) ones += static_cast<std::size_t>(y);
        ScoreVector osv;
        osv.scores = oriented;
        const std::vector<int> thresholded = cw::threshold_scores(osv, ones);
        std::size_t diff = 0;
        for (std::size_t i = 0; i < binary_cw.size(); ++i)
            if (thresholded[i] != binary_cw[i]) ++diff;
        CHECK(got.value ==
              doctest::Approx(static_cast<double>(diff) / static_cast<double>(binary_cw.size())));
        CHECK(got.value <= 1.0);
    }
}
