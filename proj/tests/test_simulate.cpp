#include <algorithm>
#include <cmath>

#include "cw/error.hpp"
#include "cw/metrics.hpp"
#include "cw/simulate.hpp"
#include "doctest.h"

using cw::SimulatedDataset;
using cw::SimulationParams;

TEST_CASE("simulate_dataset is bitwise deterministic given the seed") {
    SimulationParams params = *cw::simulation_preset("SIM-SMALL");
    params.seed = 314159;
    const SimulatedDataset a = cw::simulate_dataset(params);
    const SimulatedDataset b = cw::simulate_dataset(params);
    CHECK(a.matrix.values == b.matrix.values);
    CHECK(a.raw_matrix.values == b.raw_matrix.values);
    CHECK(a.truth.labels == b.truth.labels);
    CHECK(a.probs.probs == b.probs.probs);
    CHECK(a.alphas == b.alphas);

    params.seed = 314160;
    const SimulatedDataset c = cw::simulate_dataset(params);
    CHECK(a.raw_matrix.values != c.raw_matrix.values);
}

TEST_CASE("simulate_dataset enforces the exact positive quota") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SimulationParams params = *cw::simulation_preset("SIM-SMALL");
        params.seed = seed;
        const SimulatedDataset ds = cw::simulate_dataset(params);
        CHECK(ds.truth.positives() == 30); // round(100 * 0.3)
        for (double p : ds.probs.probs) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        for (double a : ds.alphas) CHECK(std::isfinite(a));
        CHECK(cw::validate_dataset(ds.matrix, &ds.truth, &ds.probs).empty());
    }
}

TEST_CASE("simulate_dataset validates parameters") {
    SimulationParams params = *cw::simulation_preset("SIM-BASE");
    params.k = 1;
    CHECK_THROWS_AS((void)cw::simulate_dataset(params), cw::Error);

    params = *cw::simulation_preset("SIM-BASE");
    params.p_yes = 0.0001; // round(600 * 0.0001) = 0 positives
    CHECK_THROWS_AS((void)cw::simulate_dataset(params), cw::Error);

    params = *cw::simulation_preset("SIM-BASE");
    params.beta = -1.0;
    CHECK_THROWS_AS((void)cw::simulate_dataset(params), cw::Error);
}

TEST_CASE("simulate_dataset fails loudly when the draw budget is exhausted") {
    SimulationParams params = *cw::simulation_preset("SIM-SMALL");
    try {
        (void)cw::simulate_dataset(params, 0);
        FAIL("expected a sampling-budget error");
    } catch (const cw::Error& e) {
        CHECK(e.category() == cw::ErrorCategory::numeric);
        CHECK(std::string(e.what()).find("quota") != std::string::npos);
    }
}

TEST_CASE("null simulation keeps every aggregator near chance") {
    // alpha_bar = sigma_alpha = 0: responses are pure noise. Two-sided
    // selection inflates AUROC above 0.5, but the replicate mean stays small.
    SimulationParams params = *cw::simulation_preset("SIM-SMALL");
    params.alpha_bar = 0.0;
    params.sigma_alpha = 0.0;
    params.n = 200;
    params.seed = 2024;
    const std::vector<cw::AggregatorSpec> methods = {
        {cw::Method::pca, {}}, {cw::Method::mean, {}}};
    const auto rows = cw::replicate_study(params, 100, methods, false);
    double pca_total = 0.0, mean_total = 0.0;
    int pca_count = 0, mean_count = 0;
    for (const auto& row : rows) {
        REQUIRE(!row.excluded);
        if (row.method == "pca") {
            pca_total += row.auroc;
            ++pca_count;
        } else {
            mean_total += row.auroc;
            ++mean_count;
        }
    }
    REQUIRE(pca_count == 100);
    REQUIRE(mean_count == 100);
    const double pca_mean = pca_total / 100.0;
    const double mean_mean = mean_total / 100.0;
    CHECK(pca_mean >= 0.5);
    CHECK(pca_mean <= 0.62);
    CHECK(mean_mean >= 0.5);
    CHECK(mean_mean <= 0.65);
}

TEST_CASE("replicate_study is deterministic and row-ordered") {
    SimulationParams params = *cw::simulation_preset("SIM-SMALL");
    params.seed = 99;
    const std::vector<cw::AggregatorSpec> methods = {
        {cw::Method::pca, {}}, {cw::Method::median, {}}};
    const auto a = cw::replicate_study(params, 8, methods, true);
    const auto b = cw::replicate_study(params, 8, methods, true);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].replicate == b[i].replicate);
        CHECK(a[i].method == b[i].method);
        CHECK(a[i].auroc == b[i].auroc);
        CHECK(a[i].aupr == b[i].aupr);
        CHECK(a[i].spearman_probs == b[i].spearman_probs);
    }
    CHECK(a[0].replicate == 0);
    CHECK(a[1].method == "median");
}

TEST_CASE("replicate_study with one replicate reproduces a single evaluation") {
    SimulationParams params = *cw::simulation_preset("SIM-SMALL");
    params.seed = 7;
    const std::vector<cw::AggregatorSpec> methods = {{cw::Method::pca, {}}};
    const auto rows = cw::replicate_study(params, 1, methods, false);
    REQUIRE(rows.size() == 1);

    SimulationParams rep = params;
    rep.seed = cw::replicate_seed(params.seed, 0);
    const SimulatedDataset ds = cw::simulate_dataset(rep);
    const cw::ScoreVector sv = cw::aggregate(ds.matrix, methods[0]);
    const cw::MetricReport report = cw::evaluate_two_sided(sv, ds.truth);
    CHECK(rows[0].auroc == report.auroc);
    CHECK(rows[0].aupr == report.aupr);
    CHECK(rows[0].spearman_probs == cw::spearman_abs(sv.scores, ds.probs.probs));
}

TEST_CASE("replicate_study flags sml without binarization instead of aborting") {
    SimulationParams params = *cw::simulation_preset("SIM-SMALL");
    const std::vector<cw::AggregatorSpec> methods = {
        {cw::Method::pca, {}}, {cw::Method::sml, {}}};
    const auto rows = cw::replicate_study(params, 2, methods, false);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        if (row.method == "sml") {
            CHECK(row.excluded);
            CHECK(!row.note.empty());
        } else {
            CHECK(!row.excluded);
        }
    }
}

TEST_CASE("binarization_study produces comparable PCA and SML columns") {
    SimulationParams params = *cw::simulation_preset("SIM-SMALL");
    params.seed = 17;
    const cw::BinarizationStudy study = cw::binarization_study(params, 12, false);
    REQUIRE(study.rows.size() == 12);
    CHECK(study.summary.used + study.summary.excluded == 12);
    for (const auto& row : study.rows) {
        if (row.excluded) continue;
        CHECK(row.sml_fpr >= 0.0);
        CHECK(row.sml_fpr <= 1.0);
        CHECK(row.sml_tpr >= 0.0);
        CHECK(row.sml_tpr <= 1.0);
        CHECK(row.pca_auroc >= 0.5);
        CHECK(row.prop_diff >= 0.0);
        CHECK(row.prop_diff <= 1.0);
    }
    // Deterministic rerun reproduces the test statistic exactly.
    const cw::BinarizationStudy again = cw::binarization_study(params, 12, false);
    CHECK(again.summary.mean_tpr_diff == study.summary.mean_tpr_diff);
    CHECK(again.summary.t_statistic == study.summary.t_statistic);
    CHECK(again.summary.p_one_sided == study.summary.p_one_sided);
}

TEST_CASE("convergence_study emits one row per (k, replicate, method)") {
    SimulationParams params = *cw::simulation_preset("SIM-SMALL");
    params.seed = 5;
    const std::vector<cw::AggregatorSpec> methods = {
        {cw::Method::pca, {}}, {cw::Method::mean, {}}};
    const auto rows = cw::convergence_study(params, {4, 8}, 3, methods);
    REQUIRE(rows.size() == 2 * 3 * 2);
    int k4 = 0, k8 = 0;
    for (const auto& row : rows) {
        CHECK((row.k == 4 || row.k == 8));
        (row.k == 4 ? k4 : k8) += 1;
        if (!row.excluded) {
            CHECK(row.spearman_probs >= 0.0);
            CHECK(row.spearman_probs <= 1.0);
            CHECK(row.auroc_delta == row.auroc - row.auroc_probs);
        }
    }
    CHECK(k4 == 6);
    CHECK(k8 == 6);
}

TEST_CASE("median PCA-vs-probs correlation does not degrade as k grows") {
    SimulationParams params = *cw::simulation_preset("SIM-SMALL");
    params.seed = 11;
    const std::vector<cw::AggregatorSpec> methods = {{cw::Method::pca, {}}};
    const auto rows = cw::convergence_study(params, {4, 16, 64}, 15, methods);
    auto median_for = [&](int k) {
        std::vector<double> values;
        for (const auto& row : rows)
            if (row.k == k && !row.excluded) values.push_back(row.spearman_probs);
        std::sort(values.begin(), values.end());
        return values[values.size() / 2];
    };
    const double m4 = median_for(4);
    const double m16 = median_for(16);
    const double m64 = median_for(64);
    CHECK(m16 >= m4 - 0.02);
    CHECK(m64 >= m16 - 0.02);
    CHECK(m64 > m4);
}

TEST_CASE("study results are identical for any worker count") {
    SimulationParams params = *cw::simulation_preset("SIM-SMALL");
    params.seed = 4242;
    const std::vector<cw::AggregatorSpec> methods = {
        {cw::Method::pca, {}}, {cw::Method::mean, {}}};

    setenv("CW_THREADS", "1", 1);
    const auto serial = cw::replicate_study(params, 10, methods, true);
    setenv("CW_THREADS", "4", 1);
    const auto parallel = cw::replicate_study(params, 10, methods, true);
    unsetenv("CW_THREADS");

    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].replicate == parallel[i].replicate);
        CHECK(serial[i].method == parallel[i].method);
        CHECK(serial[i].auroc == parallel[i].auroc);
        CHECK(serial[i].aupr == parallel[i].aupr);
        CHECK(serial[i].spearman_probs == parallel[i].spearman_probs);
    }
}

TEST_CASE("simulation presets cover the documented grid") {
    CHECK(cw::simulation_presets().size() == 5);
    const auto base = cw::simulation_preset("SIM-BASE");
    REQUIRE(base.has_value());
    CHECK(base->k == 10);
    CHECK(base->n == 600);
    CHECK(base->p_yes == 0.3);
    const auto adversarial = cw::simulation_preset("SIM-ADVERSARIAL");
    REQUIRE(adversarial.has_value());
    CHECK(adversarial->alpha_bar == 0.5);
    CHECK(adversarial->sigma_alpha == 1.0);
    CHECK(!cw::simulation_preset("SIM-NOPE").has_value());
}
