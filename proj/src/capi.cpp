#include "crowdwise.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "cw/aggregate.hpp"
#include "cw/error.hpp"
#include "cw/io.hpp"
#include "cw/metrics.hpp"
#include "cw/preprocess.hpp"
#include "cw/rng.hpp"
#include "cw/simulate.hpp"
#include "cw/supervised.hpp"
#include "cw/table.hpp"
#include "cw/types.hpp"
#include "cw/version.hpp"

struct cw_matrix {
    cw::ResponseMatrix value;
};
struct cw_scores {
    cw::ScoreVector value;
};
struct cw_dataset {
    cw_matrix normalized;
    cw_matrix raw;
    std::vector<int> truth;
    std::vector<double> probs;
    std::vector<double> alphas;
};
struct cw_strings {
    std::vector<std::string> value;
};
struct cw_table {
    cw::Table value;
};
struct cw_curve {
    // Either ROC (x=fpr, y=tpr) or PR (x=recall, y=precision).
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> thresholds;
    double area = 0.0;
};

namespace {

thread_local std::string g_last_error;

cw_status to_status(const cw::Error& e) {
    g_last_error = e.what();
    switch (e.category()) {
        case cw::ErrorCategory::validation: return CW_ERROR_VALIDATION;
        case cw::ErrorCategory::numeric: return CW_ERROR_NUMERIC;
        case cw::ErrorCategory::io: return CW_ERROR_IO;
        case cw::ErrorCategory::alignment: return CW_ERROR_ALIGNMENT;
    }
    return CW_ERROR;
}

// Runs fn, translating exceptions into statuses and the thread-local message.
template <typename Fn>
cw_status guarded(Fn&& fn) {
    try {
        fn();
        return CW_OK;
    } catch (const cw::Error& e) {
        return to_status(e);
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return CW_ERROR;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CW_ERROR;
    } catch (...) {
        g_last_error = "unknown failure";
        return CW_ERROR;
    }
}

cw_status require(bool ok, const char* message) {
    if (ok) return CW_OK;
    g_last_error = message;
    return CW_ERROR_VALIDATION;
}

cw_strings* make_strings(std::vector<std::string> values) {
    return new cw_strings{std::move(values)};
}

cw::GroundTruth truth_from(const int32_t* labels, std::size_t n) {
    cw::GroundTruth truth;
    truth.labels.assign(labels, labels + n);
    return truth;
}

cw::AggregatorSpec spec_from(const char* method, int n_neighbors) {
    const auto parsed = cw::method_from_string(method == nullptr ? "" : method);
    if (!parsed.has_value())
        cw::throw_validation("unknown method '" + std::string(method ? method : "") + "'");
    cw::AggregatorSpec spec;
    spec.method = *parsed;
    if (n_neighbors > 0) spec.n_neighbors = n_neighbors;
    return spec;
}

cw::SimulationParams params_from(const cw_sim_params* p) {
    if (p == nullptr) cw::throw_validation("simulation parameters are null");
    cw::SimulationParams params;
    params.k = static_cast<int>(p->individuals);
    params.n = static_cast<int>(p->questions);
    params.p_yes = p->p_yes;
    params.beta = p->beta;
    params.alpha_bar = p->alpha_bar;
    params.sigma_alpha = p->sigma_alpha;
    params.seed = p->seed;
    return params;
}

} // namespace

extern "C" {

const char* cw_version(void) { return cw::kVersion; }

const char* cw_last_error(void) { return g_last_error.c_str(); }

size_t cw_strings_size(const cw_strings* list) { return list == nullptr ? 0 : list->value.size(); }

const char* cw_strings_get(const cw_strings* list, size_t index) {
    if (list == nullptr || index >= list->value.size()) return nullptr;
    return list->value[index].c_str();
}

void cw_strings_free(cw_strings* list) { delete list; }

cw_status cw_matrix_create(size_t individuals, size_t questions, const double* values_row_major,
                           cw_kind kind, cw_matrix** out) {
    if (cw_status st = require(out != nullptr && values_row_major != nullptr,
                               "cw_matrix_create: null argument"))
        return st;
    return guarded([&] {
        cw::Matrix values(individuals, questions);
        std::memcpy(values.data(), values_row_major, individuals * questions * sizeof(double));
        *out = new cw_matrix{cw::make_response_matrix(
            std::move(values), kind == CW_KIND_BINARY ? cw::Kind::binary : cw::Kind::continuous)};
    });
}

cw_status cw_matrix_set_ids(cw_matrix* matrix, const char* const* individual_ids,
                            const char* const* question_ids) {
    if (cw_status st = require(matrix != nullptr, "cw_matrix_set_ids: null matrix")) return st;
    return guarded([&] {
        if (individual_ids != nullptr)
            for (std::size_t j = 0; j < matrix->value.individuals(); ++j)
                matrix->value.individual_ids[j] = individual_ids[j];
        if (question_ids != nullptr)
            for (std::size_t i = 0; i < matrix->value.questions(); ++i)
                matrix->value.question_ids[i] = question_ids[i];
    });
}

void cw_matrix_free(cw_matrix* matrix) { delete matrix; }

size_t cw_matrix_individuals(const cw_matrix* matrix) {
    return matrix == nullptr ? 0 : matrix->value.individuals();
}

size_t cw_matrix_questions(const cw_matrix* matrix) {
    return matrix == nullptr ? 0 : matrix->value.questions();
}

cw_kind cw_matrix_kind(const cw_matrix* matrix) {
    return matrix != nullptr && matrix->value.kind == cw::Kind::binary ? CW_KIND_BINARY
                                                                       : CW_KIND_CONTINUOUS;
}

const double* cw_matrix_values(const cw_matrix* matrix) {
    return matrix == nullptr ? nullptr : matrix->value.values.data();
}

const char* cw_matrix_individual_id(const cw_matrix* matrix, size_t j) {
    if (matrix == nullptr || j >= matrix->value.individuals()) return nullptr;
    return matrix->value.individual_ids[j].c_str();
}

const char* cw_matrix_question_id(const cw_matrix* matrix, size_t i) {
    if (matrix == nullptr || i >= matrix->value.questions()) return nullptr;
    return matrix->value.question_ids[i].c_str();
}

cw_status cw_matrix_read_csv(const char* path, cw_matrix** out) {
    if (cw_status st = require(path != nullptr && out != nullptr, "cw_matrix_read_csv: null argument"))
        return st;
    return guarded([&] { *out = new cw_matrix{cw::read_responses_csv(path)}; });
}

cw_status cw_matrix_write_csv(const cw_matrix* matrix, const char* path) {
    if (cw_status st = require(matrix != nullptr && path != nullptr,
                               "cw_matrix_write_csv: null argument"))
        return st;
    return guarded([&] { cw::write_responses_csv(matrix->value, path); });
}

cw_status cw_validate_dataset(const cw_matrix* matrix, const int32_t* labels_or_null,
                              const double* probs_or_null, cw_strings** out_report) {
    if (cw_status st = require(matrix != nullptr && out_report != nullptr,
                               "cw_validate_dataset: null argument"))
        return st;
    return guarded([&] {
        const std::size_t n = matrix->value.questions();
        cw::GroundTruth truth;
        cw::ClassProbabilities probs;
        if (labels_or_null != nullptr) truth.labels.assign(labels_or_null, labels_or_null + n);
        if (probs_or_null != nullptr) probs.probs.assign(probs_or_null, probs_or_null + n);
        *out_report = make_strings(cw::validate_dataset(
            matrix->value, labels_or_null != nullptr ? &truth : nullptr,
            probs_or_null != nullptr ? &probs : nullptr));
    });
}

cw_status cw_rank_transform(const cw_matrix* matrix, cw_matrix** out) {
    if (cw_status st = require(matrix != nullptr && out != nullptr,
                               "cw_rank_transform: null argument"))
        return st;
    return guarded([&] { *out = new cw_matrix{cw::rank_transform(matrix->value)}; });
}

cw_status cw_standardize(const cw_matrix* matrix, cw_matrix** out, cw_strings** warnings_or_null) {
    if (cw_status st = require(matrix != nullptr && out != nullptr, "cw_standardize: null argument"))
        return st;
    return guarded([&] {
        std::vector<std::string> warnings;
        *out = new cw_matrix{cw::standardize(matrix->value, &warnings)};
        if (warnings_or_null != nullptr) *warnings_or_null = make_strings(std::move(warnings));
    });
}

cw_status cw_perfect_binarize(const cw_matrix* matrix, const int32_t* labels, uint64_t seed,
                              cw_matrix** out) {
    if (cw_status st = require(matrix != nullptr && labels != nullptr && out != nullptr,
                               "cw_perfect_binarize: null argument"))
        return st;
    return guarded([&] {
        const cw::GroundTruth truth = truth_from(labels, matrix->value.questions());
        *out = new cw_matrix{cw::perfect_binarize(matrix->value, truth, seed)};
    });
}

cw_status cw_aggregate(const cw_matrix* matrix, const char* method, int n_neighbors,
                       int auto_normalize, cw_scores** out, cw_strings** warnings_or_null) {
    if (cw_status st = require(matrix != nullptr && out != nullptr, "cw_aggregate: null argument"))
        return st;
    return guarded([&] {
        const cw::AggregatorSpec spec = spec_from(method, n_neighbors);
        std::vector<std::string> warnings;
        cw::ScoreVector sv = auto_normalize != 0
                                 ? cw::aggregate_auto(matrix->value, spec, &warnings)
                                 : cw::aggregate(matrix->value, spec, &warnings);
        *out = new cw_scores{std::move(sv)};
        if (warnings_or_null != nullptr) *warnings_or_null = make_strings(std::move(warnings));
    });
}

size_t cw_scores_size(const cw_scores* scores) {
    return scores == nullptr ? 0 : scores->value.scores.size();
}

const double* cw_scores_values(const cw_scores* scores) {
    return scores == nullptr ? nullptr : scores->value.scores.data();
}

cw_orientation cw_scores_orientation(const cw_scores* scores) {
    return scores != nullptr && scores->value.orientation == cw::Orientation::flipped
               ? CW_FLIPPED
               : CW_AS_COMPUTED;
}

const char* cw_scores_method(const cw_scores* scores) {
    return scores == nullptr ? nullptr : scores->value.method_tag.c_str();
}

void cw_scores_free(cw_scores* scores) { delete scores; }

cw_status cw_threshold_scores(const cw_scores* scores, size_t n_positive, int32_t* out_labels) {
    if (cw_status st = require(scores != nullptr && out_labels != nullptr,
                               "cw_threshold_scores: null argument"))
        return st;
    return guarded([&] {
        const std::vector<int> labels = cw::threshold_scores(scores->value, n_positive);
        for (std::size_t i = 0; i < labels.size(); ++i)
            out_labels[i] = static_cast<int32_t>(labels[i]);
    });
}

cw_status cw_evaluate_two_sided(const double* scores, const int32_t* labels, size_t n,
                                cw_metric_report* out) {
    if (cw_status st = require(scores != nullptr && labels != nullptr && out != nullptr,
                               "cw_evaluate_two_sided: null argument"))
        return st;
    return guarded([&] {
        cw::ScoreVector sv;
        sv.scores.assign(scores, scores + n);
        const cw::MetricReport report = cw::evaluate_two_sided(sv, truth_from(labels, n));
        out->auroc = report.auroc;
        out->aupr = report.aupr;
        out->auroc_orientation =
            report.auroc_orientation == cw::Orientation::flipped ? CW_FLIPPED : CW_AS_COMPUTED;
        out->aupr_orientation =
            report.aupr_orientation == cw::Orientation::flipped ? CW_FLIPPED : CW_AS_COMPUTED;
    });
}

cw_status cw_roc_curve(const double* scores, const int32_t* labels, size_t n, cw_curve** out) {
    if (cw_status st = require(scores != nullptr && labels != nullptr && out != nullptr,
                               "cw_roc_curve: null argument"))
        return st;
    return guarded([&] {
        const cw::RocCurve curve = cw::roc_curve({scores, n}, truth_from(labels, n).labels);
        *out = new cw_curve{curve.fpr, curve.tpr, curve.thresholds, curve.auroc};
    });
}

cw_status cw_pr_curve(const double* scores, const int32_t* labels, size_t n, cw_curve** out) {
    if (cw_status st = require(scores != nullptr && labels != nullptr && out != nullptr,
                               "cw_pr_curve: null argument"))
        return st;
    return guarded([&] {
        const cw::PrCurve curve = cw::pr_curve({scores, n}, truth_from(labels, n).labels);
        *out = new cw_curve{curve.recall, curve.precision, curve.thresholds, curve.aupr};
    });
}

size_t cw_curve_size(const cw_curve* curve) { return curve == nullptr ? 0 : curve->x.size(); }

size_t cw_curve_threshold_count(const cw_curve* curve) {
    return curve == nullptr ? 0 : curve->thresholds.size();
}

cw_status cw_curve_values(const cw_curve* curve, double* x, double* y, double* thresholds) {
    if (cw_status st = require(curve != nullptr, "cw_curve_values: null curve")) return st;
    return guarded([&] {
        if (x != nullptr) std::memcpy(x, curve->x.data(), curve->x.size() * sizeof(double));
        if (y != nullptr) std::memcpy(y, curve->y.data(), curve->y.size() * sizeof(double));
        if (thresholds != nullptr)
            std::memcpy(thresholds, curve->thresholds.data(),
                        curve->thresholds.size() * sizeof(double));
    });
}

double cw_curve_area(const cw_curve* curve) { return curve == nullptr ? 0.0 : curve->area; }

void cw_curve_free(cw_curve* curve) { delete curve; }

cw_status cw_spearman_abs(const double* a, const double* b, size_t n, double* out) {
    if (cw_status st = require(a != nullptr && b != nullptr && out != nullptr,
                               "cw_spearman_abs: null argument"))
        return st;
    return guarded([&] { *out = cw::spearman_abs({a, n}, {b, n}); });
}

cw_status cw_tpr_difference_at_fpr(const cw_curve* roc, double fpr, double tpr, double* out) {
    if (cw_status st = require(roc != nullptr && out != nullptr,
                               "cw_tpr_difference_at_fpr: null argument"))
        return st;
    return guarded([&] {
        cw::RocCurve curve;
        curve.fpr = roc->x;
        curve.tpr = roc->y;
        curve.thresholds = roc->thresholds;
        curve.auroc = roc->area;
        *out = cw::tpr_difference_at_fpr(curve, fpr, tpr);
    });
}

cw_status cw_sim_preset(const char* name, cw_sim_params* out) {
    if (cw_status st = require(name != nullptr && out != nullptr, "cw_sim_preset: null argument"))
        return st;
    return guarded([&] {
        const auto preset = cw::simulation_preset(name);
        if (!preset.has_value())
            cw::throw_validation("unknown simulation preset '" + std::string(name) + "'");
        out->individuals = preset->k;
        out->questions = preset->n;
        out->p_yes = preset->p_yes;
        out->beta = preset->beta;
        out->alpha_bar = preset->alpha_bar;
        out->sigma_alpha = preset->sigma_alpha;
        out->seed = preset->seed;
    });
}

cw_status cw_simulate(const cw_sim_params* params, cw_dataset** out) {
    if (cw_status st = require(out != nullptr, "cw_simulate: null out")) return st;
    return guarded([&] {
        cw::SimulatedDataset ds = cw::simulate_dataset(params_from(params));
        auto* handle = new cw_dataset;
        handle->normalized.value = std::move(ds.matrix);
        handle->raw.value = std::move(ds.raw_matrix);
        handle->truth = std::move(ds.truth.labels);
        handle->probs = std::move(ds.probs.probs);
        handle->alphas = std::move(ds.alphas);
        *out = handle;
    });
}

const cw_matrix* cw_dataset_matrix(const cw_dataset* ds) {
    return ds == nullptr ? nullptr : &ds->normalized;
}

const cw_matrix* cw_dataset_raw_matrix(const cw_dataset* ds) {
    return ds == nullptr ? nullptr : &ds->raw;
}

cw_status cw_dataset_truth(const cw_dataset* ds, int32_t* out) {
    if (cw_status st = require(ds != nullptr && out != nullptr, "cw_dataset_truth: null argument"))
        return st;
    for (std::size_t i = 0; i < ds->truth.size(); ++i)
        out[i] = static_cast<int32_t>(ds->truth[i]);
    return CW_OK;
}

cw_status cw_dataset_probs(const cw_dataset* ds, double* out) {
    if (cw_status st = require(ds != nullptr && out != nullptr, "cw_dataset_probs: null argument"))
        return st;
    std::memcpy(out, ds->probs.data(), ds->probs.size() * sizeof(double));
    return CW_OK;
}

cw_status cw_dataset_alphas(const cw_dataset* ds, double* out) {
    if (cw_status st = require(ds != nullptr && out != nullptr, "cw_dataset_alphas: null argument"))
        return st;
    std::memcpy(out, ds->alphas.data(), ds->alphas.size() * sizeof(double));
    return CW_OK;
}

void cw_dataset_free(cw_dataset* ds) { delete ds; }

cw_status cw_replicate_study(const cw_sim_params* params, int replicates, const char* methods_csv,
                             int binarize, cw_table** table) {
    if (cw_status st = require(methods_csv != nullptr && table != nullptr,
                               "cw_replicate_study: null argument"))
        return st;
    return guarded([&] {
        const auto rows = cw::replicate_study(params_from(params), replicates,
                                              cw::parse_aggregator_list(methods_csv),
                                              binarize != 0);
        *table = new cw_table{cw::to_table(rows)};
    });
}

cw_status cw_study_binarization(const cw_sim_params* params, int replicates,
                                int pca_on_binarized, cw_table** table, cw_table** summary) {
    if (cw_status st = require(table != nullptr, "cw_study_binarization: null table")) return st;
    return guarded([&] {
        const cw::BinarizationStudy study =
            cw::binarization_study(params_from(params), replicates, pca_on_binarized != 0);
        *table = new cw_table{cw::to_table(study.rows)};
        if (summary != nullptr) *summary = new cw_table{cw::to_table(study.summary)};
    });
}

cw_status cw_study_convergence(const cw_sim_params* params, const int64_t* k_values,
                               size_t k_count, int replicates, const char* methods_csv,
                               cw_table** table) {
    if (cw_status st = require(k_values != nullptr && k_count > 0 && methods_csv != nullptr &&
                                   table != nullptr,
                               "cw_study_convergence: null argument"))
        return st;
    return guarded([&] {
        std::vector<int> ks;
        for (std::size_t i = 0; i < k_count; ++i) ks.push_back(static_cast<int>(k_values[i]));
        const auto rows = cw::convergence_study(params_from(params), ks, replicates,
                                                cw::parse_aggregator_list(methods_csv));
        *table = new cw_table{cw::to_table(rows)};
    });
}

cw_status cw_study_cv(const cw_sim_params* params, double train_fraction, int repeats,
                      const char* crowd_methods_csv, const char* classifiers_csv,
                      cw_table** table, cw_table** summary) {
    if (cw_status st = require(crowd_methods_csv != nullptr && classifiers_csv != nullptr &&
                                   table != nullptr,
                               "cw_study_cv: null argument"))
        return st;
    return guarded([&] {
        const cw::SimulationParams sim = params_from(params);
        const cw::SimulatedDataset ds = cw::simulate_dataset(sim);
        cw::SplitSpec spec;
        spec.train_fraction = train_fraction;
        spec.repeats = repeats;
        spec.seed = cw::derive_seed(sim.seed, 0x637673ULL);
        const cw::CvResult result =
            cw::cv_compare(ds.raw_matrix, ds.truth, cw::parse_aggregator_list(crowd_methods_csv),
                           cw::parse_classifier_list(classifiers_csv), spec);
        *table = new cw_table{cw::to_table(result.rows)};
        if (summary != nullptr)
            *summary = new cw_table{cw::to_table(result.summaries, result.skipped)};
    });
}

size_t cw_table_rows(const cw_table* table) {
    return table == nullptr ? 0 : table->value.rows.size();
}

size_t cw_table_cols(const cw_table* table) {
    return table == nullptr ? 0 : table->value.columns.size();
}

const char* cw_table_column(const cw_table* table, size_t col) {
    if (table == nullptr || col >= table->value.columns.size()) return nullptr;
    return table->value.columns[col].c_str();
}

const char* cw_table_cell(const cw_table* table, size_t row, size_t col) {
    if (table == nullptr || row >= table->value.rows.size() ||
        col >= table->value.rows[row].size())
        return nullptr;
    return table->value.rows[row][col].c_str();
}

cw_status cw_table_write_csv(const cw_table* table, const char* path) {
    if (cw_status st = require(table != nullptr && path != nullptr,
                               "cw_table_write_csv: null argument"))
        return st;
    return guarded([&] { cw::write_table_csv(table->value, path); });
}

void cw_table_free(cw_table* table) { delete table; }

} // extern "C"
