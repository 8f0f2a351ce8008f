/* crowdwise — wisdom-of-the-crowd consensus scoring via one-dimensional
 * unsupervised dimension reduction.
 *
 * C API of the shared library. All functions return CW_OK on success or a
 * status describing the failure class; cw_last_error() carries the detailed
 * message for the calling thread. Objects returned through out-parameters are
 * owned by the caller and released with the matching _free function.
 */
#ifndef CROWDWISE_H
#define CROWDWISE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cw_status {
    CW_OK = 0,
    CW_ERROR = 1,            /* unexpected failure */
    CW_ERROR_VALIDATION = 2, /* invariant/contract violation in the input */
    CW_ERROR_NUMERIC = 3,    /* numerical or connectivity failure */
    CW_ERROR_IO = 4,         /* file access or parse failure */
    CW_ERROR_ALIGNMENT = 5   /* id mismatch between files */
} cw_status;

typedef enum cw_kind { CW_KIND_CONTINUOUS = 0, CW_KIND_BINARY = 1 } cw_kind;
typedef enum cw_orientation { CW_AS_COMPUTED = 0, CW_FLIPPED = 1 } cw_orientation;

typedef struct cw_matrix cw_matrix;   /* responses: individuals x questions */
typedef struct cw_scores cw_scores;   /* one consensus score per question */
typedef struct cw_dataset cw_dataset; /* simulated dataset bundle */
typedef struct cw_curve cw_curve;     /* ROC or precision-recall curve */
typedef struct cw_table cw_table;     /* study result table (string cells) */
typedef struct cw_strings cw_strings; /* list of strings (reports, warnings) */

const char* cw_version(void);
const char* cw_last_error(void);

/* ------------------------------------------------------------------ */
/* string lists                                                        */
size_t cw_strings_size(const cw_strings* list);
const char* cw_strings_get(const cw_strings* list, size_t index);
void cw_strings_free(cw_strings* list);

/* ------------------------------------------------------------------ */
/* response matrices                                                   */
cw_status cw_matrix_create(size_t individuals, size_t questions,
                           const double* values_row_major, cw_kind kind, cw_matrix** out);
cw_status cw_matrix_set_ids(cw_matrix* matrix, const char* const* individual_ids,
                            const char* const* question_ids);
void cw_matrix_free(cw_matrix* matrix);
size_t cw_matrix_individuals(const cw_matrix* matrix);
size_t cw_matrix_questions(const cw_matrix* matrix);
cw_kind cw_matrix_kind(const cw_matrix* matrix);
const double* cw_matrix_values(const cw_matrix* matrix); /* row-major k x n */
const char* cw_matrix_individual_id(const cw_matrix* matrix, size_t j);
const char* cw_matrix_question_id(const cw_matrix* matrix, size_t i);
cw_status cw_matrix_read_csv(const char* path, cw_matrix** out);
cw_status cw_matrix_write_csv(const cw_matrix* matrix, const char* path);

/* Structural validation; fills a report with one line per violation
 * (empty report == dataset accepted everywhere downstream). */
cw_status cw_validate_dataset(const cw_matrix* matrix, const int32_t* labels_or_null,
                              const double* probs_or_null, cw_strings** out_report);

/* ------------------------------------------------------------------ */
/* preprocessing                                                       */
cw_status cw_rank_transform(const cw_matrix* matrix, cw_matrix** out);
cw_status cw_standardize(const cw_matrix* matrix, cw_matrix** out,
                         cw_strings** warnings_or_null);
cw_status cw_perfect_binarize(const cw_matrix* matrix, const int32_t* labels, uint64_t seed,
                              cw_matrix** out);

/* ------------------------------------------------------------------ */
/* aggregation                                                         */
/* method: mean|median|pca|fa|mds|isomap|lle|spectral|sml. n_neighbors is
 * required for isomap/lle/spectral and ignored otherwise (pass 0). With
 * auto_normalize nonzero the library applies the normalization protocol per
 * input kind (sml always consumes the raw binary matrix). */
cw_status cw_aggregate(const cw_matrix* matrix, const char* method, int n_neighbors,
                       int auto_normalize, cw_scores** out, cw_strings** warnings_or_null);
size_t cw_scores_size(const cw_scores* scores);
const double* cw_scores_values(const cw_scores* scores);
cw_orientation cw_scores_orientation(const cw_scores* scores);
const char* cw_scores_method(const cw_scores* scores);
void cw_scores_free(cw_scores* scores);
/* Exactly n_positive ones on the largest entries (index tie-break);
 * out_labels must hold cw_scores_size() entries. */
cw_status cw_threshold_scores(const cw_scores* scores, size_t n_positive, int32_t* out_labels);

/* ------------------------------------------------------------------ */
/* metrics                                                             */
typedef struct cw_metric_report {
    double auroc;
    double aupr;
    cw_orientation auroc_orientation;
    cw_orientation aupr_orientation;
} cw_metric_report;

cw_status cw_evaluate_two_sided(const double* scores, const int32_t* labels, size_t n,
                                cw_metric_report* out);
cw_status cw_roc_curve(const double* scores, const int32_t* labels, size_t n, cw_curve** out);
cw_status cw_pr_curve(const double* scores, const int32_t* labels, size_t n, cw_curve** out);
size_t cw_curve_size(const cw_curve* curve);
size_t cw_curve_threshold_count(const cw_curve* curve);
/* roc: x=fpr, y=tpr; pr: x=recall, y=precision. Buffers may be NULL. */
cw_status cw_curve_values(const cw_curve* curve, double* x, double* y, double* thresholds);
double cw_curve_area(const cw_curve* curve);
void cw_curve_free(cw_curve* curve);
cw_status cw_spearman_abs(const double* a, const double* b, size_t n, double* out);
cw_status cw_tpr_difference_at_fpr(const cw_curve* roc, double fpr, double tpr, double* out);

/* ------------------------------------------------------------------ */
/* simulation and studies                                              */
typedef struct cw_sim_params {
    int64_t individuals;
    int64_t questions;
    double p_yes;
    double beta;
    double alpha_bar;
    double sigma_alpha;
    uint64_t seed;
} cw_sim_params;

cw_status cw_sim_preset(const char* name, cw_sim_params* out);
cw_status cw_simulate(const cw_sim_params* params, cw_dataset** out);
const cw_matrix* cw_dataset_matrix(const cw_dataset* ds);     /* normalized */
const cw_matrix* cw_dataset_raw_matrix(const cw_dataset* ds); /* pre-normalization */
cw_status cw_dataset_truth(const cw_dataset* ds, int32_t* out);  /* n entries */
cw_status cw_dataset_probs(const cw_dataset* ds, double* out);   /* n entries */
cw_status cw_dataset_alphas(const cw_dataset* ds, double* out);  /* k entries */
void cw_dataset_free(cw_dataset* ds);

/* Study tables: `table` receives per-replicate rows, `summary` (when the
 * pointer is non-NULL) the study-level statistics. methods_csv is a
 * comma-separated method list such as "pca,mean,isomap(10)". */
cw_status cw_replicate_study(const cw_sim_params* params, int replicates,
                             const char* methods_csv, int binarize, cw_table** table);
cw_status cw_study_binarization(const cw_sim_params* params, int replicates,
                                int pca_on_binarized, cw_table** table, cw_table** summary);
cw_status cw_study_convergence(const cw_sim_params* params, const int64_t* k_values,
                               size_t k_count, int replicates, const char* methods_csv,
                               cw_table** table);
cw_status cw_study_cv(const cw_sim_params* params, double train_fraction, int repeats,
                      const char* crowd_methods_csv, const char* classifiers_csv,
                      cw_table** table, cw_table** summary);

size_t cw_table_rows(const cw_table* table);
size_t cw_table_cols(const cw_table* table);
const char* cw_table_column(const cw_table* table, size_t col);
const char* cw_table_cell(const cw_table* table, size_t row, size_t col);
cw_status cw_table_write_csv(const cw_table* table, const char* path);
void cw_table_free(cw_table* table);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CROWDWISE_H */
