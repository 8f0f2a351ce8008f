#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cw/matrix.hpp"
#include "cw/types.hpp"

namespace cw {

enum class Method {
    mean,
    median,
    pca,
    factor_analysis,
    mds,
    isomap,
    lle,
    spectral,
    sml,
};

const char* method_name(Method m);
std::optional<Method> method_from_string(const std::string& name);
bool method_needs_neighbors(Method m);

// The neighbor counts swept by default in studies.
extern const std::vector<int> kDefaultNeighborGrid;

struct AggregatorSpec {
    Method method = Method::pca;
    std::optional<int> n_neighbors;

    std::string tag() const; // e.g. "pca", "isomap(10)"
};

// Throws a validation error if the spec cannot be applied to a matrix with
// `questions` columns (missing/out-of-range neighbor counts, ...).
void validate_spec(const AggregatorSpec& spec, std::size_t questions);

// Dispatch over all crowd-wisdom methods. Expects a normalized matrix
// (raw binary for sml) and returns majority-aligned scores.
ScoreVector aggregate(const ResponseMatrix& matrix, const AggregatorSpec& spec,
                      std::vector<std::string>* warnings = nullptr);

// Convenience wrapper over raw input: applies the normalization protocol per
// input kind (sml consumes the raw binary matrix directly).
ScoreVector aggregate_auto(const ResponseMatrix& raw, const AggregatorSpec& spec,
                           std::vector<std::string>* warnings = nullptr);

ScoreVector mean_scores(const ResponseMatrix& matrix);
ScoreVector median_scores(const ResponseMatrix& matrix);

// Projection of each question's k-vector onto the first right-singular
// direction of the question-by-individual matrix.
ScoreVector pca_scores(const ResponseMatrix& matrix);

// Posterior-mean factor scores of a single-factor model fit by EM.
ScoreVector factor_analysis_scores(const ResponseMatrix& matrix);

// Full single-factor fit (loadings/uniquenesses per individual).
struct FactorModel {
    std::vector<double> loadings;
    std::vector<double> uniquenesses;
    ScoreVector scores;
};

FactorModel factor_analysis_fit(const ResponseMatrix& matrix);

// Classical (Torgerson) MDS of the question points to one dimension.
ScoreVector mds_scores(const ResponseMatrix& matrix);

// Exposed for the MDS error path and the independent-route tests.
ScoreVector mds_from_squared_distances(const Matrix& d2, const std::string& tag);

ScoreVector isomap_scores(const ResponseMatrix& matrix, int n_neighbors);
ScoreVector lle_scores(const ResponseMatrix& matrix, int n_neighbors);
ScoreVector spectral_scores(const ResponseMatrix& matrix, int n_neighbors,
                            std::vector<std::string>* warnings = nullptr);

// Spectral meta-learner for binary matrices: rank-1 fit to the off-diagonal
// covariance of +/-1 responses, scores from the weight vector.
ScoreVector sml_scores(const ResponseMatrix& matrix,
                       std::vector<std::string>* warnings = nullptr);

// SML individual weights (exposed for the weight-vs-accuracy tests).
std::vector<double> sml_weights(const ResponseMatrix& matrix,
                                std::vector<std::string>* warnings = nullptr);

// Negates the scores iff their Pearson correlation with the per-question mean
// response is negative; the orientation field records the flip.
ScoreVector align_to_majority(ScoreVector scores, const ResponseMatrix& matrix,
                              std::vector<std::string>* warnings = nullptr);

// Exactly n_positive ones on the largest entries; boundary ties broken by
// lowest question index.
std::vector<int> threshold_scores(const ScoreVector& scores, std::size_t n_positive);

// LLE reconstruction weights W (rows sum to 1); exposed for property tests.
Matrix lle_reconstruction_weights(const ResponseMatrix& matrix, int n_neighbors);

// Parses "pca,isomap(10),mean" into specs; throws a validation error on
// unknown method names or malformed neighbor counts.
std::vector<AggregatorSpec> parse_aggregator_list(const std::string& csv);

} // namespace cw
