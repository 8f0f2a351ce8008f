#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cw/aggregate.hpp"
#include "cw/matrix.hpp"
#include "cw/types.hpp"

namespace cw {

// Train fractions exercised by the cross-validation protocol.
extern const std::vector<double> kDefaultTrainFractions;

struct SplitSpec {
    double train_fraction = 0.25;
    int repeats = 200;
    std::uint64_t seed = 0;
};

// Stratified shuffle split with largest-remainder per-class rounding.
// Requires both classes in the training set and strictly more training
// questions than individuals; throws a validation error otherwise.
// Deterministic given (spec.seed, repeat_index).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_shuffle_split(
    const GroundTruth& truth, const SplitSpec& spec, int repeat_index, std::size_t individuals);

enum class Classifier { ols, logistic, lda, knn };

const char* classifier_name(Classifier c);
std::optional<Classifier> classifier_from_string(const std::string& name);

struct ClassifierSpec {
    Classifier classifier = Classifier::logistic;
    int knn_neighbors = 10;

    std::string tag() const;
};

// Parses "ols,logistic,lda,knn(10)".
std::vector<ClassifierSpec> parse_classifier_list(const std::string& csv);

// Trains on (train rows = questions, columns = individual features) and
// returns one real score per test row.
std::vector<double> fit_predict(const ClassifierSpec& spec, const Matrix& train,
                                const std::vector<int>& train_labels, const Matrix& test);

struct CvRow {
    int repeat = 0;
    std::string method;
    bool supervised = false;
    double auroc = 0.0;
    double aupr = 0.0;
};

struct CvSummary {
    std::string method;
    bool supervised = false;
    double median_auroc = 0.0;
    double median_aupr = 0.0;
    int repeats_used = 0;
};

struct CvResult {
    std::vector<CvRow> rows;
    std::vector<CvSummary> summaries;
    int skipped = 0; // infeasible repeats
};

// Compares truth-ignorant crowd wisdom (aggregated over all questions, then
// restricted to the test set) against classifiers fit on the training set.
// Both sides are evaluated two-sided on the test subset.
CvResult cv_compare(const ResponseMatrix& raw, const GroundTruth& truth,
                    const std::vector<AggregatorSpec>& crowd_methods,
                    const std::vector<ClassifierSpec>& classifiers, const SplitSpec& spec);

} // namespace cw
