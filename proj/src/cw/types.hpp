#pragma once

#include <string>
#include <vector>

#include "cw/matrix.hpp"

namespace cw {

enum class Kind { continuous, binary };

// Responses from k individuals (rows) to n questions (columns).
struct ResponseMatrix {
    Matrix values; // k x n
    std::vector<std::string> individual_ids;
    std::vector<std::string> question_ids;
    Kind kind = Kind::continuous;

    std::size_t individuals() const { return values.rows(); }
    std::size_t questions() const { return values.cols(); }
};

// Builds a ResponseMatrix with generated ids ("ind_01".., "q_0001"..).
ResponseMatrix make_response_matrix(Matrix values, Kind kind);

std::vector<std::string> default_individual_ids(std::size_t k);
std::vector<std::string> default_question_ids(std::size_t n);

// Per-question binary true class, aligned to question_ids.
struct GroundTruth {
    std::vector<int> labels;

    std::size_t positives() const;
};

// Per-question latent P(Yes | data) in [0,1].
struct ClassProbabilities {
    std::vector<double> probs;
};

enum class Orientation { as_computed, flipped };

const char* orientation_name(Orientation o);

// One consensus score per question plus how it was oriented.
struct ScoreVector {
    std::vector<double> scores;
    Orientation orientation = Orientation::as_computed;
    std::string method_tag;
};

// Structural validation. Returns one message per violated invariant with the
// offending axis/index; empty means the dataset is accepted by every
// downstream operation. Pure: never mutates and never throws.
std::vector<std::string> validate_dataset(const ResponseMatrix& matrix,
                                          const GroundTruth* truth = nullptr,
                                          const ClassProbabilities* probs = nullptr);

} // namespace cw
