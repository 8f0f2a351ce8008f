#include "cw/types.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace cw {

namespace {

std::string seq_id(const char* prefix, std::size_t index, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, index + 1);
    return buf;
}

} // namespace

std::vector<std::string> default_individual_ids(std::size_t k) {
    std::vector<std::string> ids(k);
    for (std::size_t j = 0; j < k; ++j) ids[j] = seq_id("ind_", j, 2);
    return ids;
}

std::vector<std::string> default_question_ids(std::size_t n) {
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = seq_id("q_", i, 4);
    return ids;
}

ResponseMatrix make_response_matrix(Matrix values, Kind kind) {
    ResponseMatrix m;
    m.individual_ids = default_individual_ids(values.rows());
    m.question_ids = default_question_ids(values.cols());
    m.values = std::move(values);
    m.kind = kind;
    return m;
}

std::size_t GroundTruth::positives() const {
    std::size_t count = 0;
    for (int v : labels)
        if (v == 1) ++count;
    return count;
}

const char* orientation_name(Orientation o) {
    return o == Orientation::flipped ? "flipped" : "as_computed";
}

namespace {

void check_unique(const std::vector<std::string>& ids, const char* axis,
                  std::vector<std::string>& report) {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!seen.insert(ids[i]).second)
            report.push_back(std::string("duplicate ") + axis + " id '" + ids[i] +
                             "' at index " + std::to_string(i));
    }
}

} // namespace

std::vector<std::string> validate_dataset(const ResponseMatrix& matrix,
                                          const GroundTruth* truth,
                                          const ClassProbabilities* probs) {
    std::vector<std::string> report;
    const std::size_t k = matrix.individuals();
    const std::size_t n = matrix.questions();

    if (k < 2) report.push_back("matrix has " + std::to_string(k) + " individuals; need at least 2");
    if (n < 3) report.push_back("matrix has " + std::to_string(n) + " questions; need at least 3");
    if (matrix.individual_ids.size() != k)
        report.push_back("individual_ids length " + std::to_string(matrix.individual_ids.size()) +
                         " does not match row count " + std::to_string(k));
    if (matrix.question_ids.size() != n)
        report.push_back("question_ids length " + std::to_string(matrix.question_ids.size()) +
                         " does not match column count " + std::to_string(n));
    check_unique(matrix.individual_ids, "individual", report);
    check_unique(matrix.question_ids, "question", report);

    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = matrix.values(j, i);
            if (!std::isfinite(v)) {
                report.push_back("non-finite value at (row " + std::to_string(j) + ", column " +
                                 std::to_string(i) + ")");
            } else if (matrix.kind == Kind::binary && v != 0.0 && v != 1.0) {
                report.push_back("binary matrix has non-0/1 value at (row " + std::to_string(j) +
                                 ", column " + std::to_string(i) + ")");
            }
        }
    }

    if (truth != nullptr) {
        if (truth->labels.size() != n)
            report.push_back("truth length " + std::to_string(truth->labels.size()) +
                             " does not match question count " + std::to_string(n));
        bool has0 = false, has1 = false;
        for (std::size_t i = 0; i < truth->labels.size(); ++i) {
            const int v = truth->labels[i];
            if (v == 0) has0 = true;
            else if (v == 1) has1 = true;
            else report.push_back("truth label at index " + std::to_string(i) + " is not 0/1");
        }
        if (!truth->labels.empty() && (!has0 || !has1))
            report.push_back("single-class labels: truth must contain both classes");
    }

    if (probs != nullptr) {
        if (probs->probs.size() != n)
            report.push_back("probs length " + std::to_string(probs->probs.size()) +
                             " does not match question count " + std::to_string(n));
        for (std::size_t i = 0; i < probs->probs.size(); ++i) {
            const double p = probs->probs[i];
            if (!(p >= 0.0 && p <= 1.0))
                report.push_back("class probability at index " + std::to_string(i) +
                                 " outside [0,1]");
        }
    }

    return report;
}

} // namespace cw
