#pragma once

#include <string>
#include <vector>

#include "cw/types.hpp"

namespace cw {

// Formats a double with 17 significant digits, enough to round-trip exactly.
std::string format_double(double v);

// Writes `content` to `path` atomically (temp file + rename).
void atomic_write_file(const std::string& path, const std::string& content);

// responses.csv: one `#kind=` comment line, a header `question_id,<individual
// ids...>`, then one row per question. The on-disk layout is the transpose of
// the in-memory individuals-by-questions orientation.
ResponseMatrix read_responses_csv(const std::string& path);
void write_responses_csv(const ResponseMatrix& matrix, const std::string& path);

// Two-column files keyed by an id column.
struct IdColumn {
    std::string id_header;
    std::string value_header;
    std::vector<std::string> ids;
    std::vector<double> values;
};

IdColumn read_id_column_csv(const std::string& path);
void write_id_column_csv(const IdColumn& column, const std::string& path);

// scores.csv: question_id, score, orientation.
void write_scores_csv(const std::vector<std::string>& question_ids, const ScoreVector& scores,
                      const std::string& path);

struct ScoresFile {
    std::vector<std::string> question_ids;
    ScoreVector scores;
};

ScoresFile read_scores_csv(const std::string& path);

// Reorders `column` values to follow `question_ids`; throws an alignment
// error listing offending ids on any mismatch.
std::vector<double> align_by_ids(const std::vector<std::string>& question_ids,
                                 const IdColumn& column, const std::string& what);

} // namespace cw
