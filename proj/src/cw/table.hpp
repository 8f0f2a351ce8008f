#pragma once

#include <string>
#include <vector>

#include "cw/simulate.hpp"
#include "cw/supervised.hpp"

namespace cw {

// Column-named table of already-formatted cells; the lingua franca between
// study runners, the C API, and CSV output.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

void write_table_csv(const Table& table, const std::string& path);

Table to_table(const std::vector<ReplicateRow>& rows);
Table to_table(const std::vector<BinarizationRow>& rows);
Table to_table(const BinarizationSummary& summary);
Table to_table(const std::vector<ConvergenceRow>& rows);
Table to_table(const std::vector<CvRow>& rows);
Table to_table(const std::vector<CvSummary>& summaries, int skipped);

} // namespace cw
