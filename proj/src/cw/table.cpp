#include "cw/table.hpp"

#include "cw/io.hpp"

namespace cw {

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }

} // namespace

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c];
        out += "\n";
    }
    return out;
}

void write_table_csv(const Table& table, const std::string& path) {
    atomic_write_file(path, table.to_csv());
}

Table to_table(const std::vector<ReplicateRow>& rows) {
    Table t;
    t.columns = {"replicate", "method", "auroc", "aupr", "spearman_probs", "excluded", "note"};
    for (const auto& r : rows)
        t.rows.push_back({fmt(r.replicate), r.method, fmt(r.auroc), fmt(r.aupr),
                          fmt(r.spearman_probs), fmt(r.excluded), r.note});
    return t;
}

Table to_table(const std::vector<BinarizationRow>& rows) {
    Table t;
    t.columns = {"replicate", "pca_auroc", "pca_aupr", "sml_auroc", "sml_fpr",
                 "sml_tpr",   "tpr_diff",  "prop_diff", "excluded",  "note"};
    for (const auto& r : rows)
        t.rows.push_back({fmt(r.replicate), fmt(r.pca_auroc), fmt(r.pca_aupr), fmt(r.sml_auroc),
                          fmt(r.sml_fpr), fmt(r.sml_tpr), fmt(r.tpr_diff), fmt(r.prop_diff),
                          fmt(r.excluded), r.note});
    return t;
}

Table to_table(const BinarizationSummary& summary) {
    Table t;
    t.columns = {"statistic", "value"};
    t.rows = {
        {"mean_tpr_diff", fmt(summary.mean_tpr_diff)},
        {"sd_tpr_diff", fmt(summary.sd_tpr_diff)},
        {"t_statistic", fmt(summary.t_statistic)},
        {"p_one_sided", fmt(summary.p_one_sided)},
        {"median_prop_diff", fmt(summary.median_prop_diff)},
        {"replicates_used", fmt(summary.used)},
        {"replicates_excluded", fmt(summary.excluded)},
    };
    return t;
}

Table to_table(const std::vector<ConvergenceRow>& rows) {
    Table t;
    t.columns = {"k",          "replicate", "method",      "spearman_probs",
                 "auroc",      "auroc_probs", "auroc_delta", "excluded",
                 "note"};
    for (const auto& r : rows)
        t.rows.push_back({fmt(r.k), fmt(r.replicate), r.method, fmt(r.spearman_probs),
                          fmt(r.auroc), fmt(r.auroc_probs), fmt(r.auroc_delta), fmt(r.excluded),
                          r.note});
    return t;
}

Table to_table(const std::vector<CvRow>& rows) {
    Table t;
    t.columns = {"repeat", "method", "kind", "auroc", "aupr"};
    for (const auto& r : rows)
        t.rows.push_back({fmt(r.repeat), r.method, r.supervised ? "supervised" : "crowd",
                          fmt(r.auroc), fmt(r.aupr)});
    return t;
}

Table to_table(const std::vector<CvSummary>& summaries, int skipped) {
    Table t;
    t.columns = {"method", "kind", "median_auroc", "median_aupr", "repeats_used",
                 "repeats_skipped"};
    for (const auto& s : summaries)
        t.rows.push_back({s.method, s.supervised ? "supervised" : "crowd", fmt(s.median_auroc),
                          fmt(s.median_aupr), fmt(s.repeats_used), fmt(skipped)});
    return t;
}

} // namespace cw
