#pragma once

#include <span>
#include <string>
#include <vector>

#include "cw/types.hpp"

namespace cw {

// ROC curve with one vertex per distinct score value plus the (0,0) origin.
// `thresholds` has one entry per distinct score (fpr.size() - 1 entries),
// aligned with the vertex reached when all scores >= that value are positive.
// `auroc` is the trapezoid area, evaluated exactly from integer pair counts
// so it coincides with the tie-corrected Mann-Whitney statistic.
struct RocCurve {
    std::vector<double> fpr;
    std::vector<double> tpr;
    std::vector<double> thresholds;
    double auroc = 0.0;
};

// Precision-recall curve over descending distinct thresholds. `aupr` is the
// average-precision step sum.
struct PrCurve {
    std::vector<double> recall;
    std::vector<double> precision;
    std::vector<double> thresholds;
    double aupr = 0.0;
};

struct MetricReport {
    double auroc = 0.0;
    double aupr = 0.0;
    Orientation auroc_orientation = Orientation::as_computed;
    Orientation aupr_orientation = Orientation::as_computed;
    std::string method_tag;
};

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);
PrCurve pr_curve(std::span<const double> scores, std::span<const int> labels);

// Computes AUROC/AUPR on the scores and on their negation and keeps, per
// metric, the orientation with the larger area (ties keep as_computed).
MetricReport evaluate_two_sided(const ScoreVector& scores, const GroundTruth& truth);

// |Spearman rank correlation| with tie-averaged ranks.
double spearman_abs(std::span<const double> a, std::span<const double> b);

// TPR of the curve linearly interpolated at the given FPR (upper envelope at
// vertical steps).
double tpr_at_fpr(const RocCurve& curve, double fpr);

// Interpolated curve TPR at other_fpr minus other_tpr.
double tpr_difference_at_fpr(const RocCurve& curve, double other_fpr, double other_tpr);

// Fraction of questions on which thresholded scores disagree with a binary
// crowd wisdom, after orienting the scores so their AUROC against the binary
// output (as pseudo-labels) is >= 0.5. `excluded` is set when the binary
// output is single-valued, in which case `value` is meaningless.
struct PropDiffResult {
    bool excluded = false;
    double value = 0.0;
};

PropDiffResult proportion_of_differences(const std::vector<int>& binary_cw,
                                         const ScoreVector& scores);

} // namespace cw
