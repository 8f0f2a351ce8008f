#include "cw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "cw/aggregate.hpp"
#include "cw/error.hpp"
#include "cw/preprocess.hpp"

namespace cw {

namespace {

struct TieGroups {
    // Per distinct score value, descending: (value, positives, negatives).
    std::vector<double> values;
    std::vector<std::int64_t> tp;
    std::vector<std::int64_t> fp;
    std::int64_t total_pos = 0;
    std::int64_t total_neg = 0;
};

TieGroups tie_groups(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw_validation("metrics: scores and labels have different lengths");
    if (scores.empty()) throw_validation("metrics: empty input");
    for (double s : scores)
        if (!std::isfinite(s)) throw_validation("metrics: non-finite score");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    TieGroups g;
    std::size_t i = 0;
    while (i < order.size()) {
        const double value = scores[order[i]];
        std::int64_t tp = 0, fp = 0;
        std::size_t j = i;
        for (; j < order.size() && scores[order[j]] == value; ++j) {
            if (labels[order[j]] == 1) ++tp;
            else if (labels[order[j]] == 0) ++fp;
            else throw_validation("metrics: labels must be 0/1");
        }
        g.values.push_back(value);
        g.tp.push_back(tp);
        g.fp.push_back(fp);
        g.total_pos += tp;
        g.total_neg += fp;
        i = j;
    }
    return g;
}

} // namespace

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
    const TieGroups g = tie_groups(scores, labels);
    if (g.total_pos == 0 || g.total_neg == 0)
        throw_validation("roc_curve: truth must contain both classes");

    RocCurve curve;
    curve.fpr.reserve(g.values.size() + 1);
    curve.tpr.reserve(g.values.size() + 1);
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);

    // Trapezoid area accumulated in exact integer arithmetic:
    // sum over groups of fp_g * (2*TP_before + tp_g), divided by 2*P*N.
    std::int64_t tp_cum = 0, fp_cum = 0;
    std::int64_t twice_area = 0;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        twice_area += g.fp[i] * (2 * tp_cum + g.tp[i]);
        tp_cum += g.tp[i];
        fp_cum += g.fp[i];
        curve.fpr.push_back(static_cast<double>(fp_cum) / static_cast<double>(g.total_neg));
        curve.tpr.push_back(static_cast<double>(tp_cum) / static_cast<double>(g.total_pos));
        curve.thresholds.push_back(g.values[i]);
    }
    curve.auroc = static_cast<double>(twice_area) /
                  (2.0 * static_cast<double>(g.total_pos) * static_cast<double>(g.total_neg));
    return curve;
}

PrCurve pr_curve(std::span<const double> scores, std::span<const int> labels) {
    const TieGroups g = tie_groups(scores, labels);
    if (g.total_pos == 0) throw_validation("pr_curve: truth must contain at least one positive");

    PrCurve curve;
    std::int64_t tp_cum = 0, fp_cum = 0;
    double area = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        tp_cum += g.tp[i];
        fp_cum += g.fp[i];
        const double recall = static_cast<double>(tp_cum) / static_cast<double>(g.total_pos);
        const double precision =
            static_cast<double>(tp_cum) / static_cast<double>(tp_cum + fp_cum);
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
        curve.recall.push_back(recall);
        curve.precision.push_back(precision);
        curve.thresholds.push_back(g.values[i]);
    }
    curve.aupr = area;
    return curve;
}

MetricReport evaluate_two_sided(const ScoreVector& scores, const GroundTruth& truth) {
    std::vector<double> negated(scores.scores.size());
    for (std::size_t i = 0; i < negated.size(); ++i) negated[i] = -scores.scores[i];

    const RocCurve roc_plus = roc_curve(scores.scores, truth.labels);
    const RocCurve roc_minus = roc_curve(negated, truth.labels);
    const PrCurve pr_plus = pr_curve(scores.scores, truth.labels);
    const PrCurve pr_minus = pr_curve(negated, truth.labels);

    MetricReport report;
    report.method_tag = scores.method_tag;
    if (roc_minus.auroc > roc_plus.auroc) {
        report.auroc = roc_minus.auroc;
        report.auroc_orientation = Orientation::flipped;
    } else {
        report.auroc = roc_plus.auroc;
        report.auroc_orientation = Orientation::as_computed;
    }
    if (pr_minus.aupr > pr_plus.aupr) {
        report.aupr = pr_minus.aupr;
        report.aupr_orientation = Orientation::flipped;
    } else {
        report.aupr = pr_plus.aupr;
        report.aupr_orientation = Orientation::as_computed;
    }
    return report;
}

double spearman_abs(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw_validation("spearman_abs: length mismatch");
    if (a.size() < 2) throw_validation("spearman_abs: need at least two observations");

    const auto ra = tie_averaged_ranks(a);
    const auto rb = tie_averaged_ranks(b);
    const double n = static_cast<double>(a.size());
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += ra[i];
        mean_b += rb[i];
    }
    mean_a /= n;
    mean_b /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = ra[i] - mean_a;
        const double db = rb[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        throw_validation("spearman_abs: correlation undefined for constant input");
    return std::fabs(sab / std::sqrt(saa * sbb));
}

double tpr_at_fpr(const RocCurve& curve, double fpr) {
    if (!(fpr >= 0.0 && fpr <= 1.0)) throw_validation("tpr_at_fpr: fpr outside [0,1]");
    // Exact vertex hit: take the upper envelope of any vertical step there.
    double exact = -1.0;
    for (std::size_t i = 0; i < curve.fpr.size(); ++i)
        if (curve.fpr[i] == fpr) exact = std::max(exact, curve.tpr[i]);
    if (exact >= 0.0) return exact;

    for (std::size_t i = 1; i < curve.fpr.size(); ++i) {
        if (curve.fpr[i] > fpr) {
            const double x0 = curve.fpr[i - 1], x1 = curve.fpr[i];
            const double y0 = curve.tpr[i - 1], y1 = curve.tpr[i];
            return y0 + (y1 - y0) * (fpr - x0) / (x1 - x0);
        }
    }
    return curve.tpr.back();
}

double tpr_difference_at_fpr(const RocCurve& curve, double other_fpr, double other_tpr) {
    return tpr_at_fpr(curve, other_fpr) - other_tpr;
}

PropDiffResult proportion_of_differences(const std::vector<int>& binary_cw,
                                         const ScoreVector& scores) {
    if (binary_cw.size() != scores.scores.size())
        throw_validation("proportion_of_differences: length mismatch");

    PropDiffResult result;
    const std::size_t ones = static_cast<std::size_t>(
        std::count(binary_cw.begin(), binary_cw.end(), 1));
    if (ones == 0 || ones == binary_cw.size()) {
        result.excluded = true;
        return result;
    }

    // Orient the scores against the binary crowd wisdom used as pseudo-labels.
    ScoreVector oriented = scores;
    if (roc_curve(scores.scores, binary_cw).auroc < 0.5) {
        for (double& s : oriented.scores) s = -s;
        oriented.orientation = scores.orientation == Orientation::flipped
                                   ? Orientation::as_computed
                                   : Orientation::flipped;
    }

    const std::vector<int> thresholded = threshold_scores(oriented, ones);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < binary_cw.size(); ++i)
        if (thresholded[i] != binary_cw[i]) ++diff;
    result.value = static_cast<double>(diff) / static_cast<double>(binary_cw.size());
    return result;
}

} // namespace cw
