#include "cw/supervised.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cw/error.hpp"
#include "cw/metrics.hpp"
#include "cw/numerics.hpp"
#include "cw/parallel.hpp"
#include "cw/preprocess.hpp"
#include "cw/rng.hpp"

namespace cw {

const std::vector<double> kDefaultTrainFractions = {0.10, 0.20, 0.25, 0.40, 0.60, 0.80, 0.90};

const char* classifier_name(Classifier c) {
    switch (c) {
        case Classifier::ols: return "ols";
        case Classifier::logistic: return "logistic";
        case Classifier::lda: return "lda";
        case Classifier::knn: return "knn";
    }
    return "unknown";
}

std::optional<Classifier> classifier_from_string(const std::string& name) {
    if (name == "ols" || name == "linear") return Classifier::ols;
    if (name == "logistic") return Classifier::logistic;
    if (name == "lda") return Classifier::lda;
    if (name == "knn") return Classifier::knn;
    return std::nullopt;
}

std::string ClassifierSpec::tag() const {
    if (classifier == Classifier::knn) return "knn(" + std::to_string(knn_neighbors) + ")";
    return classifier_name(classifier);
}

std::vector<ClassifierSpec> parse_classifier_list(const std::string& csv) {
    std::vector<ClassifierSpec> specs;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t end = csv.find(',', start);
        if (end == std::string::npos) end = csv.size();
        std::string token = csv.substr(start, end - start);
        start = end + 1;
        while (!token.empty() && token.front() == ' ') token.erase(token.begin());
        while (!token.empty() && token.back() == ' ') token.pop_back();
        if (token.empty()) continue;

        ClassifierSpec spec;
        const std::size_t paren = token.find('(');
        std::string name = token;
        if (paren != std::string::npos) {
            if (token.back() != ')') throw_validation("classifier '" + token + "' is malformed");
            name = token.substr(0, paren);
            try {
                spec.knn_neighbors = std::stoi(token.substr(paren + 1, token.size() - paren - 2));
            } catch (...) {
                throw_validation("classifier '" + token + "' has a malformed neighbor count");
            }
        }
        const auto classifier = classifier_from_string(name);
        if (!classifier.has_value()) throw_validation("unknown classifier '" + name + "'");
        spec.classifier = *classifier;
        specs.push_back(spec);
    }
    if (specs.empty()) throw_validation("empty classifier list");
    return specs;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_shuffle_split(
    const GroundTruth& truth, const SplitSpec& spec, int repeat_index, std::size_t individuals) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw_validation("split: train_fraction must lie in (0,1)");

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < truth.labels.size(); ++i)
        (truth.labels[i] == 1 ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
        throw_validation("split: truth must contain both classes");

    // Largest-remainder rounding of the per-class train quotas; the overall
    // train size is round(fraction * n) and remainder ties favour the
    // positive class.
    const std::size_t n = truth.labels.size();
    const std::size_t total =
        static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
    const double quota_pos = spec.train_fraction * static_cast<double>(pos.size());
    const double quota_neg = spec.train_fraction * static_cast<double>(neg.size());
    std::size_t take_pos = static_cast<std::size_t>(std::floor(quota_pos));
    std::size_t take_neg = static_cast<std::size_t>(std::floor(quota_neg));
    while (take_pos + take_neg < total) {
        const double rem_pos = quota_pos - std::floor(quota_pos);
        const double rem_neg = quota_neg - std::floor(quota_neg);
        const bool pos_first = rem_pos >= rem_neg;
        if (pos_first && take_pos < pos.size()) ++take_pos;
        else if (take_neg < neg.size()) ++take_neg;
        else if (take_pos < pos.size()) ++take_pos;
        else break;
    }

    if (take_pos < 1 || take_neg < 1)
        throw_validation("split: training set would miss a class at fraction " +
                         std::to_string(spec.train_fraction));
    if (take_pos >= pos.size() || take_neg >= neg.size())
        throw_validation("split: test set would miss a class at fraction " +
                         std::to_string(spec.train_fraction));
    if (take_pos + take_neg <= individuals)
        throw_validation("split: training set (" + std::to_string(take_pos + take_neg) +
                         " questions) must exceed the individual count (" +
                         std::to_string(individuals) + ")");

    RandomStream rng(derive_seed(spec.seed, static_cast<std::uint64_t>(repeat_index)));
    rng.shuffle(pos);
    rng.shuffle(neg);

    std::vector<std::size_t> train, test;
    train.insert(train.end(), pos.begin(), pos.begin() + take_pos);
    train.insert(train.end(), neg.begin(), neg.begin() + take_neg);
    test.insert(test.end(), pos.begin() + take_pos, pos.end());
    test.insert(test.end(), neg.begin() + take_neg, neg.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {train, test};
}

namespace {

Matrix with_intercept(const Matrix& x) {
    Matrix out(x.rows(), x.cols() + 1);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out(i, 0) = 1.0;
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j + 1) = x(i, j);
    }
    return out;
}

std::vector<double> linear_predict(const Matrix& x, const std::vector<double>& beta) {
    std::vector<double> out(x.rows(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) out[i] += x(i, j) * beta[j];
    return out;
}

std::vector<double> fit_ols(const Matrix& train, const std::vector<int>& labels,
                            const Matrix& test) {
    const Matrix x = with_intercept(train);
    const std::size_t d = x.cols();
    Matrix normal(d, d);
    std::vector<double> rhs(d, 0.0);
    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            double v = 0.0;
            for (std::size_t i = 0; i < x.rows(); ++i) v += x(i, a) * x(i, b);
            normal(a, b) = normal(b, a) = v;
        }
        trace += normal(a, a);
        for (std::size_t i = 0; i < x.rows(); ++i) rhs[a] += x(i, a) * labels[i];
    }
    const double jitter = 1e-10 * trace / static_cast<double>(d);
    for (std::size_t a = 0; a < d; ++a) normal(a, a) += jitter;
    std::vector<double> beta;
    try {
        beta = solve_spd(normal, rhs);
    } catch (const Error&) {
        throw_numeric("ols: normal equations are singular");
    }
    return linear_predict(with_intercept(test), beta);
}

std::vector<double> fit_logistic(const Matrix& train, const std::vector<int>& labels,
                                 const Matrix& test) {
    const Matrix x = with_intercept(train);
    const std::size_t d = x.cols();
    std::vector<double> beta(d, 0.0);

    // IRLS / Newton with a fixed ridge jitter on the Hessian; the iteration
    // cap keeps separable problems finite.
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<double> eta = linear_predict(x, beta);
        Matrix hess(d, d);
        std::vector<double> grad(d, 0.0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double p = 1.0 / (1.0 + std::exp(-eta[i]));
            const double w = std::max(p * (1.0 - p), 1e-12);
            const double resid = static_cast<double>(labels[i]) - p;
            for (std::size_t a = 0; a < d; ++a) {
                grad[a] += x(i, a) * resid;
                for (std::size_t b = a; b < d; ++b) hess(a, b) += w * x(i, a) * x(i, b);
            }
        }
        for (std::size_t a = 0; a < d; ++a) {
            hess(a, a) += 1e-8;
            for (std::size_t b = a + 1; b < d; ++b) hess(b, a) = hess(a, b);
        }
        std::vector<double> step;
        try {
            step = solve_spd(hess, grad);
        } catch (const Error&) {
            throw_numeric("logistic: Hessian is singular despite jitter");
        }
        double largest = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            beta[a] += step[a];
            largest = std::max(largest, std::fabs(step[a]));
        }
        if (largest < 1e-8) break;
    }
    return linear_predict(with_intercept(test), beta);
}

std::vector<double> fit_lda(const Matrix& train, const std::vector<int>& labels,
                            const Matrix& test) {
    const std::size_t d = train.cols();
    std::vector<double> mu0(d, 0.0), mu1(d, 0.0);
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < train.rows(); ++i) {
        auto& mu = labels[i] == 1 ? mu1 : mu0;
        (labels[i] == 1 ? n1 : n0) += 1;
        for (std::size_t j = 0; j < d; ++j) mu[j] += train(i, j);
    }
    if (n0 == 0 || n1 == 0) throw_validation("lda: training labels are single-class");
    for (std::size_t j = 0; j < d; ++j) {
        mu0[j] /= static_cast<double>(n0);
        mu1[j] /= static_cast<double>(n1);
    }

    Matrix pooled(d, d);
    for (std::size_t i = 0; i < train.rows(); ++i) {
        const auto& mu = labels[i] == 1 ? mu1 : mu0;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b)
                pooled(a, b) += (train(i, a) - mu[a]) * (train(i, b) - mu[b]);
    }
    double trace = 0.0;
    const double denom = static_cast<double>(train.rows() - 2);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            pooled(a, b) /= denom;
            pooled(b, a) = pooled(a, b);
        }
        trace += pooled(a, a);
    }
    const double ridge = 1e-6 * trace / static_cast<double>(d);
    for (std::size_t a = 0; a < d; ++a) pooled(a, a) += ridge;

    std::vector<double> delta(d);
    for (std::size_t j = 0; j < d; ++j) delta[j] = mu1[j] - mu0[j];
    std::vector<double> w;
    try {
        w = solve_spd(pooled, delta);
    } catch (const Error&) {
        throw_numeric("lda: pooled covariance is singular despite ridge");
    }
    return linear_predict(test, w);
}

std::vector<double> fit_knn(const Matrix& train, const std::vector<int>& labels,
                            const Matrix& test, int neighbors) {
    if (neighbors < 1) throw_validation("knn: neighbor count must be positive");
    if (static_cast<std::size_t>(neighbors) > train.rows())
        throw_validation("knn: neighbor count exceeds training size");
    std::vector<double> out(test.rows());
    std::vector<std::pair<double, std::size_t>> dist(train.rows());
    for (std::size_t i = 0; i < test.rows(); ++i) {
        for (std::size_t t = 0; t < train.rows(); ++t) {
            double s = 0.0;
            for (std::size_t j = 0; j < train.cols(); ++j) {
                const double diff = test(i, j) - train(t, j);
                s += diff * diff;
            }
            dist[t] = {s, t}; // index breaks distance ties
        }
        std::sort(dist.begin(), dist.end());
        int positives = 0;
        for (int t = 0; t < neighbors; ++t)
            positives += labels[dist[static_cast<std::size_t>(t)].second];
        out[i] = static_cast<double>(positives) / static_cast<double>(neighbors);
    }
    return out;
}

} // namespace

std::vector<double> fit_predict(const ClassifierSpec& spec, const Matrix& train,
                                const std::vector<int>& train_labels, const Matrix& test) {
    if (train.rows() != train_labels.size())
        throw_validation("fit_predict: labels do not match training rows");
    if (train.cols() != test.cols()) throw_validation("fit_predict: feature count mismatch");
    if (train.rows() <= train.cols())
        throw_validation("fit_predict: need more training questions than individuals");
    switch (spec.classifier) {
        case Classifier::ols: return fit_ols(train, train_labels, test);
        case Classifier::logistic: return fit_logistic(train, train_labels, test);
        case Classifier::lda: return fit_lda(train, train_labels, test);
        case Classifier::knn: return fit_knn(train, train_labels, test, spec.knn_neighbors);
    }
    throw_validation("fit_predict: unknown classifier");
}

CvResult cv_compare(const ResponseMatrix& raw, const GroundTruth& truth,
                    const std::vector<AggregatorSpec>& crowd_methods,
                    const std::vector<ClassifierSpec>& classifiers, const SplitSpec& spec) {
    if (spec.repeats < 1) throw_validation("cv_compare: need at least one repeat");
    const auto violations = validate_dataset(raw, &truth);
    if (!violations.empty()) throw_validation("cv_compare: " + violations.front());

    // Crowd wisdom ignores the split: aggregate once over all questions.
    const ResponseMatrix normalized = normalize_for_aggregation(raw);
    std::vector<std::pair<std::string, std::vector<double>>> crowd_scores;
    for (const AggregatorSpec& m : crowd_methods) {
        const ScoreVector sv =
            m.method == Method::sml ? aggregate(raw, m) : aggregate(normalized, m);
        crowd_scores.emplace_back(sv.method_tag, sv.scores);
    }

    // Question-by-individual feature view for the classifiers.
    const Matrix features = normalized.values.transposed();

    struct RepeatOutcome {
        std::vector<CvRow> rows;
        bool skipped = false;
    };
    std::vector<RepeatOutcome> outcomes(static_cast<std::size_t>(spec.repeats));

    parallel_for(static_cast<std::size_t>(spec.repeats), [&](std::size_t r) {
        RepeatOutcome& outcome = outcomes[r];
        std::vector<std::size_t> train_idx, test_idx;
        try {
            std::tie(train_idx, test_idx) =
                stratified_shuffle_split(truth, spec, static_cast<int>(r), raw.individuals());
        } catch (const Error&) {
            outcome.skipped = true;
            return;
        }

        GroundTruth test_truth;
        for (std::size_t i : test_idx) test_truth.labels.push_back(truth.labels[i]);
        const bool test_has_both =
            std::count(test_truth.labels.begin(), test_truth.labels.end(), 1) > 0 &&
            std::count(test_truth.labels.begin(), test_truth.labels.end(), 0) > 0;
        if (!test_has_both) {
            outcome.skipped = true;
            return;
        }

        Matrix train(train_idx.size(), features.cols());
        Matrix test(test_idx.size(), features.cols());
        std::vector<int> train_labels;
        for (std::size_t a = 0; a < train_idx.size(); ++a) {
            for (std::size_t j = 0; j < features.cols(); ++j)
                train(a, j) = features(train_idx[a], j);
            train_labels.push_back(truth.labels[train_idx[a]]);
        }
        for (std::size_t a = 0; a < test_idx.size(); ++a)
            for (std::size_t j = 0; j < features.cols(); ++j)
                test(a, j) = features(test_idx[a], j);

        for (const auto& [tag, scores] : crowd_scores) {
            ScoreVector restricted;
            restricted.method_tag = tag;
            for (std::size_t i : test_idx) restricted.scores.push_back(scores[i]);
            const MetricReport report = evaluate_two_sided(restricted, test_truth);
            outcome.rows.push_back(
                {static_cast<int>(r), tag, false, report.auroc, report.aupr});
        }
        for (const ClassifierSpec& c : classifiers) {
            ScoreVector predicted;
            predicted.method_tag = c.tag();
            predicted.scores = fit_predict(c, train, train_labels, test);
            const MetricReport report = evaluate_two_sided(predicted, test_truth);
            outcome.rows.push_back(
                {static_cast<int>(r), c.tag(), true, report.auroc, report.aupr});
        }
    });

    CvResult result;
    for (auto& outcome : outcomes) {
        if (outcome.skipped) {
            ++result.skipped;
            continue;
        }
        for (auto& row : outcome.rows) result.rows.push_back(std::move(row));
    }

    // Per-method medians over the usable repeats.
    auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    std::vector<std::pair<std::string, bool>> order;
    for (const auto& [tag, scores] : crowd_scores) order.emplace_back(tag, false);
    for (const ClassifierSpec& c : classifiers) order.emplace_back(c.tag(), true);
    for (const auto& [tag, supervised] : order) {
        std::vector<double> aurocs, auprs;
        for (const CvRow& row : result.rows) {
            if (row.method == tag && row.supervised == supervised) {
                aurocs.push_back(row.auroc);
                auprs.push_back(row.aupr);
            }
        }
        if (aurocs.empty()) continue;
        result.summaries.push_back({tag, supervised, median_of(aurocs), median_of(auprs),
                                    static_cast<int>(aurocs.size())});
    }
    return result;
}

} // namespace cw
