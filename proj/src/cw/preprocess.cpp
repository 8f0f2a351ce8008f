#include "cw/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cw/error.hpp"
#include "cw/rng.hpp"

namespace cw {

std::vector<double> tie_averaged_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // Positions i..j share the mean of ranks i+1..j+1.
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t s = i; s <= j; ++s) ranks[order[s]] = avg;
        i = j + 1;
    }
    return ranks;
}

ResponseMatrix rank_transform(const ResponseMatrix& matrix) {
    if (matrix.kind != Kind::continuous)
        throw_validation("rank_transform: input must be continuous");

    ResponseMatrix out = matrix;
    for (std::size_t j = 0; j < matrix.individuals(); ++j) {
        const auto ranks = tie_averaged_ranks(matrix.values.row(j));
        auto row = out.values.row(j);
        std::copy(ranks.begin(), ranks.end(), row.begin());
    }
    return out;
}

ResponseMatrix standardize(const ResponseMatrix& matrix, std::vector<std::string>* warnings) {
    ResponseMatrix out = matrix;
    out.kind = Kind::continuous;
    const std::size_t n = matrix.questions();

    for (std::size_t j = 0; j < matrix.individuals(); ++j) {
        auto row = out.values.row(j);
        const double lo = *std::min_element(row.begin(), row.end());
        const double hi = *std::max_element(row.begin(), row.end());
        if (lo == hi) {
            std::fill(row.begin(), row.end(), 0.0);
            if (warnings != nullptr)
                warnings->push_back("individual '" + matrix.individual_ids[j] +
                                    "' is constant; standardized to all zeros");
            continue;
        }
        double mean = 0.0;
        for (double v : row) mean += v;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double v : row) var += (v - mean) * (v - mean);
        var /= static_cast<double>(n); // population variance
        const double sd = std::sqrt(var);
        for (double& v : row) v = (v - mean) / sd;
    }
    return out;
}

ResponseMatrix perfect_binarize(const ResponseMatrix& matrix, const GroundTruth& truth,
                                std::uint64_t seed) {
    const std::size_t n = matrix.questions();
    if (truth.labels.size() != n)
        throw_validation("perfect_binarize: truth length does not match question count");
    const std::size_t m = truth.positives();
    if (m == 0 || m == n)
        throw_validation("perfect_binarize: degenerate truth with " + std::to_string(m) +
                         " positives out of " + std::to_string(n));

    ResponseMatrix out = matrix;
    out.kind = Kind::binary;
    for (std::size_t j = 0; j < matrix.individuals(); ++j) {
        const auto values = matrix.values.row(j);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return values[a] > values[b];
        });

        // Everything strictly above the boundary value is a yes; the remaining
        // slots are drawn uniformly from the boundary ties.
        const double boundary = values[order[m - 1]];
        std::vector<std::size_t> sure, tied;
        for (std::size_t i = 0; i < n; ++i) {
            if (values[i] > boundary) sure.push_back(i);
            else if (values[i] == boundary) tied.push_back(i);
        }
        std::size_t remaining = m - sure.size();
        if (remaining < tied.size()) {
            RandomStream row_rng(derive_seed(seed, j));
            row_rng.shuffle(tied);
            tied.resize(remaining);
        }

        auto row = out.values.row(j);
        std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t i : sure) row[i] = 1.0;
        for (std::size_t i : tied) row[i] = 1.0;
    }
    return out;
}

ResponseMatrix apply_normalization(const ResponseMatrix& matrix, const NormalizationSpec& spec,
                                   std::vector<std::string>* warnings) {
    if (spec.rank_convert && matrix.kind != Kind::continuous)
        throw_validation("normalization: rank conversion is only valid for continuous matrices");
    ResponseMatrix out = spec.rank_convert ? rank_transform(matrix) : matrix;
    if (spec.center_scale) out = standardize(out, warnings);
    return out;
}

ResponseMatrix normalize_for_aggregation(const ResponseMatrix& matrix,
                                         std::vector<std::string>* warnings) {
    NormalizationSpec spec;
    spec.rank_convert = matrix.kind == Kind::continuous;
    return apply_normalization(matrix, spec, warnings);
}

} // namespace cw
