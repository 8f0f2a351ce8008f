#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cw/types.hpp"

namespace cw {

// Tie-averaged ranks in 1..n (shared by rank_transform and Spearman).
std::vector<double> tie_averaged_ranks(std::span<const double> values);

// Which normalization steps to apply. rank_convert is only valid for
// continuous matrices; center_scale is always on in the full protocol.
struct NormalizationSpec {
    bool rank_convert = true;
    bool center_scale = true;
};

ResponseMatrix apply_normalization(const ResponseMatrix& matrix, const NormalizationSpec& spec,
                                   std::vector<std::string>* warnings = nullptr);

// Replaces each row by its within-row tie-averaged ranks. Continuous input only.
ResponseMatrix rank_transform(const ResponseMatrix& matrix);

// Shifts each row to zero mean and scales to unit (population) variance.
// Constant rows become all-zero and are reported in `warnings`.
ResponseMatrix standardize(const ResponseMatrix& matrix,
                           std::vector<std::string>* warnings = nullptr);

// Idealized binarization: each row gets exactly as many ones as the truth has
// positives, placed on the row's highest-scoring questions. Boundary ties are
// resolved by a uniform draw seeded per row from `seed`.
ResponseMatrix perfect_binarize(const ResponseMatrix& matrix, const GroundTruth& truth,
                                std::uint64_t seed);

// The full normalization protocol fed to aggregators: rank conversion for
// continuous matrices, then per-row standardization for all matrices.
ResponseMatrix normalize_for_aggregation(const ResponseMatrix& matrix,
                                         std::vector<std::string>* warnings = nullptr);

} // namespace cw
