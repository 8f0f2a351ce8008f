#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cw/aggregate.hpp"
#include "cw/types.hpp"

namespace cw {

// Parameters of one generative experiment.
struct SimulationParams {
    int k = 10;               // individuals
    int n = 600;              // questions
    double p_yes = 0.3;       // target class frequency
    double beta = 1.0;        // Beta-distribution shape of class probabilities
    double alpha_bar = 1.0;   // mean individual skill
    double sigma_alpha = 0.5; // skill spread
    std::uint64_t seed = 0;
};

// Throws a validation error when parameters are out of contract.
void validate_params(const SimulationParams& params);

struct SimulatedDataset {
    ResponseMatrix matrix;     // normalized (rank then z-score)
    ResponseMatrix raw_matrix; // pre-normalization responses
    GroundTruth truth;
    ClassProbabilities probs;
    std::vector<double> alphas;
};

// Generative simulation: class probabilities from Beta(beta, beta), classes
// drawn with those probabilities under an exact positive-count quota,
// responses r_ji ~ N(alpha_j * P_i, 1) with alpha_j ~ N(alpha_bar,
// sigma_alpha^2), then the normalization protocol. Fully deterministic given
// the seed.
SimulatedDataset simulate_dataset(const SimulationParams& params);

// Test hook: per-question draw budget (default 1000) before the sampler gives
// up on filling the class quotas.
SimulatedDataset simulate_dataset(const SimulationParams& params, int draw_budget_per_question);

// Named default parameter sets.
const std::vector<std::pair<std::string, SimulationParams>>& simulation_presets();
std::optional<SimulationParams> simulation_preset(const std::string& name);

// Seed for replicate `index` of a study with master seed `seed`.
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index);

// ---------------------------------------------------------------------------
// Study runners
// ---------------------------------------------------------------------------

struct ReplicateRow {
    int replicate = 0;
    std::string method;
    double auroc = 0.0;
    double aupr = 0.0;
    double spearman_probs = 0.0;
    bool excluded = false;
    std::string note;
};

// Runs every method on independently simulated replicates. With binarize set,
// all methods consume the perfectly binarized responses (sml requires it);
// otherwise sml replicates are flagged excluded.
std::vector<ReplicateRow> replicate_study(const SimulationParams& params, int replicates,
                                          const std::vector<AggregatorSpec>& methods,
                                          bool binarize);

struct BinarizationRow {
    int replicate = 0;
    double pca_auroc = 0.0;
    double pca_aupr = 0.0;
    double sml_auroc = 0.0;
    double sml_fpr = 0.0;
    double sml_tpr = 0.0;
    double tpr_diff = 0.0;  // PCA TPR at SML's FPR minus SML's TPR
    double prop_diff = 0.0; // thresholded PCA-on-binarized vs SML predictions
    bool excluded = false;
    std::string note;
};

struct BinarizationSummary {
    double mean_tpr_diff = 0.0;
    double sd_tpr_diff = 0.0;
    double t_statistic = 0.0;
    double p_one_sided = 1.0; // H1: mean TPR difference > 0
    double median_prop_diff = 0.0;
    int used = 0;
    int excluded = 0;
};

struct BinarizationStudy {
    std::vector<BinarizationRow> rows;
    BinarizationSummary summary;
};

// Per-replicate PCA-vs-SML comparison on perfectly binarized data. With
// pca_on_binarized the ROC side of the comparison also feeds PCA the
// binarized matrix; the proportion-of-differences column always does.
BinarizationStudy binarization_study(const SimulationParams& params, int replicates,
                                     bool pca_on_binarized);

struct ConvergenceRow {
    int k = 0;
    int replicate = 0;
    std::string method;
    double spearman_probs = 0.0;
    double auroc = 0.0;
    double auroc_probs = 0.0;
    double auroc_delta = 0.0; // method minus class-probability AUROC
    bool excluded = false;
    std::string note;
};

// Sweeps the individual count and reports per-method recovery of the class
// probability.
std::vector<ConvergenceRow> convergence_study(const SimulationParams& params,
                                              const std::vector<int>& k_values, int replicates,
                                              const std::vector<AggregatorSpec>& methods);

} // namespace cw
