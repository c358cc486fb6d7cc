#pragma once

// Seeded Monte-Carlo engine: generates synthetic method-comparison datasets
// from a design and tabulates RMSE and efficiency across estimators. Draws
// come from counter-based streams keyed by (seed, replicate, sample, axis),
// so replicate order never matters.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pwd/data.hpp"
#include "pwd/profiles.hpp"

namespace pwd {

enum class Spacing { Geometric, Arithmetic };

enum class EstimatorKind {
    Utopian,       // fit_known with the true generation profiles
    RL,            // fit_rl
    PassingBablok,
    LinnetUnit,    // linnet_ccv with lambda = 1
    LinnetGeneral, // linnet_ccv with lambda = mean of g/h over the design grid
    MLConstantCV,
};

std::string estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(const std::string& name);

struct SimDesign {
    int n = 0;
    double mu_low = 0.0;
    double mu_high = 0.0;
    Spacing spacing = Spacing::Geometric;
    double alpha_true = 0.0;
    double beta_true = 1.0;
    PrecisionProfile profile_x = PrecisionProfile::constant_variance(1.0);
    PrecisionProfile profile_y = PrecisionProfile::constant_variance(1.0);
    int replicates = 1000;
    std::uint64_t seed = 1;
    std::vector<EstimatorKind> estimators;
    std::optional<double> mdl;
    double rl_lambda = 1.0;
    double ccv_lambda = 1.0;
    bool keep_estimates = false;
};

SimDesign design_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const SimDesign& design);

// True concentration grid of the design.
Eigen::VectorXd design_grid(const SimDesign& design);

// The lambda used by the general Linnet fit: average of g/h over the grid.
double lambda_general(const SimDesign& design);

// Synthetic dataset for one replicate.
MCDataset generate(const SimDesign& design, int replicate_index);

struct RLParamSummary {
    double mean_sigma, median_sigma, sd_sigma;
    double mean_kappa, median_kappa, sd_kappa;
};

struct EstimatorSummary {
    EstimatorKind kind;
    int failures = 0;
    double rmse_alpha = 0.0, rmse_beta = 0.0;
    double eff_alpha = 0.0, eff_beta = 0.0;
    std::optional<double> rmse_mdl, eff_mdl;
    double mean_alpha = 0.0, sd_alpha = 0.0;
    double mean_beta = 0.0, sd_beta = 0.0;
    std::optional<RLParamSummary> rl_params;
    // Per-replicate estimates in replicate order (failures skipped), kept
    // only when the design asks for them.
    std::vector<double> alphas, betas;
};

struct SimResult {
    SimDesign design;
    double mean_correlation = 0.0;
    std::vector<EstimatorSummary> estimators;
};

SimResult run_study(const SimDesign& design);

nlohmann::json result_to_json(const SimResult& result);

// Table-style CSV: one row per estimator with RMSE and efficiency for the
// intercept, the slope and the MDL prediction.
std::string result_to_csv(const SimResult& result);

}  // namespace pwd
