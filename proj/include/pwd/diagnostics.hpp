#pragma once

// Residual diagnostics: scaled residuals with their calibration check,
// residual-profile fitting with chi-squared model-reduction tests, and a
// Monte-Carlo QQ normality test.

#include <cstdint>

#include "pwd/deming.hpp"
#include "pwd/deming_rl.hpp"
#include "pwd/inference.hpp"

namespace pwd {

struct ResidualSet {
    Eigen::VectorXd e;   // raw residuals y - alpha - beta*x
    Eigen::VectorXd r;   // scaled residuals, nominally standard normal
    double sd_r;         // sqrt(sum r^2 / (n - 2))
    Interval sd_r_ci;    // chi-squared interval, n - 2 df
};

// Residuals for a known-profile fit: variance h(alpha+beta*mu_hat) +
// g(mu_hat)*beta^2 per sample.
ResidualSet residuals(const MCDataset& data, const DemingFit& fit, double ci_level = 0.95);

// Residuals for a standalone RL fit: variance evaluated at the readings,
// lambda*beta^2*(sigma^2+(kappa*x)^2) + sigma^2 + (kappa*(alpha+beta*x))^2.
ResidualSet residuals(const MCDataset& data, const RLFit& fit, double ci_level = 0.95);

struct ResidualProfileFit {
    double sigma_r = 0.0;
    double kappa_r = 0.0;
    double minus2_log_lik = 0.0;
    double p_const_sd = 1.0;   // test of kappa_r = 0
    double p_const_cv = 1.0;   // test of sigma_r = 0
    bool lr_clamped_sd = false;  // negative LR statistic clamped to zero
    bool lr_clamped_cv = false;
};

// Fits var(r) = sigma_r^2 + (kappa_r*x)^2 to scaled residuals by maximum
// likelihood and tests the two one-parameter reductions.
ResidualProfileFit fit_residual_profile(const Eigen::VectorXd& x, const Eigen::VectorXd& r);

struct QQNormality {
    double correlation;
    double p_value;
};

// Normal quantiles at Blom plotting positions (i - 3/8)/(n + 1/4).
Eigen::VectorXd blom_normal_quantiles(int n);

// Correlation of the ordered sample with the Blom quantiles.
double qq_correlation(const Eigen::VectorXd& r);

// Sorted null distribution of the QQ correlation: m standard-normal samples
// of size n from the seeded counter stream. Build once and reuse when
// testing many same-sized samples.
Eigen::VectorXd qq_reference_correlations(int n, std::uint64_t seed, int m = 10000);

double qq_p_from_reference(double correlation, const Eigen::VectorXd& sorted_reference);

QQNormality qq_normality(const Eigen::VectorXd& r, std::uint64_t seed,
                         int reference_samples = 10000);

}  // namespace pwd
