#pragma once

// Maximum-likelihood weighted Deming regression with externally supplied
// precision profiles. The fit alternates closed-form latent-value updates
// with weighted least squares, re-evaluating the profiles at the current
// estimates each sweep.

#include <Eigen/Dense>
#include <optional>

#include "pwd/data.hpp"
#include "pwd/profiles.hpp"

namespace pwd {

struct LineFit {
    double alpha;
    double beta;
};

// Ordinary least squares of y on x.
LineFit ols_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Weighted least squares of y on mu with weights w.
LineFit wls_line(const Eigen::VectorXd& mu, const Eigen::VectorXd& y, const Eigen::VectorXd& w);

// Closed-form maximum-likelihood latent value for one sample, variances held
// fixed: (h*x + g*beta*(y - alpha)) / (h + g*beta^2).
double latent_mu(double x, double y, double alpha, double beta, double g_i, double h_i);

// Root of the Deming slope quadratic for moment sums u = Sxx, q = Syy,
// p = Sxy and weight ratio r (the factor multiplying the y-term of the
// orthogonal objective): r*p*beta^2 + (u - r*q)*beta - p = 0.
double deming_slope(double u, double q, double p, double r);

// Classical unweighted Deming line with error variances var_x, var_y.
LineFit classical_deming(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double var_x,
                         double var_y);

struct DemingOptions {
    double tol_coeff = 1e-10;    // on max(|d_alpha|/scale, |d_beta|)
    double tol_loglik = 1e-12;   // relative, on -2 log L
    int max_iterations = 500;
    std::optional<LineFit> start;               // default: OLS of y on x
    std::optional<Eigen::VectorXd> mu_start;    // default: x
};

struct DemingFit {
    double alpha = 0.0;
    double beta = 0.0;
    Eigen::VectorXd mu_hat;
    double minus2_log_lik = 0.0;
    PrecisionProfile profile_x = PrecisionProfile::constant_variance(1.0);
    PrecisionProfile profile_y = PrecisionProfile::constant_variance(1.0);
    bool converged = false;
    int iterations = 0;
    // Largest per-sweep increase of the fixed-weight objective (>0 only from
    // floating-point rounding; the sweep is a descent step by construction).
    double max_sweep_increase = 0.0;
};

DemingFit fit_known(const MCDataset& data, const PrecisionProfile& gx, const PrecisionProfile& hy,
                    const DemingOptions& options = {});

// Eq-3 style -2 log likelihood at the given state, profiles evaluated at the
// latent estimates and the fitted means.
double known_minus2_log_lik(const MCDataset& data, double alpha, double beta,
                            const Eigen::VectorXd& mu, const PrecisionProfile& gx,
                            const PrecisionProfile& hy);

}  // namespace pwd
