#pragma once

// Standalone weighted Deming fit under a common Rocke-Lorenzato profile with
// an externally supplied relative-precision constant lambda. The profile
// parameters are estimated jointly with the line: a derivative-free outer
// search over (log sigma, log kappa, alpha, beta) wraps an exact per-sample
// 1-D minimization over each latent value.

#include <Eigen/Dense>
#include <optional>

#include "pwd/data.hpp"

namespace pwd {

struct RLPoint {
    double sigma;
    double kappa;
    double alpha;
    double beta;
};

struct RLOptions {
    double lambda = 1.0;
    int multistart = 3;            // jittered cold starts (ignored when start is given)
    int max_evaluations = 2000;    // per start
    double diameter_tol = 1e-9;
    std::optional<RLPoint> start;  // warm start: single search from here
};

struct RLFit {
    double alpha = 0.0;
    double beta = 0.0;
    double sigma = 0.0;
    double kappa = 0.0;
    double lambda = 1.0;
    Eigen::VectorXd mu_hat;
    double minus2_log_lik = 0.0;
    bool converged = false;
    bool sigma_at_boundary = false;
    bool kappa_at_boundary = false;
    int evaluations = 0;
};

// One sample's contribution to the Eq-8 style objective at latent value mu:
// (x-mu)^2/(lambda*gv) + (y-alpha-beta*mu)^2/hv + log(gv*hv), where
// gv = sigma^2 + (kappa*mu)^2 and hv = sigma^2 + (kappa*(alpha+beta*mu))^2.
// Lambda scales only the x quadratic, not the log term.
double rl_summand(double x, double y, const RLPoint& p, double lambda, double mu);

// Minimizer of rl_summand over mu (safeguarded Newton, warm-started at the
// fixed-variance closed form).
double rl_latent_mu(double x, double y, const RLPoint& p, double lambda);

// Objective value at a fixed latent vector.
double rl_minus2_log_lik(const MCDataset& data, const RLPoint& p, double lambda,
                         const Eigen::VectorXd& mu);

// Objective with the latent values minimized out; optionally returns them.
double rl_profile_objective(const MCDataset& data, const RLPoint& p, double lambda,
                            Eigen::VectorXd* mu_out = nullptr);

RLFit fit_rl(const MCDataset& data, const RLOptions& options = {});

}  // namespace pwd
