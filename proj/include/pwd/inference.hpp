#pragma once

// Jackknife standard errors, covariance and confidence intervals for the
// fitted line, plus prediction at a medical decision level.

#include <functional>

#include "pwd/deming.hpp"
#include "pwd/deming_rl.hpp"

namespace pwd {

struct Interval {
    double lo;
    double hi;
    bool contains(double v) const { return lo <= v && v <= hi; }
    double width() const { return hi - lo; }
};

enum class FitMethod { KnownProfile, RL };

struct InferenceResult {
    double alpha = 0.0;
    double beta = 0.0;
    double se_alpha = 0.0;
    double se_beta = 0.0;
    double cov_ab = 0.0;
    Interval ci_alpha{0.0, 0.0};
    Interval ci_beta{0.0, 0.0};
    double level = 0.95;
    FitMethod method = FitMethod::KnownProfile;
    // Pseudo-value (bias-reduced) point estimates, reported as a by-product;
    // alpha/beta above stay the plug-in estimates.
    double alpha_jackknife = 0.0;
    double beta_jackknife = 0.0;
};

struct Prediction {
    double x0;
    double yhat;
    double se;
    Interval ci;
};

// Pseudo-value jackknife over leave-one-out refits of an arbitrary fitter.
// The fitter sees each leave-one-out dataset (original ids preserved) and
// returns the fitted line. Refit failures surface as InferenceError naming
// the dropped sample id.
InferenceResult jackknife(const MCDataset& data,
                          const std::function<LineFit(const MCDataset&)>& fitter,
                          double level = 0.95, FitMethod method = FitMethod::KnownProfile);

// Jackknife around fit_known; leave-one-out refits warm-start at the
// full-data solution.
InferenceResult jackknife_known(const MCDataset& data, const PrecisionProfile& gx,
                                const PrecisionProfile& hy, double level = 0.95);

// Jackknife around fit_rl, warm-started likewise.
InferenceResult jackknife_rl(const MCDataset& data, double lambda = 1.0, double level = 0.95);

Prediction predict(const InferenceResult& inf, double x0);

}  // namespace pwd
