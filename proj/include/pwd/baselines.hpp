#pragma once

// Comparator estimators: Passing-Bablok rank regression, Linnet's
// constant-CV weighted Deming, and the constant-CV maximum-likelihood fit.

#include <optional>

#include "pwd/data.hpp"
#include "pwd/inference.hpp"

namespace pwd {

enum class BaselineMethod { PassingBablok, LinnetCCV, MLConstantCV };

struct BaselineFit {
    BaselineMethod method;
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<Interval> ci_alpha;  // Passing-Bablok only
    std::optional<Interval> ci_beta;
    std::optional<double> lambda;      // constant-CV methods
};

BaselineFit passing_bablok(const MCDataset& data, double level = 0.95);

BaselineFit linnet_ccv(const MCDataset& data, double lambda = 1.0);

BaselineFit ml_constant_cv(const MCDataset& data, double lambda = 1.0);

}  // namespace pwd
