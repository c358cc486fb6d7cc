#pragma once

// Sequential outlier identification: forward trimming of the largest scaled
// residuals followed by backward Bonferroni-tested reinclusion, after
// Rosner's externally studentized deviation approach.

#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pwd/data.hpp"
#include "pwd/deming.hpp"
#include "pwd/deming_rl.hpp"
#include "pwd/profiles.hpp"

namespace pwd {

struct OutlierOptions {
    double lambda = 1.0;  // RL fitter's relative-precision constant
    std::optional<int> k_max;  // default: max(1, ceil(0.05 n))
    double alpha_level = 0.05;
    // When set, the underlying fitter is the known-profile fit instead of RL.
    std::optional<std::pair<PrecisionProfile, PrecisionProfile>> profiles;
};

struct SuspectRecord {
    int index;  // sample id
    double z;   // serial scaled residual at the time of trimming
};

struct BackwardRecord {
    int index;
    double z;             // scaled predicted residual against the clean fit
    double bonferroni_p;  // min(1, clean-set size * two-sided normal P)
};

struct OutlierReport {
    int k_max = 0;
    double alpha_level = 0.05;
    std::vector<SuspectRecord> forward_trace;    // in trimming order, size k_max
    std::vector<BackwardRecord> backward_trace;  // reinclusions, in order
    std::vector<BackwardRecord> outliers;        // final declared outliers
    // Fit to the retained cases; exactly one of these is set, matching the
    // fitter in use.
    std::optional<RLFit> clean_rl;
    std::optional<DemingFit> clean_known;
};

OutlierReport detect_outliers(const MCDataset& data, const OutlierOptions& options = {});

nlohmann::json outlier_report_to_json(const OutlierReport& report);

}  // namespace pwd
