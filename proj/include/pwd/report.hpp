#pragma once

// Analysis orchestration for the CLI: runs the requested fit, inference,
// diagnostics, optional prediction and outlier screening, and assembles a
// deterministic ordered-JSON report plus a text rendering.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "pwd/data.hpp"
#include "pwd/profiles.hpp"

namespace pwd {

inline constexpr const char* kVersion = "0.1.0";

struct AnalysisRequest {
    // Known-profile path when both profiles are present; RL path otherwise.
    std::optional<std::pair<PrecisionProfile, PrecisionProfile>> profiles;
    double lambda = 1.0;
    double level = 0.95;
    std::optional<double> mdl;
    bool outliers = false;
    std::optional<int> k_max;
    double outlier_alpha = 0.05;
    std::uint64_t seed = 12345;
    // When set, the four plot-data CSV files are written into this directory.
    std::optional<std::string> plots_dir;
};

nlohmann::ordered_json analyze(const MCDataset& data, const AnalysisRequest& request);

std::string render_text(const nlohmann::ordered_json& report);

}  // namespace pwd
