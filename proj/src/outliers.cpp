#include "pwd/outliers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "pwd/diagnostics.hpp"
#include "pwd/prob.hpp"

namespace pwd {

namespace {

// Uniform view over the two fitter variants: fit the current subset (warm
// starting from the previous stage), expose the line, the per-sample residual
// variance, and scaled residuals.
class StageFitter {
public:
    StageFitter(const OutlierOptions& opt) : opt_(opt) {}

    void fit(const MCDataset& subset) {
        if (opt_.profiles) {
            DemingOptions dopt;
            if (known_) dopt.start = LineFit{known_->alpha, known_->beta};
            known_ = fit_known(subset, opt_.profiles->first, opt_.profiles->second, dopt);
        } else {
            RLOptions ropt;
            ropt.lambda = opt_.lambda;
            if (rl_) ropt.start = RLPoint{rl_->sigma, rl_->kappa, rl_->alpha, rl_->beta};
            rl_ = fit_rl(subset, ropt);
        }
    }

    double alpha() const { return opt_.profiles ? known_->alpha : rl_->alpha; }
    double beta() const { return opt_.profiles ? known_->beta : rl_->beta; }

    // Residual variance at a reading x (the Eq-7 style scaling the current
    // fitter implies). For the known-profile fit the latent value of an
    // out-of-set sample is unavailable, so the profiles are evaluated at the
    // reading and the fitted mean, matching the RL convention.
    double residual_variance(double x) const {
        const double b = beta();
        if (opt_.profiles) {
            const double g = opt_.profiles->first(x);
            const double h = opt_.profiles->second(alpha() + b * x);
            return h + g * b * b;
        }
        const double s2 = rl_->sigma * rl_->sigma;
        const double k2 = rl_->kappa * rl_->kappa;
        const double t = alpha() + b * x;
        return rl_->lambda * b * b * (s2 + k2 * x * x) + s2 + k2 * t * t;
    }

    Eigen::VectorXd scaled_residuals(const MCDataset& subset) const {
        if (opt_.profiles) return residuals(subset, *known_).r;
        return residuals(subset, *rl_).r;
    }

    std::optional<RLFit> rl_fit() const { return rl_; }
    std::optional<DemingFit> known_fit() const { return known_; }

private:
    const OutlierOptions& opt_;
    std::optional<RLFit> rl_;
    std::optional<DemingFit> known_;
};

struct ResidualScale {
    double sigma_r = 0.0;
    double kappa_r = 0.0;
    double at(double x) const { return std::sqrt(sigma_r * sigma_r + kappa_r * kappa_r * x * x); }
};

// Eq-9 refit on the clean cases; identically-zero residuals collapse the
// scale to zero, handled by the caller.
ResidualScale clean_residual_scale(const MCDataset& clean, const Eigen::VectorXd& r) {
    try {
        const ResidualProfileFit f = fit_residual_profile(clean.x(), r);
        return {f.sigma_r, f.kappa_r};
    } catch (const DegenerateFitError&) {
        return {0.0, 0.0};
    }
}

}  // namespace

OutlierReport detect_outliers(const MCDataset& data, const OutlierOptions& options) {
    const int n = data.n();
    const int k_max = options.k_max
                          ? *options.k_max
                          : std::max(1, static_cast<int>(std::ceil(0.05 * n)));
    if (k_max < 1) throw DomainError("detect_outliers: k_max must be at least 1");
    if (n - k_max < 5)
        throw DataError("detect_outliers: n - k_max must be at least 5");
    if (!(options.alpha_level > 0.0 && options.alpha_level < 1.0))
        throw DomainError("detect_outliers: alpha_level must lie in (0, 1)");

    OutlierReport report;
    report.k_max = k_max;
    report.alpha_level = options.alpha_level;

    StageFitter fitter(options);
    std::vector<int> clean_pos(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) clean_pos[static_cast<size_t>(i)] = i;
    std::vector<int> suspect_pos;  // positions into the original data

    // Forward pass: trim the largest absolute scaled residual k_max times.
    for (int k = 0; k < k_max; ++k) {
        const MCDataset subset = data.at_positions(clean_pos);
        fitter.fit(subset);
        const Eigen::VectorXd r = fitter.scaled_residuals(subset);
        int worst = 0;
        for (int i = 1; i < subset.n(); ++i)
            if (std::abs(r[i]) > std::abs(r[worst])) worst = i;
        report.forward_trace.push_back({subset.index()[static_cast<size_t>(worst)], r[worst]});
        suspect_pos.push_back(clean_pos[static_cast<size_t>(worst)]);
        clean_pos.erase(clean_pos.begin() + worst);
    }

    // Backward pass: test the suspects against the clean-case fit, returning
    // the least suspicious one at a time.
    while (!suspect_pos.empty()) {
        const MCDataset clean = data.at_positions(clean_pos);
        fitter.fit(clean);
        const ResidualScale rs =
            clean_residual_scale(clean, fitter.scaled_residuals(clean));

        const double multiplier = static_cast<double>(clean.n());
        std::vector<BackwardRecord> records;
        records.reserve(suspect_pos.size());
        for (const int pos : suspect_pos) {
            const PairedSample s = data.sample(pos);
            const double e = s.y - fitter.alpha() - fitter.beta() * s.x;
            const double base = std::sqrt(fitter.residual_variance(s.x));
            const double scale = base * rs.at(s.x);
            double z;
            if (scale > 0.0 && std::isfinite(e / scale)) {
                z = e / scale;
            } else {
                // Zero residual scale (exactly collinear clean set): an exact
                // zero residual is unsuspicious, anything else is extreme.
                z = e == 0.0 ? 0.0
                             : std::copysign(std::numeric_limits<double>::max(), e);
            }
            const double raw_p = 2.0 * normal_tail(std::abs(z));
            records.push_back({s.index, z, std::min(1.0, multiplier * raw_p)});
        }

        size_t least = 0;
        for (size_t i = 1; i < records.size(); ++i) {
            if (records[i].bonferroni_p > records[least].bonferroni_p ||
                (records[i].bonferroni_p == records[least].bonferroni_p &&
                 records[i].index < records[least].index))
                least = i;
        }

        if (records[least].bonferroni_p < options.alpha_level) {
            report.outliers = records;
            report.clean_rl = fitter.rl_fit();
            report.clean_known = fitter.known_fit();
            return report;
        }

        report.backward_trace.push_back(records[least]);
        clean_pos.push_back(suspect_pos[least]);
        std::sort(clean_pos.begin(), clean_pos.end());
        suspect_pos.erase(suspect_pos.begin() + static_cast<std::ptrdiff_t>(least));
    }

    // Everything came back: no outliers; refit on the full data.
    fitter.fit(data);
    report.clean_rl = fitter.rl_fit();
    report.clean_known = fitter.known_fit();
    return report;
}

nlohmann::json outlier_report_to_json(const OutlierReport& report) {
    nlohmann::json j;
    j["k_max"] = report.k_max;
    j["alpha_level"] = report.alpha_level;
    j["forward_trace"] = nlohmann::json::array();
    for (const auto& s : report.forward_trace)
        j["forward_trace"].push_back({{"index", s.index}, {"z", s.z}});
    j["backward_trace"] = nlohmann::json::array();
    for (const auto& b : report.backward_trace)
        j["backward_trace"].push_back(
            {{"index", b.index}, {"z", b.z}, {"bonferroni_p", b.bonferroni_p}});
    j["outliers"] = nlohmann::json::array();
    for (const auto& b : report.outliers)
        j["outliers"].push_back(
            {{"index", b.index}, {"z", b.z}, {"bonferroni_p", b.bonferroni_p}});
    nlohmann::json fit;
    if (report.clean_rl) {
        fit["method"] = "rl";
        fit["alpha"] = report.clean_rl->alpha;
        fit["beta"] = report.clean_rl->beta;
        fit["sigma"] = report.clean_rl->sigma;
        fit["kappa"] = report.clean_rl->kappa;
        fit["lambda"] = report.clean_rl->lambda;
    } else if (report.clean_known) {
        fit["method"] = "known_profile";
        fit["alpha"] = report.clean_known->alpha;
        fit["beta"] = report.clean_known->beta;
    }
    j["clean_fit"] = fit;
    return j;
}

}  // namespace pwd
