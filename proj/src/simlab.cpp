#include "pwd/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pwd/baselines.hpp"
#include "pwd/deming.hpp"
#include "pwd/deming_rl.hpp"
#include "pwd/rng.hpp"

namespace pwd {

std::string estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::Utopian: return "utopian";
        case EstimatorKind::RL: return "rl";
        case EstimatorKind::PassingBablok: return "passing_bablok";
        case EstimatorKind::LinnetUnit: return "linnet_1";
        case EstimatorKind::LinnetGeneral: return "linnet_gen";
        case EstimatorKind::MLConstantCV: return "ml_constant_cv";
    }
    return "unknown";
}

EstimatorKind estimator_from_name(const std::string& name) {
    if (name == "utopian") return EstimatorKind::Utopian;
    if (name == "rl") return EstimatorKind::RL;
    if (name == "passing_bablok") return EstimatorKind::PassingBablok;
    if (name == "linnet_1") return EstimatorKind::LinnetUnit;
    if (name == "linnet_gen") return EstimatorKind::LinnetGeneral;
    if (name == "ml_constant_cv") return EstimatorKind::MLConstantCV;
    throw DataError("unknown estimator \"" + name + "\"");
}

SimDesign design_from_json(const nlohmann::json& j) {
    std::vector<std::string> problems;
    auto need_number = [&](const char* key) -> double {
        if (!j.contains(key) || !j.at(key).is_number()) {
            problems.push_back(std::string(key) + ": required number");
            return 0.0;
        }
        return j.at(key).get<double>();
    };

    SimDesign d;
    d.n = static_cast<int>(need_number("n"));
    d.mu_low = need_number("mu_low");
    d.mu_high = need_number("mu_high");
    d.alpha_true = need_number("alpha_true");
    d.beta_true = need_number("beta_true");
    d.replicates = static_cast<int>(need_number("replicates"));
    if (j.contains("seed")) {
        if (j.at("seed").is_number_unsigned() || j.at("seed").is_number_integer())
            d.seed = j.at("seed").get<std::uint64_t>();
        else
            problems.push_back("seed: must be an integer");
    }
    if (j.contains("spacing")) {
        const std::string s = j.at("spacing").is_string() ? j.at("spacing").get<std::string>() : "";
        if (s == "geometric") d.spacing = Spacing::Geometric;
        else if (s == "arithmetic") d.spacing = Spacing::Arithmetic;
        else problems.push_back("spacing: must be \"geometric\" or \"arithmetic\"");
    }
    for (const char* key : {"profile_x", "profile_y"}) {
        if (!j.contains(key)) {
            problems.push_back(std::string(key) + ": required profile object");
            continue;
        }
        try {
            const PrecisionProfile p = profile_from_json(j.at(key));
            (key[8] == 'x' ? d.profile_x : d.profile_y) = p;
        } catch (const Error& e) {
            problems.push_back(std::string(key) + ": " + e.what());
        }
    }
    if (!j.contains("estimators") || !j.at("estimators").is_array() ||
        j.at("estimators").empty()) {
        problems.push_back("estimators: required non-empty array of names");
    } else {
        for (const auto& e : j.at("estimators")) {
            try {
                d.estimators.push_back(estimator_from_name(e.get<std::string>()));
            } catch (const Error& err) {
                problems.push_back(std::string("estimators: ") + err.what());
            }
        }
    }
    if (j.contains("mdl")) d.mdl = j.at("mdl").get<double>();
    if (j.contains("rl_lambda")) d.rl_lambda = j.at("rl_lambda").get<double>();
    if (j.contains("ccv_lambda")) d.ccv_lambda = j.at("ccv_lambda").get<double>();
    if (j.contains("keep_estimates")) d.keep_estimates = j.at("keep_estimates").get<bool>();

    if (problems.empty()) {
        if (d.n < 3) problems.push_back("n: must be at least 3");
        if (d.replicates < 1) problems.push_back("replicates: must be at least 1");
        if (d.spacing == Spacing::Geometric && !(d.mu_low > 0.0))
            problems.push_back("mu_low: must be positive for geometric spacing");
        if (!(d.mu_high >= d.mu_low)) problems.push_back("mu_high: must be >= mu_low");
    }
    if (!problems.empty()) {
        std::string msg = "invalid simulation design:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw DataError(msg);
    }
    return d;
}

void to_json(nlohmann::json& j, const SimDesign& d) {
    j = nlohmann::json{
        {"n", d.n},
        {"mu_low", d.mu_low},
        {"mu_high", d.mu_high},
        {"spacing", d.spacing == Spacing::Geometric ? "geometric" : "arithmetic"},
        {"alpha_true", d.alpha_true},
        {"beta_true", d.beta_true},
        {"profile_x", d.profile_x},
        {"profile_y", d.profile_y},
        {"replicates", d.replicates},
        {"seed", d.seed},
        {"rl_lambda", d.rl_lambda},
        {"ccv_lambda", d.ccv_lambda},
        {"keep_estimates", d.keep_estimates},
    };
    nlohmann::json est = nlohmann::json::array();
    for (const auto e : d.estimators) est.push_back(estimator_name(e));
    j["estimators"] = est;
    if (d.mdl) j["mdl"] = *d.mdl;
}

Eigen::VectorXd design_grid(const SimDesign& d) {
    Eigen::VectorXd mu(d.n);
    for (int i = 0; i < d.n; ++i) {
        const double f = d.n == 1 ? 0.0 : static_cast<double>(i) / (d.n - 1);
        mu[i] = d.spacing == Spacing::Geometric
                    ? d.mu_low * std::pow(d.mu_high / d.mu_low, f)
                    : d.mu_low + f * (d.mu_high - d.mu_low);
    }
    return mu;
}

double lambda_general(const SimDesign& d) {
    const Eigen::VectorXd mu = design_grid(d);
    double acc = 0.0;
    for (int i = 0; i < d.n; ++i)
        acc += d.profile_x(mu[i]) / d.profile_y(d.alpha_true + d.beta_true * mu[i]);
    return acc / d.n;
}

MCDataset generate(const SimDesign& d, int replicate_index) {
    const Eigen::VectorXd mu = design_grid(d);
    Eigen::VectorXd x(d.n), y(d.n);
    for (int i = 0; i < d.n; ++i) {
        const double gx = d.profile_x(mu[i]);
        const double my = d.alpha_true + d.beta_true * mu[i];
        const double hy = d.profile_y(my);
        if (!(gx >= 0.0) || !(hy >= 0.0) || !std::isfinite(gx) || !std::isfinite(hy))
            throw DataError("generate: profile produced an invalid variance");
        const auto rep = static_cast<std::uint64_t>(replicate_index);
        x[i] = mu[i] + std::sqrt(gx) * rng::standard_normal(d.seed, rep, i, 0);
        y[i] = my + std::sqrt(hy) * rng::standard_normal(d.seed, rep, i, 1);
    }
    return {x, y};
}

namespace {

struct Accumulator {
    std::vector<double> alphas, betas, sigmas, kappas;
    int failures = 0;
};

double rmse_of(const std::vector<double>& v, double truth) {
    double acc = 0.0;
    for (const double x : v) acc += (x - truth) * (x - truth);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (const double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double acc = 0.0;
    for (const double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double rmse_mdl_of(const std::vector<double>& a, const std::vector<double>& b, double mdl,
                   double truth) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double fitted = a[i] + b[i] * mdl;
        acc += (fitted - truth) * (fitted - truth);
    }
    return std::sqrt(acc / static_cast<double>(a.size()));
}

}  // namespace

SimResult run_study(const SimDesign& design) {
    if (design.estimators.empty()) throw DataError("run_study: estimator list is empty");

    // The utopian fit is the efficiency denominator; run it always.
    std::vector<EstimatorKind> kinds = design.estimators;
    if (std::find(kinds.begin(), kinds.end(), EstimatorKind::Utopian) == kinds.end())
        kinds.insert(kinds.begin(), EstimatorKind::Utopian);

    const double lam_gen =
        std::find(kinds.begin(), kinds.end(), EstimatorKind::LinnetGeneral) != kinds.end()
            ? lambda_general(design)
            : 1.0;

    // Zero-noise generation profiles make the likelihood degenerate; the
    // exact data they produce are recovered under any positive weights.
    const Eigen::VectorXd grid = design_grid(design);
    auto fitting_profile = [&](const PrecisionProfile& p, bool on_y) {
        for (int i = 0; i < design.n; ++i) {
            const double at = on_y ? design.alpha_true + design.beta_true * grid[i] : grid[i];
            if (p(at) > 0.0) return p;
        }
        return PrecisionProfile::constant_variance(1.0);
    };
    const PrecisionProfile utopian_x = fitting_profile(design.profile_x, false);
    const PrecisionProfile utopian_y = fitting_profile(design.profile_y, true);

    std::vector<Accumulator> acc(kinds.size());
    double corr_sum = 0.0;
    for (int rep = 0; rep < design.replicates; ++rep) {
        const MCDataset data = generate(design, rep);
        corr_sum += pearson(data.x(), data.y());
        for (size_t e = 0; e < kinds.size(); ++e) {
            try {
                double a = 0.0, b = 0.0;
                switch (kinds[e]) {
                    case EstimatorKind::Utopian: {
                        const DemingFit f = fit_known(data, utopian_x, utopian_y);
                        a = f.alpha;
                        b = f.beta;
                        break;
                    }
                    case EstimatorKind::RL: {
                        RLOptions opt;
                        opt.lambda = design.rl_lambda;
                        const RLFit f = fit_rl(data, opt);
                        a = f.alpha;
                        b = f.beta;
                        acc[e].sigmas.push_back(f.sigma);
                        acc[e].kappas.push_back(f.kappa);
                        break;
                    }
                    case EstimatorKind::PassingBablok: {
                        const BaselineFit f = passing_bablok(data);
                        a = f.alpha;
                        b = f.beta;
                        break;
                    }
                    case EstimatorKind::LinnetUnit: {
                        const BaselineFit f = linnet_ccv(data, 1.0);
                        a = f.alpha;
                        b = f.beta;
                        break;
                    }
                    case EstimatorKind::LinnetGeneral: {
                        const BaselineFit f = linnet_ccv(data, lam_gen);
                        a = f.alpha;
                        b = f.beta;
                        break;
                    }
                    case EstimatorKind::MLConstantCV: {
                        const BaselineFit f = ml_constant_cv(data, design.ccv_lambda);
                        a = f.alpha;
                        b = f.beta;
                        break;
                    }
                }
                acc[e].alphas.push_back(a);
                acc[e].betas.push_back(b);
            } catch (const Error&) {
                ++acc[e].failures;
            }
        }
    }

    for (size_t e = 0; e < kinds.size(); ++e) {
        if (acc[e].failures > 0.01 * design.replicates)
            throw Error("run_study: estimator " + estimator_name(kinds[e]) + " failed on " +
                        std::to_string(acc[e].failures) + " of " +
                        std::to_string(design.replicates) + " replicates");
        if (acc[e].alphas.empty())
            throw Error("run_study: estimator " + estimator_name(kinds[e]) +
                        " produced no estimates");
    }

    const double mdl_truth =
        design.mdl ? design.alpha_true + design.beta_true * *design.mdl : 0.0;

    SimResult result;
    result.design = design;
    result.mean_correlation = corr_sum / design.replicates;

    double u_rmse_a = 0.0, u_rmse_b = 0.0, u_rmse_m = 0.0;
    for (size_t e = 0; e < kinds.size(); ++e) {
        if (kinds[e] == EstimatorKind::Utopian) {
            u_rmse_a = rmse_of(acc[e].alphas, design.alpha_true);
            u_rmse_b = rmse_of(acc[e].betas, design.beta_true);
            if (design.mdl)
                u_rmse_m = rmse_mdl_of(acc[e].alphas, acc[e].betas, *design.mdl, mdl_truth);
        }
    }

    for (size_t e = 0; e < kinds.size(); ++e) {
        EstimatorSummary s;
        s.kind = kinds[e];
        s.failures = acc[e].failures;
        s.rmse_alpha = rmse_of(acc[e].alphas, design.alpha_true);
        s.rmse_beta = rmse_of(acc[e].betas, design.beta_true);
        s.eff_alpha = s.rmse_alpha > 0.0
                          ? 100.0 * (u_rmse_a / s.rmse_alpha) * (u_rmse_a / s.rmse_alpha)
                          : 100.0;
        s.eff_beta = s.rmse_beta > 0.0
                         ? 100.0 * (u_rmse_b / s.rmse_beta) * (u_rmse_b / s.rmse_beta)
                         : 100.0;
        if (design.mdl) {
            s.rmse_mdl = rmse_mdl_of(acc[e].alphas, acc[e].betas, *design.mdl, mdl_truth);
            s.eff_mdl = *s.rmse_mdl > 0.0
                            ? 100.0 * (u_rmse_m / *s.rmse_mdl) * (u_rmse_m / *s.rmse_mdl)
                            : 100.0;
        }
        s.mean_alpha = mean_of(acc[e].alphas);
        s.sd_alpha = sd_of(acc[e].alphas);
        s.mean_beta = mean_of(acc[e].betas);
        s.sd_beta = sd_of(acc[e].betas);
        if (kinds[e] == EstimatorKind::RL && !acc[e].sigmas.empty()) {
            s.rl_params = RLParamSummary{mean_of(acc[e].sigmas),   median_of(acc[e].sigmas),
                                         sd_of(acc[e].sigmas),     mean_of(acc[e].kappas),
                                         median_of(acc[e].kappas), sd_of(acc[e].kappas)};
        }
        if (design.keep_estimates) {
            s.alphas = acc[e].alphas;
            s.betas = acc[e].betas;
        }
        result.estimators.push_back(std::move(s));
    }
    return result;
}

nlohmann::json result_to_json(const SimResult& result) {
    nlohmann::json j;
    j["design"] = result.design;
    j["mean_correlation"] = result.mean_correlation;
    j["estimators"] = nlohmann::json::array();
    for (const auto& s : result.estimators) {
        nlohmann::json e;
        e["name"] = estimator_name(s.kind);
        e["failures"] = s.failures;
        e["rmse_alpha"] = s.rmse_alpha;
        e["rmse_beta"] = s.rmse_beta;
        e["eff_alpha"] = s.eff_alpha;
        e["eff_beta"] = s.eff_beta;
        if (s.rmse_mdl) {
            e["rmse_mdl"] = *s.rmse_mdl;
            e["eff_mdl"] = *s.eff_mdl;
        }
        e["mean_alpha"] = s.mean_alpha;
        e["sd_alpha"] = s.sd_alpha;
        e["mean_beta"] = s.mean_beta;
        e["sd_beta"] = s.sd_beta;
        if (s.rl_params) {
            e["rl_params"] = {
                {"mean_sigma", s.rl_params->mean_sigma},
                {"median_sigma", s.rl_params->median_sigma},
                {"sd_sigma", s.rl_params->sd_sigma},
                {"mean_kappa", s.rl_params->mean_kappa},
                {"median_kappa", s.rl_params->median_kappa},
                {"sd_kappa", s.rl_params->sd_kappa},
            };
        }
        if (result.design.keep_estimates) {
            e["alphas"] = s.alphas;
            e["betas"] = s.betas;
        }
        j["estimators"].push_back(e);
    }
    return j;
}

std::string result_to_csv(const SimResult& result) {
    std::ostringstream out;
    out.precision(10);
    out << "estimator,mean_r,intercept_rmse,intercept_eff,slope_rmse,slope_eff,"
           "mdl_rmse,mdl_eff,failures\n";
    for (const auto& s : result.estimators) {
        out << estimator_name(s.kind) << ',' << result.mean_correlation << ',' << s.rmse_alpha
            << ',' << s.eff_alpha << ',' << s.rmse_beta << ',' << s.eff_beta << ',';
        if (s.rmse_mdl)
            out << *s.rmse_mdl << ',' << *s.eff_mdl;
        else
            out << ',';
        out << ',' << s.failures << '\n';
    }
    return out.str();
}

}  // namespace pwd
