#include "pwd/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pwd/baselines.hpp"
#include "pwd/diagnostics.hpp"
#include "pwd/inference.hpp"
#include "pwd/outliers.hpp"

namespace pwd {

namespace {

nlohmann::ordered_json interval_json(const Interval& ci) {
    return nlohmann::ordered_json{{"lo", ci.lo}, {"hi", ci.hi}};
}

void write_plot_files(const std::string& dir, const MCDataset& data, double alpha, double beta,
                      const ResidualSet& rs) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const int n = data.n();

    auto open = [&](const char* name) {
        std::ofstream out(fs::path(dir) / name);
        if (!out) throw DataError(std::string("cannot write plot file ") + name + " in " + dir);
        out.precision(17);
        return out;
    };

    {
        auto out = open("scatter.csv");
        out << "x,y,fitted\n";
        for (int i = 0; i < n; ++i)
            out << data.x()[i] << ',' << data.y()[i] << ',' << alpha + beta * data.x()[i] << '\n';
    }
    {
        auto out = open("residuals_vs_x.csv");
        out << "x,residual\n";
        for (int i = 0; i < n; ++i) out << data.x()[i] << ',' << rs.e[i] << '\n';
    }
    {
        auto out = open("scaled_residuals.csv");
        out << "index,scaled_residual\n";
        for (int i = 0; i < n; ++i)
            out << data.index()[static_cast<size_t>(i)] << ',' << rs.r[i] << '\n';
    }
    {
        auto out = open("qq.csv");
        Eigen::VectorXd sorted = rs.r;
        std::sort(sorted.data(), sorted.data() + n);
        const Eigen::VectorXd blom = blom_normal_quantiles(n);
        out << "theoretical_quantile,ordered_residual\n";
        for (int i = 0; i < n; ++i) out << blom[i] << ',' << sorted[i] << '\n';
    }
}

}  // namespace

nlohmann::ordered_json analyze(const MCDataset& data, const AnalysisRequest& req) {
    if (data.n() < 5) throw DataError("analysis needs at least 5 samples");
    if (!(req.level > 0.0 && req.level < 1.0))
        throw DomainError("confidence level must lie in (0, 1)");

    nlohmann::ordered_json report;
    report["input"] = {
        {"n", data.n()},
        {"pearson", pearson(data.x(), data.y())},
        {"spearman", spearman(data.x(), data.y())},
    };

    const bool known = req.profiles.has_value();
    InferenceResult inf;
    ResidualSet rs;
    nlohmann::ordered_json fit_block;
    if (known) {
        const DemingFit fit = fit_known(data, req.profiles->first, req.profiles->second);
        rs = residuals(data, fit);
        inf = jackknife_known(data, req.profiles->first, req.profiles->second, req.level);
        nlohmann::json px, py;
        to_json(px, req.profiles->first);
        to_json(py, req.profiles->second);
        fit_block = {
            {"method", "known_profile"},
            {"alpha", fit.alpha},
            {"beta", fit.beta},
            {"minus2_log_lik", fit.minus2_log_lik},
            {"converged", fit.converged},
            {"iterations", fit.iterations},
            {"profile_x", px},
            {"profile_y", py},
        };
    } else {
        RLOptions opt;
        opt.lambda = req.lambda;
        const RLFit fit = fit_rl(data, opt);
        rs = residuals(data, fit);
        inf = jackknife_rl(data, req.lambda, req.level);
        fit_block = {
            {"method", "rl"},
            {"alpha", fit.alpha},
            {"beta", fit.beta},
            {"sigma", fit.sigma},
            {"kappa", fit.kappa},
            {"lambda", fit.lambda},
            {"minus2_log_lik", fit.minus2_log_lik},
            {"converged", fit.converged},
            {"sigma_at_boundary", fit.sigma_at_boundary},
            {"kappa_at_boundary", fit.kappa_at_boundary},
        };
    }
    report["fit"] = fit_block;

    report["inference"] = {
        {"se_alpha", inf.se_alpha},
        {"se_beta", inf.se_beta},
        {"cov_ab", inf.cov_ab},
        {"ci_alpha", interval_json(inf.ci_alpha)},
        {"ci_beta", interval_json(inf.ci_beta)},
        {"level", inf.level},
        {"alpha_jackknife", inf.alpha_jackknife},
        {"beta_jackknife", inf.beta_jackknife},
    };

    nlohmann::ordered_json diag;
    diag["sd_r"] = rs.sd_r;
    diag["sd_r_ci"] = interval_json(rs.sd_r_ci);
    try {
        const ResidualProfileFit rp = fit_residual_profile(data.x(), rs.r);
        diag["residual_profile"] = {
            {"sigma_r", rp.sigma_r},
            {"kappa_r", rp.kappa_r},
            {"minus2_log_lik", rp.minus2_log_lik},
            {"p_const_sd", rp.p_const_sd},
            {"p_const_cv", rp.p_const_cv},
        };
    } catch (const Error&) {
        // Degenerate residuals (identically zero) or nonpositive x: the
        // residual-profile block is omitted rather than reported non-finite.
    }
    try {
        const QQNormality qq = qq_normality(rs.r, req.seed);
        diag["qq"] = {{"correlation", qq.correlation}, {"p_value", qq.p_value}};
    } catch (const Error&) {
    }
    report["diagnostics"] = diag;

    if (req.mdl) {
        const Prediction pred = predict(inf, *req.mdl);
        report["prediction"] = {
            {"x0", pred.x0},
            {"yhat", pred.yhat},
            {"se", pred.se},
            {"ci", interval_json(pred.ci)},
        };
    }

    if (req.outliers) {
        OutlierOptions opt;
        opt.lambda = req.lambda;
        opt.k_max = req.k_max;
        opt.alpha_level = req.outlier_alpha;
        opt.profiles = req.profiles;
        report["outliers"] = outlier_report_to_json(detect_outliers(data, opt));
    }

    nlohmann::ordered_json config;
    config["method"] = known ? "known_profile" : "rl";
    config["lambda"] = req.lambda;
    config["level"] = req.level;
    if (req.mdl) config["mdl"] = *req.mdl;
    config["outliers"] = req.outliers;
    if (req.k_max) config["k_max"] = *req.k_max;
    config["outlier_alpha"] = req.outlier_alpha;
    report["provenance"] = {
        {"version", kVersion},
        {"seed", req.seed},
        {"config", config},
    };

    if (req.plots_dir)
        write_plot_files(*req.plots_dir, data, fit_block["alpha"].get<double>(),
                         fit_block["beta"].get<double>(), rs);

    return report;
}

namespace {

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string render_text(const nlohmann::ordered_json& r) {
    std::string out;
    const auto& in = r.at("input");
    out += "Samples " + std::to_string(in.at("n").get<int>()) + "  Pearson correlation " +
           fmt(in.at("pearson").get<double>()) + "  Spearman " +
           fmt(in.at("spearman").get<double>()) + "\n";

    const auto& fit = r.at("fit");
    const bool known = fit.at("method").get<std::string>() == "known_profile";
    out += known ? "Fitted weighted Deming regression (known precision profiles)\n"
                 : "Fitted weighted Deming regression (RL profile, lambda " +
                       fmt(fit.at("lambda").get<double>(), 3) + ")\n";
    if (!known)
        out += "Profile estimates sigma " + fmt(fit.at("sigma").get<double>()) + "  kappa " +
               fmt(fit.at("kappa").get<double>()) + "\n";

    const auto& inf = r.at("inference");
    auto line = [&](const char* name, double est, double se, const nlohmann::ordered_json& ci) {
        out += std::string(name) + "  " + fmt(est) + "  se " + fmt(se) + "  CI (" +
               fmt(ci.at("lo").get<double>()) + ", " + fmt(ci.at("hi").get<double>()) + ")\n";
    };
    line("Intercept", fit.at("alpha").get<double>(), inf.at("se_alpha").get<double>(),
         inf.at("ci_alpha"));
    line("Slope    ", fit.at("beta").get<double>(), inf.at("se_beta").get<double>(),
         inf.at("ci_beta"));

    if (r.contains("prediction")) {
        const auto& p = r.at("prediction");
        out += "MDL " + fmt(p.at("x0").get<double>(), 3) + " prediction " +
               fmt(p.at("yhat").get<double>(), 3) + "  CI " +
               fmt(p.at("ci").at("lo").get<double>(), 3) + " " +
               fmt(p.at("ci").at("hi").get<double>(), 3) + "\n";
    }

    const auto& diag = r.at("diagnostics");
    out += "Scaled residual SD and CI  " + fmt(diag.at("sd_r").get<double>(), 3) + "  " +
           fmt(diag.at("sd_r_ci").at("lo").get<double>(), 3) + "  " +
           fmt(diag.at("sd_r_ci").at("hi").get<double>(), 3) + "\n";
    if (diag.contains("residual_profile")) {
        const auto& rp = diag.at("residual_profile");
        out += "Residual profile sigma_r " + fmt(rp.at("sigma_r").get<double>()) + "  kappa_r " +
               fmt(rp.at("kappa_r").get<double>()) + "  P const SD " +
               fmt(rp.at("p_const_sd").get<double>()) + "  P const CV " +
               fmt(rp.at("p_const_cv").get<double>()) + "\n";
    }
    if (diag.contains("qq"))
        out += "QQ normality P " + fmt(diag.at("qq").at("p_value").get<double>()) + "\n";

    if (r.contains("outliers")) {
        const auto& o = r.at("outliers");
        out += "Outlier screen: K " + std::to_string(o.at("k_max").get<int>()) + "\n";
        for (const auto& s : o.at("forward_trace"))
            out += "  Suspect " + std::to_string(s.at("index").get<int>()) + " Z " +
                   fmt(s.at("z").get<double>(), 2) + "\n";
        for (const auto& b : o.at("backward_trace"))
            out += "  Least suspect " + std::to_string(b.at("index").get<int>()) + " Z " +
                   fmt(b.at("z").get<double>(), 3) + " BonP " +
                   fmt(b.at("bonferroni_p").get<double>(), 4) + "\n";
        if (o.at("outliers").empty()) {
            out += "  No significant outliers\n";
        } else {
            for (const auto& b : o.at("outliers"))
                out += "  Outlier " + std::to_string(b.at("index").get<int>()) + " Z " +
                       fmt(b.at("z").get<double>(), 3) + " Bonferroni P " +
                       fmt(b.at("bonferroni_p").get<double>(), 5) + "\n";
            const auto& cf = o.at("clean_fit");
            out += "  Refit on retained cases: intercept " +
                   fmt(cf.at("alpha").get<double>()) + "  slope " +
                   fmt(cf.at("beta").get<double>()) + "\n";
        }
    }
    return out;
}

}  // namespace pwd
