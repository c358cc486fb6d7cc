#include "pwd/inference.hpp"

#include <cmath>
#include <string>

#include "pwd/prob.hpp"

namespace pwd {

InferenceResult jackknife(const MCDataset& data,
                          const std::function<LineFit(const MCDataset&)>& fitter, double level,
                          FitMethod method) {
    const int n = data.n();
    if (n < 5) throw DataError("jackknife: need at least 5 samples");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("jackknife: level must lie in (0, 1)");

    LineFit full{};
    try {
        full = fitter(data);
    } catch (const Error& e) {
        throw InferenceError(std::string("jackknife: full-data fit failed: ") + e.what(), -1);
    }

    Eigen::VectorXd pa(n), pb(n);
    for (int i = 0; i < n; ++i) {
        LineFit loo{};
        try {
            loo = fitter(data.without_position(i));
        } catch (const Error& e) {
            throw InferenceError("jackknife: leave-one-out refit failed at sample id " +
                                     std::to_string(data.index()[static_cast<size_t>(i)]) + ": " +
                                     e.what(),
                                 data.index()[static_cast<size_t>(i)]);
        }
        pa[i] = n * full.alpha - (n - 1) * loo.alpha;
        pb[i] = n * full.beta - (n - 1) * loo.beta;
    }

    const double ma = pa.mean(), mb = pb.mean();
    const Eigen::ArrayXd da = pa.array() - ma, db = pb.array() - mb;
    const double denom = static_cast<double>(n) * (n - 1);

    InferenceResult r;
    r.alpha = full.alpha;
    r.beta = full.beta;
    r.alpha_jackknife = ma;
    r.beta_jackknife = mb;
    r.se_alpha = std::sqrt((da * da).sum() / denom);
    r.se_beta = std::sqrt((db * db).sum() / denom);
    r.cov_ab = (da * db).sum() / denom;
    r.level = level;
    r.method = method;
    const double z = normal_quantile(0.5 * (1.0 + level));
    r.ci_alpha = {full.alpha - z * r.se_alpha, full.alpha + z * r.se_alpha};
    r.ci_beta = {full.beta - z * r.se_beta, full.beta + z * r.se_beta};
    return r;
}

InferenceResult jackknife_known(const MCDataset& data, const PrecisionProfile& gx,
                                const PrecisionProfile& hy, double level) {
    const DemingFit full = fit_known(data, gx, hy);
    auto fitter = [&](const MCDataset& d) -> LineFit {
        if (d.n() == data.n()) return {full.alpha, full.beta};
        DemingOptions opt;
        opt.start = LineFit{full.alpha, full.beta};
        const DemingFit f = fit_known(d, gx, hy, opt);
        return {f.alpha, f.beta};
    };
    return jackknife(data, fitter, level, FitMethod::KnownProfile);
}

InferenceResult jackknife_rl(const MCDataset& data, double lambda, double level) {
    RLOptions full_opt;
    full_opt.lambda = lambda;
    const RLFit full = fit_rl(data, full_opt);
    auto fitter = [&, full](const MCDataset& d) -> LineFit {
        if (d.n() == data.n()) return {full.alpha, full.beta};
        RLOptions opt;
        opt.lambda = lambda;
        opt.start = RLPoint{full.sigma, full.kappa, full.alpha, full.beta};
        const RLFit f = fit_rl(d, opt);
        return {f.alpha, f.beta};
    };
    return jackknife(data, fitter, level, FitMethod::RL);
}

Prediction predict(const InferenceResult& inf, double x0) {
    if (!std::isfinite(x0)) throw DomainError("predict: x0 must be finite");
    const double yhat = inf.alpha + inf.beta * x0;
    const double var = inf.se_alpha * inf.se_alpha + x0 * x0 * inf.se_beta * inf.se_beta +
                       2.0 * x0 * inf.cov_ab;
    if (var < 0.0)
        throw Error("predict: negative prediction variance from inconsistent covariance");
    const double se = std::sqrt(var);
    const double z = normal_quantile(0.5 * (1.0 + inf.level));
    return {x0, yhat, se, {yhat - z * se, yhat + z * se}};
}

}  // namespace pwd
