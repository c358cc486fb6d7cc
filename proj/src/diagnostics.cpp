#include "pwd/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "pwd/nelder_mead.hpp"
#include "pwd/prob.hpp"
#include "pwd/rng.hpp"

namespace pwd {

namespace {

ResidualSet scale_residuals(const MCDataset& data, double alpha, double beta,
                            const Eigen::VectorXd& variance, double ci_level) {
    const int n = data.n();
    ResidualSet out;
    out.e = data.y() - alpha * Eigen::VectorXd::Ones(n) - beta * data.x();
    out.r.resize(n);
    for (int i = 0; i < n; ++i) {
        if (!(variance[i] > 0.0) || !std::isfinite(variance[i]))
            throw DegenerateFitError("residuals: nonpositive variance estimate at sample id " +
                                     std::to_string(data.index()[static_cast<size_t>(i)]));
        out.r[i] = out.e[i] / std::sqrt(variance[i]);
    }
    const double df = n - 2;
    out.sd_r = std::sqrt(out.r.squaredNorm() / df);
    const double a = 0.5 * (1.0 - ci_level);
    const double chi_hi = chi_squared_quantile(1.0 - a, df);
    const double chi_lo = chi_squared_quantile(a, df);
    out.sd_r_ci = {out.sd_r * std::sqrt(df / chi_hi), out.sd_r * std::sqrt(df / chi_lo)};
    return out;
}

}  // namespace

ResidualSet residuals(const MCDataset& data, const DemingFit& fit, double ci_level) {
    if (!fit.converged) throw DomainError("residuals: fit did not converge");
    const int n = data.n();
    Eigen::VectorXd variance(n);
    for (int i = 0; i < n; ++i) {
        const double g = fit.profile_x(fit.mu_hat[i]);
        const double h = fit.profile_y(fit.alpha + fit.beta * fit.mu_hat[i]);
        variance[i] = h + g * fit.beta * fit.beta;
    }
    return scale_residuals(data, fit.alpha, fit.beta, variance, ci_level);
}

ResidualSet residuals(const MCDataset& data, const RLFit& fit, double ci_level) {
    if (!fit.converged) throw DomainError("residuals: fit did not converge");
    const int n = data.n();
    const double s2 = fit.sigma * fit.sigma;
    const double k2 = fit.kappa * fit.kappa;
    Eigen::VectorXd variance(n);
    for (int i = 0; i < n; ++i) {
        const double x = data.x()[i];
        const double t = fit.alpha + fit.beta * x;
        variance[i] =
            fit.lambda * fit.beta * fit.beta * (s2 + k2 * x * x) + s2 + k2 * t * t;
    }
    return scale_residuals(data, fit.alpha, fit.beta, variance, ci_level);
}

ResidualProfileFit fit_residual_profile(const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
    const auto n = x.size();
    if (n < 4) throw DataError("fit_residual_profile: need at least 4 samples");
    if (r.size() != n) throw DataError("fit_residual_profile: x and r lengths differ");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(x[i] > 0.0)) throw DataError("fit_residual_profile: x must be strictly positive");

    const double msq = r.squaredNorm() / static_cast<double>(n);
    if (!(msq > 0.0))
        throw DegenerateFitError("fit_residual_profile: residuals are identically zero");
    const double pooled_sd = std::sqrt(msq);
    const double pooled_cv = std::sqrt((r.array() / x.array()).square().mean());
    const double log_x2_sum = 2.0 * x.array().log().sum();
    const double nn = static_cast<double>(n);

    // Restricted -2 log likelihoods at the one-parameter MLEs.
    const double l_const_sd = nn + nn * std::log(msq);
    const double l_const_cv = nn + nn * std::log(pooled_cv * pooled_cv) + log_x2_sum;

    // Unrestricted fit over (s, k) with variance s^2 + k^2 x^2; the sign of
    // s and k is irrelevant, which keeps the zero boundaries interior.
    auto objective = [&](const Eigen::VectorXd& p) {
        const Eigen::ArrayXd v = p[0] * p[0] + p[1] * p[1] * x.array().square();
        if ((v <= 0.0).any()) return 1e300;
        return (r.array().square() / v + v.log()).sum();
    };
    NelderMeadOptions nm;
    nm.max_evaluations = 2000;
    nm.diameter_tol = 1e-10;
    const double xm = x.mean();
    nm.scale = Eigen::Vector2d{std::max(pooled_sd, 1e-12), std::max(pooled_cv, 1e-12 / xm)};
    const Eigen::Vector2d starts[3] = {
        {0.7 * pooled_sd, 0.7 * pooled_cv},
        {pooled_sd, 0.1 * pooled_cv},
        {0.1 * pooled_sd, pooled_cv},
    };
    double best_val = 1e300;
    Eigen::VectorXd best_x = starts[0];
    for (const auto& s0 : starts) {
        NelderMeadOptions o = nm;
        o.initial_step = (0.4 * s0.array().abs() + 1e-8 * nm.scale.array()).matrix();
        const NelderMeadResult res = nelder_mead(objective, s0, o);
        if (res.value < best_val) {
            best_val = res.value;
            best_x = res.x;
        }
    }

    ResidualProfileFit fit;
    fit.sigma_r = std::abs(best_x[0]);
    fit.kappa_r = std::abs(best_x[1]);
    fit.minus2_log_lik = best_val;
    // A restricted point can only beat the unrestricted optimum through
    // numerical slack; absorb it rather than report a negative statistic.
    if (l_const_sd < fit.minus2_log_lik) {
        fit.sigma_r = pooled_sd;
        fit.kappa_r = 0.0;
        fit.minus2_log_lik = l_const_sd;
    }
    if (l_const_cv < fit.minus2_log_lik) {
        fit.sigma_r = 0.0;
        fit.kappa_r = pooled_cv;
        fit.minus2_log_lik = l_const_cv;
    }

    double stat_sd = l_const_sd - fit.minus2_log_lik;
    double stat_cv = l_const_cv - fit.minus2_log_lik;
    if (stat_sd < 0.0) {
        stat_sd = 0.0;
        fit.lr_clamped_sd = true;
    }
    if (stat_cv < 0.0) {
        stat_cv = 0.0;
        fit.lr_clamped_cv = true;
    }
    fit.p_const_sd = chi_squared_tail(stat_sd, 1.0);
    fit.p_const_cv = chi_squared_tail(stat_cv, 1.0);
    return fit;
}

Eigen::VectorXd blom_normal_quantiles(int n) {
    Eigen::VectorXd q(n);
    for (int i = 1; i <= n; ++i)
        q[i - 1] = normal_quantile((i - 0.375) / (n + 0.25));
    return q;
}

double qq_correlation(const Eigen::VectorXd& r) {
    Eigen::VectorXd sorted = r;
    std::sort(sorted.data(), sorted.data() + sorted.size());
    return pearson(sorted, blom_normal_quantiles(static_cast<int>(r.size())));
}

Eigen::VectorXd qq_reference_correlations(int n, std::uint64_t seed, int m) {
    if (n < 10) throw DataError("qq reference: need n >= 10");
    const Eigen::VectorXd blom = blom_normal_quantiles(n);
    const double blom_norm = std::sqrt((blom.array() - blom.mean()).square().sum());
    Eigen::VectorXd ref(m);
    Eigen::VectorXd sample(n);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i)
            sample[i] = rng::standard_normal(seed, static_cast<std::uint64_t>(j), i, 2);
        std::sort(sample.data(), sample.data() + n);
        const Eigen::ArrayXd sc = sample.array() - sample.mean();
        ref[j] = (sc * (blom.array() - blom.mean())).sum() /
                 (std::sqrt(sc.square().sum()) * blom_norm);
    }
    std::sort(ref.data(), ref.data() + m);
    return ref;
}

double qq_p_from_reference(double correlation, const Eigen::VectorXd& sorted_reference) {
    const auto m = sorted_reference.size();
    const auto below = std::upper_bound(sorted_reference.data(), sorted_reference.data() + m,
                                        correlation) -
                       sorted_reference.data();
    return (static_cast<double>(below) + 1.0) / (static_cast<double>(m) + 1.0);
}

QQNormality qq_normality(const Eigen::VectorXd& r, std::uint64_t seed, int reference_samples) {
    if (r.size() < 10) throw DataError("qq_normality: need at least 10 residuals");
    const double sd = std::sqrt((r.array() - r.mean()).square().sum());
    if (!(sd > 0.0)) throw DomainError("qq_normality: correlation undefined for constant input");
    const double corr = qq_correlation(r);
    const Eigen::VectorXd ref =
        qq_reference_correlations(static_cast<int>(r.size()), seed, reference_samples);
    return {corr, qq_p_from_reference(corr, ref)};
}

}  // namespace pwd
