#include "pwd/deming.hpp"

#include <cmath>
#include <string>

namespace pwd {

LineFit ols_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const Eigen::VectorXd xc = x.array() - x.mean();
    const double sxx = xc.squaredNorm();
    if (sxx <= 0.0) throw DegenerateFitError("regression undefined: all x equal");
    const double beta = xc.dot(y) / sxx;
    return {y.mean() - beta * x.mean(), beta};
}

LineFit wls_line(const Eigen::VectorXd& mu, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
    const double sw = w.sum();
    if (!(sw > 0.0)) throw DegenerateFitError("weighted regression: nonpositive total weight");
    const double mx = w.dot(mu) / sw;
    const double my = w.dot(y) / sw;
    const Eigen::ArrayXd xc = mu.array() - mx;
    const double sxx = (w.array() * xc * xc).sum();
    if (!(sxx > 0.0))
        throw DegenerateFitError("weighted regression undefined: no spread in the regressor");
    const double beta = (w.array() * xc * (y.array() - my)).sum() / sxx;
    return {my - beta * mx, beta};
}

double latent_mu(double x, double y, double alpha, double beta, double g_i, double h_i) {
    const double denom = h_i + g_i * beta * beta;
    if (!(denom > 0.0) || !std::isfinite(denom))
        throw DegenerateFitError("latent value undefined: h + g*beta^2 is not positive");
    return (h_i * x + g_i * beta * (y - alpha)) / denom;
}

double deming_slope(double u, double q, double p, double r) {
    if (p == 0.0) throw DegenerateFitError("Deming slope undefined: zero covariance");
    const double a = u - r * q;
    const double disc = std::sqrt(a * a + 4.0 * r * p * p);
    const double sgn = p > 0.0 ? 1.0 : -1.0;
    return (-a + sgn * disc) / (2.0 * r * p);
}

LineFit classical_deming(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double var_x,
                         double var_y) {
    if (!(var_x > 0.0) || !(var_y > 0.0))
        throw DomainError("classical Deming: error variances must be positive");
    const Eigen::VectorXd xc = x.array() - x.mean();
    const Eigen::VectorXd yc = y.array() - y.mean();
    const double beta =
        deming_slope(xc.squaredNorm(), yc.squaredNorm(), xc.dot(yc), var_x / var_y);
    return {y.mean() - beta * x.mean(), beta};
}

namespace {

// Evaluates both profiles at the current state; throws if any variance is
// not strictly positive somewhere over the data range.
void eval_profiles(const MCDataset& data, double alpha, double beta, const Eigen::VectorXd& mu,
                   const PrecisionProfile& gx, const PrecisionProfile& hy, Eigen::VectorXd& g,
                   Eigen::VectorXd& h) {
    for (int i = 0; i < data.n(); ++i) {
        g[i] = gx(mu[i]);
        h[i] = hy(alpha + beta * mu[i]);
        if (!(g[i] > 0.0) || !(h[i] > 0.0) || !std::isfinite(g[i]) || !std::isfinite(h[i]))
            throw DegenerateFitError("profile variance not positive at sample id " +
                                     std::to_string(data.index()[static_cast<size_t>(i)]));
    }
}

double frozen_objective(const MCDataset& data, double alpha, double beta,
                        const Eigen::VectorXd& mu, const Eigen::VectorXd& g,
                        const Eigen::VectorXd& h) {
    const Eigen::ArrayXd ex = data.x().array() - mu.array();
    const Eigen::ArrayXd ey = data.y().array() - alpha - beta * mu.array();
    return (ex * ex / g.array() + ey * ey / h.array()).sum();
}

}  // namespace

double known_minus2_log_lik(const MCDataset& data, double alpha, double beta,
                            const Eigen::VectorXd& mu, const PrecisionProfile& gx,
                            const PrecisionProfile& hy) {
    Eigen::VectorXd g(data.n()), h(data.n());
    eval_profiles(data, alpha, beta, mu, gx, hy, g, h);
    return frozen_objective(data, alpha, beta, mu, g, h) + g.array().log().sum() +
           h.array().log().sum();
}

DemingFit fit_known(const MCDataset& data, const PrecisionProfile& gx, const PrecisionProfile& hy,
                    const DemingOptions& options) {
    const int n = data.n();
    const Eigen::VectorXd& x = data.x();
    const Eigen::VectorXd& y = data.y();

    LineFit line = options.start ? *options.start : ols_line(x, y);
    Eigen::VectorXd mu = options.mu_start ? *options.mu_start : x;
    if (mu.size() != n) throw DomainError("fit_known: mu_start has wrong length");

    const double y_scale = std::max(std::sqrt((y.array() - y.mean()).square().mean()), 1e-12);

    Eigen::VectorXd g(n), h(n);
    double loglik_prev = 0.0;
    bool have_prev = false;
    DemingFit fit;
    fit.profile_x = gx;
    fit.profile_y = hy;

    int it = 0;
    bool converged = false;
    for (it = 1; it <= options.max_iterations; ++it) {
        eval_profiles(data, line.alpha, line.beta, mu, gx, hy, g, h);
        const double logsum = g.array().log().sum() + h.array().log().sum();
        const double before = frozen_objective(data, line.alpha, line.beta, mu, g, h);

        for (int i = 0; i < n; ++i)
            mu[i] = latent_mu(x[i], y[i], line.alpha, line.beta, g[i], h[i]);
        const LineFit next = wls_line(mu, y, h.cwiseInverse());

        const double after = frozen_objective(data, next.alpha, next.beta, mu, g, h);
        fit.max_sweep_increase = std::max(fit.max_sweep_increase, after - before);

        const double loglik = after + logsum;
        const double d_alpha = std::abs(next.alpha - line.alpha);
        const double d_beta = std::abs(next.beta - line.beta);
        line = next;
        if (std::max(d_alpha / y_scale, d_beta) < options.tol_coeff && have_prev &&
            std::abs(loglik - loglik_prev) <= options.tol_loglik * (1.0 + std::abs(loglik_prev))) {
            converged = true;
            break;
        }
        loglik_prev = loglik;
        have_prev = true;
    }

    if (!converged)
        throw ConvergenceError("fit_known: no convergence after " +
                                   std::to_string(options.max_iterations) + " iterations",
                               line.alpha, line.beta);
    if (line.beta == 0.0)
        throw DegenerateFitError("fit_known: zero fitted slope");

    fit.alpha = line.alpha;
    fit.beta = line.beta;
    fit.mu_hat = mu;
    fit.minus2_log_lik = known_minus2_log_lik(data, line.alpha, line.beta, mu, gx, hy);
    fit.converged = true;
    fit.iterations = it;
    return fit;
}

}  // namespace pwd
