#include "pwd/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pwd/deming.hpp"
#include "pwd/prob.hpp"

namespace pwd {

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    if (n == 0) throw DegenerateFitError("median of empty set");
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double median_shifted_residual(const MCDataset& data, double beta) {
    std::vector<double> r(static_cast<size_t>(data.n()));
    for (int i = 0; i < data.n(); ++i) r[static_cast<size_t>(i)] = data.y()[i] - beta * data.x()[i];
    return median_of(std::move(r));
}

}  // namespace

BaselineFit passing_bablok(const MCDataset& data, double level) {
    const int n = data.n();
    if (n < 10) throw DataError("passing_bablok: need at least 10 samples");
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("passing_bablok: level must lie in (0, 1)");

    std::vector<double> s;
    s.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = data.x()[j] - data.x()[i];
            if (dx == 0.0) continue;  // undefined pairwise slope
            const double sij = (data.y()[j] - data.y()[i]) / dx;
            if (sij == -1.0) continue;
            s.push_back(sij);
        }
    }
    if (s.size() < 3) throw DegenerateFitError("passing_bablok: too few valid pairwise slopes");
    std::sort(s.begin(), s.end());
    const int N = static_cast<int>(s.size());
    const int K = static_cast<int>(std::lower_bound(s.begin(), s.end(), -1.0) - s.begin());

    auto at_rank = [&](int rank) {  // 1-based
        if (rank < 1 || rank > N)
            throw DegenerateFitError("passing_bablok: shifted slope rank out of range");
        return s[static_cast<size_t>(rank - 1)];
    };
    double beta;
    if (N % 2 == 1) {
        beta = at_rank((N + 1) / 2 + K);
    } else {
        beta = 0.5 * (at_rank(N / 2 + K) + at_rank(N / 2 + 1 + K));
    }
    if (beta == 0.0) throw DegenerateFitError("passing_bablok: zero fitted slope");

    const double z = normal_quantile(0.5 * (1.0 + level));
    const double c = z * std::sqrt(static_cast<double>(n) * (n - 1) * (2.0 * n + 5.0) / 18.0);
    const int m1 = std::max(1, static_cast<int>(std::lround((N - c) / 2.0)));
    const int m2 = N - m1 + 1;
    const double beta_lo = at_rank(std::clamp(m1 + K, 1, N));
    const double beta_hi = at_rank(std::clamp(m2 + K, 1, N));

    BaselineFit fit;
    fit.method = BaselineMethod::PassingBablok;
    fit.beta = beta;
    fit.alpha = median_shifted_residual(data, beta);
    fit.ci_beta = Interval{beta_lo, beta_hi};
    fit.ci_alpha = Interval{median_shifted_residual(data, beta_hi),
                            median_shifted_residual(data, beta_lo)};
    return fit;
}

BaselineFit linnet_ccv(const MCDataset& data, double lambda) {
    const int n = data.n();
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError("linnet_ccv: lambda must be positive and finite");
    for (int i = 0; i < n; ++i)
        if (data.x()[i] <= 0.0 || data.y()[i] <= 0.0)
            throw DataError("linnet_ccv: constant-CV model needs strictly positive readings");

    const Eigen::VectorXd& x = data.x();
    const Eigen::VectorXd& y = data.y();
    const double y_scale = std::max(std::sqrt((y.array() - y.mean()).square().mean()), 1e-12);

    double alpha = 0.0, beta = 1.0;
    const int max_iterations = 500;
    bool converged = false;
    for (int it = 0; it < max_iterations; ++it) {
        const Eigen::ArrayXd e = y.array() - alpha - beta * x.array();
        const double den = 1.0 + lambda * beta * beta;
        // Angular projection onto the current line gives the estimated means;
        // their average is the consensus weight base.
        const Eigen::ArrayXd xm = x.array() + lambda * beta * e / den;
        const Eigen::ArrayXd ym = y.array() - e / den;
        const Eigen::ArrayXd c = 0.5 * (xm + ym);
        if ((c <= 0.0).any())
            throw DegenerateFitError("linnet_ccv: nonpositive consensus mean during iteration");
        const Eigen::ArrayXd w = c.square().inverse();

        const double sw = w.sum();
        const double mx = (w * x.array()).sum() / sw;
        const double my = (w * y.array()).sum() / sw;
        const Eigen::ArrayXd xc = x.array() - mx;
        const Eigen::ArrayXd yc = y.array() - my;
        const double u = (w * xc.square()).sum();
        const double q = (w * yc.square()).sum();
        const double p = (w * xc * yc).sum();
        const double beta_next = deming_slope(u, q, p, lambda);
        const double alpha_next = my - beta_next * mx;

        const double d_alpha = std::abs(alpha_next - alpha);
        const double d_beta = std::abs(beta_next - beta);
        alpha = alpha_next;
        beta = beta_next;
        if (std::max(d_alpha / y_scale, d_beta) < 1e-10) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("linnet_ccv: no convergence after 500 iterations", alpha, beta);
    if (beta == 0.0) throw DegenerateFitError("linnet_ccv: zero fitted slope");

    BaselineFit fit;
    fit.method = BaselineMethod::LinnetCCV;
    fit.alpha = alpha;
    fit.beta = beta;
    fit.lambda = lambda;
    return fit;
}

BaselineFit ml_constant_cv(const MCDataset& data, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError("ml_constant_cv: lambda must be positive and finite");
    for (int i = 0; i < data.n(); ++i)
        if (data.x()[i] <= 0.0 || data.y()[i] <= 0.0)
            throw DataError("ml_constant_cv: constant-CV model needs strictly positive readings");

    // The constant-CV likelihood is the known-profile fit with g = mu^2 and
    // h = (alpha + beta*mu)^2 / lambda.
    const PrecisionProfile g = PrecisionProfile::constant_cv(1.0);
    const PrecisionProfile h = g.scaled(1.0 / lambda);
    const DemingFit f = fit_known(data, g, h);

    BaselineFit fit;
    fit.method = BaselineMethod::MLConstantCV;
    fit.alpha = f.alpha;
    fit.beta = f.beta;
    fit.lambda = lambda;
    return fit;
}

}  // namespace pwd
