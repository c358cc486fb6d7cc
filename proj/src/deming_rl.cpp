#include "pwd/deming_rl.hpp"

#include <cmath>
#include <string>

#include "pwd/deming.hpp"
#include "pwd/nelder_mead.hpp"

namespace pwd {

namespace {

struct Summand {
    double x, y, lambda;
    double s2, k2, alpha, beta;

    double value(double m) const {
        const double gv = s2 + k2 * m * m;
        const double t = alpha + beta * m;
        const double hv = s2 + k2 * t * t;
        const double u = x - m;
        const double e = y - t;
        return u * u / (lambda * gv) + e * e / hv + std::log(gv) + std::log(hv);
    }

    double deriv(double m) const {
        const double gv = s2 + k2 * m * m;
        const double t = alpha + beta * m;
        const double hv = s2 + k2 * t * t;
        const double u = x - m;
        const double e = y - t;
        return -2.0 * u / (lambda * gv) - 2.0 * k2 * m * (u * u / (lambda * gv * gv) - 1.0 / gv) -
               2.0 * beta * e / hv - 2.0 * beta * k2 * t * (e * e / (hv * hv) - 1.0 / hv);
    }

    double deriv2(double m) const {
        const double gv = s2 + k2 * m * m;
        const double t = alpha + beta * m;
        const double hv = s2 + k2 * t * t;
        const double u = x - m;
        const double e = y - t;
        const double gv2 = gv * gv, gv3 = gv2 * gv;
        const double hv2 = hv * hv, hv3 = hv2 * hv;
        const double b2 = beta * beta;
        double d = 2.0 / (lambda * gv) + 4.0 * k2 * m * u / (lambda * gv2);
        d += -2.0 * k2 * (u * u - 2.0 * m * u) / (lambda * gv2) +
             8.0 * k2 * k2 * m * m * u * u / (lambda * gv3);
        d += 2.0 * k2 / gv - 4.0 * k2 * k2 * m * m / gv2;
        d += 2.0 * b2 / hv + 4.0 * b2 * k2 * t * e / hv2;
        d += -2.0 * b2 * k2 * (e * e - 2.0 * t * e) / hv2 + 8.0 * b2 * k2 * k2 * t * t * e * e / hv3;
        d += 2.0 * b2 * k2 / hv - 4.0 * b2 * k2 * k2 * t * t / hv2;
        return d;
    }
};

double minimize_summand(const Summand& s) {
    // Candidate starts: the fixed-variance closed form, the x reading itself,
    // and the y reading mapped through the line.
    const double gq = s.lambda * (s.s2 + s.k2 * s.x * s.x);
    const double tq = s.alpha + s.beta * s.x;
    const double hq = s.s2 + s.k2 * tq * tq;
    const double denom = hq + gq * s.beta * s.beta;
    double m = denom > 0.0 ? (hq * s.x + gq * s.beta * (s.y - s.alpha)) / denom : s.x;
    double fm = s.value(m);
    const double cands[2] = {s.x, s.beta != 0.0 ? (s.y - s.alpha) / s.beta : s.x};
    for (double c : cands) {
        const double fc = s.value(c);
        if (fc < fm) {
            m = c;
            fm = fc;
        }
    }

    for (int it = 0; it < 30; ++it) {
        const double d1 = s.deriv(m);
        const double d2 = s.deriv2(m);
        double step = d2 > 0.0 ? d1 / d2 : (d1 > 0.0 ? 1.0 : -1.0) * 0.1 * (1.0 + std::abs(m));
        const double cap = 0.5 * (1.0 + std::abs(m));
        if (step > cap) step = cap;
        if (step < -cap) step = -cap;
        double fn = s.value(m - step);
        int halvings = 0;
        while (fn > fm && halvings < 30) {
            step *= 0.5;
            fn = s.value(m - step);
            ++halvings;
        }
        if (fn > fm) break;
        m -= step;
        fm = fn;
        if (std::abs(step) <= 1e-12 * (1.0 + std::abs(m))) break;
    }
    return m;
}

Summand make_summand(double x, double y, const RLPoint& p, double lambda) {
    return {x, y, lambda, p.sigma * p.sigma, p.kappa * p.kappa, p.alpha, p.beta};
}

}  // namespace

double rl_summand(double x, double y, const RLPoint& p, double lambda, double mu) {
    return make_summand(x, y, p, lambda).value(mu);
}

double rl_latent_mu(double x, double y, const RLPoint& p, double lambda) {
    return minimize_summand(make_summand(x, y, p, lambda));
}

double rl_minus2_log_lik(const MCDataset& data, const RLPoint& p, double lambda,
                         const Eigen::VectorXd& mu) {
    double total = 0.0;
    for (int i = 0; i < data.n(); ++i)
        total += rl_summand(data.x()[i], data.y()[i], p, lambda, mu[i]);
    return total;
}

double rl_profile_objective(const MCDataset& data, const RLPoint& p, double lambda,
                            Eigen::VectorXd* mu_out) {
    if (mu_out) mu_out->resize(data.n());
    double total = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        const Summand s = make_summand(data.x()[i], data.y()[i], p, lambda);
        const double m = minimize_summand(s);
        if (mu_out) (*mu_out)[i] = m;
        total += s.value(m);
    }
    return total;
}

RLFit fit_rl(const MCDataset& data, const RLOptions& options) {
    if (data.n() < 5) throw DataError("fit_rl: need at least 5 samples");
    if (!(options.lambda > 0.0) || !std::isfinite(options.lambda))
        throw DomainError("fit_rl: lambda must be positive and finite");

    const double lambda = options.lambda;
    const double x_scale = std::max(data.x().cwiseAbs().mean(), 1e-300);

    auto unpack = [](const Eigen::VectorXd& v) {
        return RLPoint{std::max(std::exp(v[0]), 1e-100), std::max(std::exp(v[1]), 1e-100), v[2],
                       v[3]};
    };
    auto objective = [&](const Eigen::VectorXd& v) {
        return rl_profile_objective(data, unpack(v), lambda);
    };

    std::vector<Eigen::Vector4d> starts;
    if (options.start) {
        const RLPoint& s = *options.start;
        starts.push_back({std::log(std::max(s.sigma, 1e-12 * x_scale)),
                          std::log(std::max(s.kappa, 1e-12)), s.alpha, s.beta});
    } else {
        const LineFit ols = ols_line(data.x(), data.y());
        const Eigen::ArrayXd resid =
            data.y().array() - ols.alpha - ols.beta * data.x().array();
        double rms = std::sqrt(resid.square().mean());
        rms = std::max(rms, 1e-8 * std::max(data.y().cwiseAbs().mean(), 1.0));
        const double xm = data.x().mean() > 0.0 ? data.x().mean() : x_scale;
        const double sigma0 = 0.5 * rms;
        const double kappa0 = 0.5 * rms / xm;
        const double jit[3][2] = {{1.0, 1.0}, {4.0, 0.25}, {0.25, 4.0}};
        const int k = std::min(std::max(options.multistart, 1), 3);
        for (int s = 0; s < k; ++s)
            starts.push_back({std::log(sigma0 * jit[s][0]), std::log(kappa0 * jit[s][1]),
                              ols.alpha, ols.beta});
    }

    const double y_scale = std::max(
        std::sqrt((data.y().array() - data.y().mean()).square().mean()), 1e-12);
    NelderMeadOptions nm;
    nm.max_evaluations = options.max_evaluations;
    nm.diameter_tol = options.diameter_tol;
    nm.scale = Eigen::Vector4d{1.0, 1.0, y_scale, 1.0};
    nm.initial_step = Eigen::Vector4d{0.3, 0.3, 0.1 * y_scale, 0.02};

    NelderMeadResult best;
    bool have = false;
    int total_evals = 0;
    for (const auto& s0 : starts) {
        const NelderMeadResult r = nelder_mead(objective, s0, nm);
        total_evals += r.evaluations;
        if (!have || r.value < best.value) {
            best = r;
            have = true;
        }
    }

    RLFit fit;
    const RLPoint p = unpack(best.x);
    fit.sigma = p.sigma;
    fit.kappa = p.kappa;
    fit.alpha = p.alpha;
    fit.beta = p.beta;
    fit.lambda = lambda;
    fit.minus2_log_lik = rl_profile_objective(data, p, lambda, &fit.mu_hat);
    fit.evaluations = total_evals;
    fit.sigma_at_boundary = fit.sigma < 1e-8 * x_scale;
    fit.kappa_at_boundary = fit.kappa < 1e-8;
    fit.converged = best.converged || fit.sigma_at_boundary || fit.kappa_at_boundary;
    if (!fit.converged)
        throw ConvergenceError(
            "fit_rl: simplex did not converge within " + std::to_string(total_evals) +
                " evaluations",
            fit.alpha, fit.beta);
    if (fit.beta == 0.0) throw DegenerateFitError("fit_rl: zero fitted slope");
    return fit;
}

}  // namespace pwd
