#pragma once

// Test-side oracles, independent of the library's optimization paths: a
// self-contained simplex minimizer and literal transcriptions of the fit
// objectives, used to cross-check the production fitters.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Plain Nelder-Mead, written independently of pwd::nelder_mead.
inline Eigen::VectorXd simplex_min(const std::function<double(const Eigen::VectorXd&)>& f,
                                   Eigen::VectorXd x0, double step, int max_iter) {
    const int d = static_cast<int>(x0.size());
    std::vector<std::pair<double, Eigen::VectorXd>> s;
    s.reserve(static_cast<size_t>(d) + 1);
    s.emplace_back(f(x0), x0);
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXd v = x0;
        v[i] += step * (1.0 + std::abs(v[i]));
        s.emplace_back(f(v), v);
    }
    for (int it = 0; it < max_iter; ++it) {
        std::sort(s.begin(), s.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
        for (int i = 0; i < d; ++i) c += s[static_cast<size_t>(i)].second;
        c /= d;
        const auto& worst = s.back();
        Eigen::VectorXd xr = c + (c - worst.second);
        double fr = f(xr);
        if (fr < s.front().first) {
            Eigen::VectorXd xe = c + 2.0 * (c - worst.second);
            const double fe = f(xe);
            if (fe < fr) s.back() = {fe, xe};
            else s.back() = {fr, xr};
        } else if (fr < s[static_cast<size_t>(d - 1)].first) {
            s.back() = {fr, xr};
        } else {
            Eigen::VectorXd xc = c + 0.5 * (worst.second - c);
            const double fc = f(xc);
            if (fc < worst.first) {
                s.back() = {fc, xc};
            } else {
                for (size_t i = 1; i < s.size(); ++i) {
                    s[i].second = s.front().second + 0.5 * (s[i].second - s.front().second);
                    s[i].first = f(s[i].second);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return s.front().second;
}

// Repeated restarts with a shrinking initial step recover from simplex
// collapse in higher dimensions.
inline Eigen::VectorXd simplex_min_restarts(const std::function<double(const Eigen::VectorXd&)>& f,
                                            Eigen::VectorXd x0, double step, int max_iter,
                                            int rounds) {
    Eigen::VectorXd x = std::move(x0);
    for (int r = 0; r < rounds; ++r) {
        x = simplex_min(f, x, step, max_iter);
        step *= 0.5;
    }
    return x;
}

// Literal Eq-8 objective over the full parameter vector
// (sigma, kappa, alpha, beta, mu_1..mu_n); lambda scales only the x quadratic.
inline double eq8_full(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double sigma,
                       double kappa, double alpha, double beta, double lambda,
                       const Eigen::VectorXd& mu) {
    double total = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        const double gv = sigma * sigma + kappa * kappa * mu[i] * mu[i];
        const double t = alpha + beta * mu[i];
        const double hv = sigma * sigma + kappa * kappa * t * t;
        const double ex = x[i] - mu[i];
        const double ey = y[i] - t;
        total += ex * ex / (lambda * gv) + ey * ey / hv + std::log(gv * hv);
    }
    return total;
}

// Eq-3 objective with the variance weights held fixed.
inline double eq3_frozen(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double alpha,
                         double beta, const Eigen::VectorXd& mu, const Eigen::VectorXd& g,
                         const Eigen::VectorXd& h) {
    double total = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        const double ex = x[i] - mu[i];
        const double ey = y[i] - alpha - beta * mu[i];
        total += ex * ex / g[i] + ey * ey / h[i] + std::log(g[i]) + std::log(h[i]);
    }
    return total;
}

// Closed-form weighted least squares of y on x with weights w.
inline std::pair<double, double> wls_closed_form(const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& y,
                                                 const Eigen::VectorXd& w) {
    const double sw = w.sum();
    const double mx = w.dot(x) / sw;
    const double my = w.dot(y) / sw;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    const double beta = sxy / sxx;
    return {my - beta * mx, beta};
}

}  // namespace oracle
