#pragma once

// Derivative-free simplex minimizer (Nelder-Mead with the standard
// reflect/expand/contract/shrink moves). Convergence is declared when the
// simplex diameter, measured in caller-supplied coordinate scales, falls
// below the tolerance.

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace pwd {

struct NelderMeadOptions {
    int max_evaluations = 2000;
    double diameter_tol = 1e-9;
    Eigen::VectorXd initial_step;  // per-coordinate; empty -> 0.1*(1+|x0|)
    Eigen::VectorXd scale;         // per-coordinate diameter scale; empty -> 1
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& start,
                                    const NelderMeadOptions& opt = {}) {
    const int d = static_cast<int>(start.size());
    Eigen::VectorXd step = opt.initial_step.size() == d
                               ? opt.initial_step
                               : Eigen::VectorXd(0.1 * (1.0 + start.array().abs()));
    Eigen::VectorXd scale = opt.scale.size() == d ? opt.scale : Eigen::VectorXd::Ones(d);

    std::vector<Eigen::VectorXd> v(d + 1, start);
    std::vector<double> fv(d + 1);
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x);
    };
    for (int i = 1; i <= d; ++i) v[i](i - 1) += step(i - 1);
    for (int i = 0; i <= d; ++i) fv[i] = eval(v[i]);

    std::vector<int> ord(d + 1);
    NelderMeadResult res;
    while (true) {
        std::iota(ord.begin(), ord.end(), 0);
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const int best = ord[0], worst = ord[d], second = ord[d - 1];

        double diam = 0.0;
        for (int i = 0; i <= d; ++i)
            diam = std::max(diam, ((v[i] - v[best]).cwiseQuotient(scale)).cwiseAbs().maxCoeff());
        if (diam < opt.diameter_tol) {
            res.converged = true;
            break;
        }
        if (evals >= opt.max_evaluations) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (int i = 0; i <= d; ++i)
            if (i != worst) centroid += v[i];
        centroid /= d;

        const Eigen::VectorXd xr = centroid + (centroid - v[worst]);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - v[worst]);
            const double fe = eval(xe);
            if (fe < fr) {
                v[worst] = xe;
                fv[worst] = fe;
            } else {
                v[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            v[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const Eigen::VectorXd xc =
                outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                        : Eigen::VectorXd(centroid - 0.5 * (centroid - v[worst]));
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[worst])) {
                v[worst] = xc;
                fv[worst] = fc;
            } else {
                for (int i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    v[i] = v[best] + 0.5 * (v[i] - v[best]);
                    fv[i] = eval(v[i]);
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= d; ++i)
        if (fv[i] < fv[best]) best = i;
    res.x = v[best];
    res.value = fv[best];
    res.evaluations = evals;
    return res;
}

}  // namespace pwd
