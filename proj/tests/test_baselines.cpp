#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pwd/baselines.hpp"
#include "pwd/deming.hpp"
#include "pwd/simlab.hpp"
#include "support/oracles.hpp"

using pwd::MCDataset;

namespace {

MCDataset make(std::initializer_list<double> xs, std::initializer_list<double> ys) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(xs.size()));
    Eigen::VectorXd y(static_cast<Eigen::Index>(ys.size()));
    int i = 0;
    for (double v : xs) x[i++] = v;
    i = 0;
    for (double v : ys) y[i++] = v;
    return {x, y};
}

pwd::SimDesign ccv_design(double alpha, double beta, std::uint64_t seed, int n = 120) {
    pwd::SimDesign d;
    d.n = n;
    d.mu_low = 1.0;
    d.mu_high = 10.0;
    d.alpha_true = alpha;
    d.beta_true = beta;
    d.profile_x = pwd::PrecisionProfile::constant_cv(0.2);
    d.profile_y = d.profile_x;
    d.replicates = 1;
    d.seed = seed;
    d.estimators = {pwd::EstimatorKind::LinnetUnit};
    return d;
}

}  // namespace

TEST_CASE("passing-bablok recovers an exact line with a degenerate-width CI") {
    const MCDataset d = make({1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                             {2, 4, 6, 8, 10, 12, 14, 16, 18, 20});
    const pwd::BaselineFit f = pwd::passing_bablok(d);
    CHECK(f.beta == doctest::Approx(2.0));
    CHECK(f.alpha == doctest::Approx(0.0).scale(1.0));
    CHECK(f.ci_beta->lo == doctest::Approx(2.0));
    CHECK(f.ci_beta->hi == doctest::Approx(2.0));
}

TEST_CASE("passing-bablok slope equals exhaustive shifted-median enumeration") {
    // Brute-force oracle on arbitrary data: enumerate every pairwise slope,
    // drop undefined ones and exact -1, offset the median by the count below -1.
    const MCDataset d = make({3.2, 1.1, 4.8, 2.9, 7.5, 5.0, 6.1, 9.9, 8.2, 0.7},
                             {4.0, 1.9, 6.2, 3.1, 9.9, 6.6, 8.0, 12.1, 10.5, 1.2});
    const pwd::BaselineFit f = pwd::passing_bablok(d);

    std::vector<double> slopes;
    for (int i = 0; i < d.n(); ++i)
        for (int j = i + 1; j < d.n(); ++j) {
            const double dx = d.x()[j] - d.x()[i];
            if (dx == 0.0) continue;
            const double s = (d.y()[j] - d.y()[i]) / dx;
            if (s != -1.0) slopes.push_back(s);
        }
    std::sort(slopes.begin(), slopes.end());
    const int N = static_cast<int>(slopes.size());
    int K = 0;
    for (double s : slopes)
        if (s < -1.0) ++K;
    double expected;
    if (N % 2 == 1)
        expected = slopes[static_cast<size_t>((N + 1) / 2 + K - 1)];
    else
        expected = 0.5 * (slopes[static_cast<size_t>(N / 2 + K - 1)] +
                          slopes[static_cast<size_t>(N / 2 + K)]);
    CHECK(f.beta == doctest::Approx(expected).epsilon(1e-15));

    std::vector<double> res(static_cast<size_t>(d.n()));
    for (int i = 0; i < d.n(); ++i) res[static_cast<size_t>(i)] = d.y()[i] - expected * d.x()[i];
    std::sort(res.begin(), res.end());
    const double med = 0.5 * (res[4] + res[5]);
    CHECK(f.alpha == doctest::Approx(med).epsilon(1e-15));
}

TEST_CASE("passing-bablok is scale equivariant and order invariant") {
    const MCDataset d = make({3.2, 1.1, 4.8, 2.9, 7.5, 5.0, 6.1, 9.9, 8.2, 0.7},
                             {4.0, 1.9, 6.2, 3.1, 9.9, 6.6, 8.0, 12.1, 10.5, 1.2});
    const pwd::BaselineFit f = pwd::passing_bablok(d);

    const double c = 3.0;
    const MCDataset scaled(Eigen::VectorXd(d.x()), Eigen::VectorXd(c * d.y()));
    const pwd::BaselineFit fs = pwd::passing_bablok(scaled);
    CHECK(fs.beta == doctest::Approx(c * f.beta).epsilon(4e-16));
    CHECK(fs.alpha == doctest::Approx(c * f.alpha).epsilon(4e-16));

    std::vector<int> perm(static_cast<size_t>(d.n()));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(7);
    std::shuffle(perm.begin(), perm.end(), rng);
    const MCDataset shuffled = d.at_positions(perm);
    const pwd::BaselineFit fp = pwd::passing_bablok(shuffled);
    CHECK(fp.beta == f.beta);
    CHECK(fp.alpha == f.alpha);
}

TEST_CASE("passing-bablok needs enough data") {
    const MCDataset d = make({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5});
    CHECK_THROWS_AS(pwd::passing_bablok(d), pwd::DataError);
}

TEST_CASE("linnet recovers exact identity data") {
    const MCDataset d = make({1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 6});
    const pwd::BaselineFit f = pwd::linnet_ccv(d, 1.0);
    CHECK(f.alpha == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(f.beta == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("linnet rejects nonpositive readings") {
    const MCDataset d = make({1, 2, 3, 4, -1, 6}, {1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(pwd::linnet_ccv(d, 1.0), pwd::DataError);
}

TEST_CASE("ml constant-cv equals the known-profile fit with CV profiles") {
    const pwd::SimDesign design = ccv_design(0.0, 1.0, 31, 60);
    const MCDataset data = pwd::generate(design, 0);
    const double lambda = 2.5;
    const pwd::BaselineFit f = pwd::ml_constant_cv(data, lambda);
    const pwd::DemingFit ref =
        pwd::fit_known(data, pwd::PrecisionProfile::constant_cv(1.0),
                       pwd::scale(pwd::PrecisionProfile::constant_cv(1.0), 1.0 / lambda));
    CHECK(f.alpha == doctest::Approx(ref.alpha).epsilon(1e-8));
    CHECK(f.beta == doctest::Approx(ref.beta).epsilon(1e-8));
}

TEST_CASE("ml constant-cv satisfies the frozen-weight stationarity equations") {
    const pwd::SimDesign design = ccv_design(2.0, 1.5, 57, 40);
    const MCDataset data = pwd::generate(design, 0);
    const double lambda = 1.0;
    const pwd::BaselineFit f = pwd::ml_constant_cv(data, lambda);

    // Latent updates at the fit, literal transcription: mu on both sides,
    // iterated to a fixed point.
    const int n = data.n();
    Eigen::VectorXd mu = data.x();
    for (int it = 0; it < 2000; ++it) {
        for (int i = 0; i < n; ++i) {
            const double g = mu[i] * mu[i];
            const double h = (f.alpha + f.beta * mu[i]) * (f.alpha + f.beta * mu[i]) / lambda;
            mu[i] = (h * data.x()[i] + lambda * f.beta * g * (data.y()[i] - f.alpha)) /
                    (h + lambda * f.beta * f.beta * g);
        }
    }
    // Weighted least squares of y on mu with weights lambda/(alpha+beta*mu)^2
    // must return the fit itself.
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
        const double t = f.alpha + f.beta * mu[i];
        w[i] = lambda / (t * t);
    }
    const auto [a2, b2] = oracle::wls_closed_form(mu, data.y(), w);
    CHECK(a2 == doctest::Approx(f.alpha).epsilon(1e-7));
    CHECK(b2 == doctest::Approx(f.beta).epsilon(1e-7));
}

TEST_CASE("linnet and ml agree near the identity but diverge off it") {
    // Identity design: the two estimators should track each other closely.
    double lin_id = 0.0, ml_id = 0.0;
    int reps = 40;
    for (int r = 0; r < reps; ++r) {
        const MCDataset d = pwd::generate(ccv_design(0.0, 1.0, 900), r);
        const pwd::BaselineFit lin = pwd::linnet_ccv(d, 1.0);
        const pwd::BaselineFit ml = pwd::ml_constant_cv(d, 1.0);
        lin_id += std::abs(lin.beta - ml.beta);
        ml_id += 1.0;
    }
    CHECK(lin_id / reps < 0.02);

    // Non-identity design: Linnet's consensus weights bias both parameters;
    // its RMSE must be well above the ML fit's.
    double lin_sq_a = 0.0, ml_sq_a = 0.0, lin_sq_b = 0.0, ml_sq_b = 0.0;
    reps = 60;
    for (int r = 0; r < reps; ++r) {
        const MCDataset d = pwd::generate(ccv_design(2.0, 1.5, 901), r);
        const pwd::BaselineFit lin = pwd::linnet_ccv(d, 1.0);
        const pwd::BaselineFit ml = pwd::ml_constant_cv(d, 1.0);
        lin_sq_a += (lin.alpha - 2.0) * (lin.alpha - 2.0);
        lin_sq_b += (lin.beta - 1.5) * (lin.beta - 1.5);
        ml_sq_a += (ml.alpha - 2.0) * (ml.alpha - 2.0);
        ml_sq_b += (ml.beta - 1.5) * (ml.beta - 1.5);
    }
    CHECK(lin_sq_a > 2.0 * ml_sq_a);
    CHECK(lin_sq_b > 2.0 * ml_sq_b);
}
