#pragma once

// Scalar probability functions used across the library: standard normal
// cdf/quantile and the chi-squared family via the regularized incomplete
// gamma function. Double precision throughout.

#include <cmath>
#include <limits>

#include "pwd/errors.hpp"

namespace pwd {

inline double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244008444);
}

// Upper tail P(Z > x), accurate for large x where 1 - cdf would cancel.
inline double normal_tail(double x) {
    return 0.5 * std::erfc(x * 0.7071067811865475244008444);
}

namespace detail {

// Lower-tail solve, p <= 0.5: Abramowitz-Stegun 26.2.23 start (|err| < 4.5e-4)
// polished by Halley steps on the exact cdf. Working in the tail keeps full
// relative precision; the upper tail is handled by reflection.
inline double normal_quantile_lower(double p) {
    const double t = std::sqrt(-2.0 * std::log(p));
    double x = -(t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t)));
    for (int i = 0; i < 4; ++i) {
        const double err = normal_cdf(x) - p;
        const double d = normal_pdf(x);
        if (d <= 0.0) break;
        const double u = err / d;
        x -= u / (1.0 + 0.5 * x * u);  // Halley; f''/f' = -x
    }
    return x;
}

}  // namespace detail

inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
    if (p == 0.5) return 0.0;
    return p < 0.5 ? detail::normal_quantile_lower(p) : -detail::normal_quantile_lower(1.0 - p);
}

namespace detail {

// Regularized lower incomplete gamma by series expansion, for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by Lentz continued fraction, for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Regularized lower incomplete gamma P(a, x).
inline double gamma_p(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || !std::isfinite(x))
        throw DomainError("gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || !std::isfinite(x))
        throw DomainError("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

inline double chi_squared_cdf(double x, double df) {
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * df, 0.5 * x);
}

inline double chi_squared_tail(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

inline double chi_squared_pdf(double x, double df) {
    if (x <= 0.0) return 0.0;
    const double a = 0.5 * df;
    return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

// Inverse chi-squared cdf: Wilson-Hilferty start, Newton on the cdf with a
// bisection bracket as safeguard.
inline double chi_squared_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("chi_squared_quantile: p must lie in (0, 1)");
    if (!(df > 0.0)) throw DomainError("chi_squared_quantile: df must be positive");
    const double z = normal_quantile(p);
    const double c = 2.0 / (9.0 * df);
    double x = df * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
    if (!(x > 0.0)) x = 0.5 * df * std::exp((std::log(p) + std::lgamma(0.5 * df)) / (0.5 * df));
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
        const double err = chi_squared_cdf(x, df) - p;
        if (err > 0.0) hi = x; else lo = x;
        const double d = chi_squared_pdf(x, df);
        double step = d > 0.0 ? err / d : 0.0;
        double xn = x - step;
        if (!(xn > lo && (xn < hi))) {
            xn = std::isfinite(hi) ? 0.5 * (lo + hi) : (lo > 0.0 ? 2.0 * lo : 1.0);
        }
        if (std::abs(xn - x) <= 1e-14 * (1.0 + std::abs(x))) { x = xn; break; }
        x = xn;
    }
    return x;
}

}  // namespace pwd
