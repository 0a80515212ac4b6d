#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "netiv/errors.hpp"

namespace netiv {

namespace detail {

// Series expansion of P(a, x), valid for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 2000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a, x), valid for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 2000; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace detail

inline double gamma_p(double a, double x) {
    if (a <= 0.0) throw ParameterError("gamma_p: a must be positive");
    if (x < 0.0) throw ParameterError("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

inline double gamma_q(double a, double x) {
    if (a <= 0.0) throw ParameterError("gamma_q: a must be positive");
    if (x < 0.0) throw ParameterError("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

inline double chi2_cdf(double x, double df) {
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * df, 0.5 * x);
}

inline double chi2_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

inline double chi2_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("chi2_quantile: p must be in (0,1)");
    // Bracket then bisect/Newton on the CDF.
    double lo = 0.0, hi = std::max(df, 1.0);
    while (chi2_cdf(hi, df) < p) hi *= 2.0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double f = chi2_cdf(x, df) - p;
        if (f > 0.0) hi = x; else lo = x;
        // Newton step from the chi2 density; fall back to bisection when it
        // leaves the bracket.
        double pdf = std::exp((0.5 * df - 1.0) * std::log(x) - 0.5 * x -
                              std::lgamma(0.5 * df) - 0.5 * df * std::log(2.0));
        double xn = x - f / pdf;
        x = (pdf > 0.0 && xn > lo && xn < hi) ? xn : 0.5 * (lo + hi);
        if (hi - lo < 1e-13 * std::max(1.0, x)) break;
    }
    return x;
}

inline double normal_two_sided_crit(double alpha) {
    // P(|Z| <= z) = 1 - alpha  <=>  z^2 ~ chi2(1) quantile at 1 - alpha.
    return std::sqrt(chi2_quantile(1.0 - alpha, 1.0));
}

inline double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

template <typename Cdf>
KsResult ks_test(std::vector<double> sample, Cdf cdf) {
    std::sort(sample.begin(), sample.end());
    const std::size_t n = sample.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = cdf(sample[i]);
        double d_plus = (static_cast<double>(i + 1) / n) - f;
        double d_minus = f - (static_cast<double>(i) / n);
        d = std::max({d, d_plus, d_minus});
    }
    double sn = std::sqrt(static_cast<double>(n));
    double lambda = (sn + 0.12 + 0.11 / sn) * d;
    return {d, kolmogorov_sf(lambda)};
}

} // namespace netiv
