#pragma once

#include <vector>

namespace netiv {

// Regularized lower incomplete gamma P(a, x), accurate to ~1e-14.
double gamma_p(double a, double x);
// Upper tail Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// Chi-squared distribution with df degrees of freedom.
double chi2_cdf(double x, double df);
double chi2_sf(double x, double df);
// Quantile of chi2(df) at probability p, solved to ~1e-12.
double chi2_quantile(double p, double df);

// Two-sided normal critical value z with P(|Z| <= z) = 1 - alpha.
double normal_two_sided_crit(double alpha);

// One-sample Kolmogorov-Smirnov test against a continuous CDF evaluated on
// the (unsorted) sample. Returns the p-value from the asymptotic Kolmogorov
// distribution with the Stephens small-sample correction.
struct KsResult {
    double statistic;
    double p_value;
};
template <typename Cdf>
KsResult ks_test(std::vector<double> sample, Cdf cdf);

// Asymptotic Kolmogorov tail Q_KS(lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_sf(double lambda);

} // namespace netiv

#include "netiv/detail/stats_impl.hpp"
