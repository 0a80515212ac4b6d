#pragma once

#include <limits>
#include <vector>

#include "netiv/estimate.hpp"

namespace netiv {

// Anderson-Rubin test of H0: beta = beta0 for the scalar just-identified fit.
// The statistic is g^2 / Omega(beta0) with g = xi_hat - beta0 * pi_hat and
// Omega(beta0) = V_xi - 2 beta0 Cov + beta0^2 V_pi built from the coefficient
// variances (equivalent to the n g^2 / Var(sqrt(n) g) form).
struct ArResult {
    double beta0 = 0.0;
    double statistic = 0.0;
    double p_value = 1.0;
    bool reject = false;
    double omega = 0.0;
    bool omega_valid = true; // false when Omega(beta0) <= 0 (non-rejection path)
};

// Omega(beta0) = V_xi - beta0 * 2 * Cov_xipi + beta0^2 * V_pi.
double omega_at(double beta0, double v_xi, double v_pi, double cov_xipi);

ArResult ar_test(double beta0, const IvFit& fit, VcovKind which, double alpha = 0.05);

// Inverted AR acceptance region over beta0.
struct ConfidenceSet {
    enum class Kind { Empty, Bounded, TwoRays, WholeLine };
    Kind kind = Kind::WholeLine;
    double lo = 0.0;       // Bounded: [lo, hi]
    double hi = 0.0;
    double left_hi = 0.0;  // TwoRays: (-inf, left_hi] U [right_lo, +inf)
    double right_lo = 0.0;
    double level = 0.95;

    bool contains(double beta0) const;
    // (length, is_infinite): Bounded -> (hi - lo, false); rays/line -> (inf,
    // true); Empty -> (0, false).
    std::pair<double, bool> summary() const;
};

// Closed-form inversion: solves A b^2 + B b + C <= 0 with
//   A = pi^2 - c V_pi,  B = -2 xi pi + 2 c Cov,  C = xi^2 - c V_xi,
// c the chi2(1) quantile at 1 - alpha.
ConfidenceSet ar_confidence_set_closed_form(const IvFit& fit, VcovKind which,
                                            double alpha = 0.05);

// Pointwise acceptance over an explicit grid (oracle for the closed form).
struct GridSpec {
    double lo = -10.0;
    double hi = 10.0;
    int points = 10001;
};
std::vector<double> grid_confidence_set(const IvFit& fit, VcovKind which, double alpha,
                                        const GridSpec& grid);

inline std::pair<double, bool> ci_summary(const ConfidenceSet& set) { return set.summary(); }

} // namespace netiv
