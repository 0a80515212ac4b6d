#include "netiv/weakiv.hpp"

#include <cmath>

#include "netiv/errors.hpp"
#include "netiv/stats.hpp"

namespace netiv {

double omega_at(double beta0, double v_xi, double v_pi, double cov_xipi) {
    return v_xi - beta0 * 2.0 * cov_xipi + beta0 * beta0 * v_pi;
}

ArResult ar_test(double beta0, const IvFit& fit, VcovKind which, double alpha) {
    const VcovBlock& b = (which == VcovKind::Homoskedastic) ? fit.vcov_homo : fit.vcov_hac;
    ArResult r;
    r.beta0 = beta0;
    r.omega = omega_at(beta0, b.v_xi, b.v_pi, b.cov_xipi);
    double g = fit.xi_hat - beta0 * fit.pi_hat;
    // Cancellation below double precision means g is numerically zero (the
    // noiseless case lands here with Omega also ~0).
    if (std::abs(g) <= 1e-12 * (std::abs(fit.xi_hat) + std::abs(beta0 * fit.pi_hat)))
        g = 0.0;
    if (!(r.omega > 0.0)) {
        // Degenerate variance at this beta0: cannot reject.
        r.omega_valid = false;
        r.statistic = 0.0;
        r.p_value = 1.0;
        r.reject = false;
        return r;
    }
    r.statistic = g * g / r.omega;
    r.p_value = chi2_sf(r.statistic, 1.0);
    r.reject = r.statistic > chi2_quantile(1.0 - alpha, 1.0);
    return r;
}

bool ConfidenceSet::contains(double beta0) const {
    switch (kind) {
        case Kind::Empty: return false;
        case Kind::Bounded: return beta0 >= lo && beta0 <= hi;
        case Kind::TwoRays: return beta0 <= left_hi || beta0 >= right_lo;
        case Kind::WholeLine: return true;
    }
    return false;
}

std::pair<double, bool> ConfidenceSet::summary() const {
    switch (kind) {
        case Kind::Empty: return {0.0, false};
        case Kind::Bounded: return {hi - lo, false};
        case Kind::TwoRays:
        case Kind::WholeLine: return {std::numeric_limits<double>::infinity(), true};
    }
    return {0.0, false};
}

ConfidenceSet ar_confidence_set_closed_form(const IvFit& fit, VcovKind which, double alpha) {
    const VcovBlock& vb = (which == VcovKind::Homoskedastic) ? fit.vcov_homo : fit.vcov_hac;
    const double c = chi2_quantile(1.0 - alpha, 1.0);
    const double a = fit.pi_hat * fit.pi_hat - c * vb.v_pi;
    const double b = -2.0 * fit.xi_hat * fit.pi_hat + 2.0 * c * vb.cov_xipi;
    const double cc = fit.xi_hat * fit.xi_hat - c * vb.v_xi;

    ConfidenceSet set;
    set.level = 1.0 - alpha;
    if (a == 0.0) {
        // Degenerate linear case: B b + C <= 0.
        if (b == 0.0) {
            set.kind = (cc <= 0.0) ? ConfidenceSet::Kind::WholeLine
                                   : ConfidenceSet::Kind::Empty;
            return set;
        }
        // Half-line; represent as a ray pair with one side at infinity.
        double root = -cc / b;
        set.kind = ConfidenceSet::Kind::TwoRays;
        if (b > 0.0) {
            set.left_hi = root;
            set.right_lo = std::numeric_limits<double>::infinity();
        } else {
            set.left_hi = -std::numeric_limits<double>::infinity();
            set.right_lo = root;
        }
        return set;
    }

    const double disc = b * b - 4.0 * a * cc;
    if (disc < 0.0) {
        set.kind = (a > 0.0) ? ConfidenceSet::Kind::Empty : ConfidenceSet::Kind::WholeLine;
        return set;
    }
    // Numerically stable quadratic roots.
    const double sq = std::sqrt(disc);
    const double qv = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double r1, r2;
    if (qv != 0.0) {
        r1 = qv / a;
        r2 = cc / qv;
    } else {
        r1 = 0.0;
        r2 = -b / a;
    }
    if (r1 > r2) std::swap(r1, r2);
    if (a > 0.0) {
        set.kind = ConfidenceSet::Kind::Bounded;
        set.lo = r1;
        set.hi = r2;
    } else {
        set.kind = ConfidenceSet::Kind::TwoRays;
        set.left_hi = r1;
        set.right_lo = r2;
    }
    return set;
}

std::vector<double> grid_confidence_set(const IvFit& fit, VcovKind which, double alpha,
                                        const GridSpec& grid) {
    if (grid.points < 1) throw ParameterError("grid_confidence_set: need at least one point");
    std::vector<double> accepted;
    const double step = (grid.points > 1) ? (grid.hi - grid.lo) / (grid.points - 1) : 0.0;
    for (int k = 0; k < grid.points; ++k) {
        double beta0 = grid.lo + k * step;
        if (!ar_test(beta0, fit, which, alpha).reject) accepted.push_back(beta0);
    }
    return accepted;
}

} // namespace netiv
