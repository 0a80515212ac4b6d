#include "netiv/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "netiv/errors.hpp"

namespace netiv {

BoundReport upper_bound(int n, double d_n, double w_n, bool scaled) {
    if (!(d_n > 0.0)) throw ParameterError("upper_bound: d_n must be positive");
    if (!(w_n > 0.0)) throw ParameterError("upper_bound: w_n must be positive");
    BoundReport r;
    r.n = n;
    r.d_n = d_n;
    r.w_n = w_n;
    r.bound_unscaled = 1.0 / std::sqrt(d_n + d_n * d_n * d_n / n);
    r.bound_scaled = w_n * r.bound_unscaled;
    (void)scaled;
    return r;
}

std::optional<double> bound_constant(const ModelParams& params, double spectral_norm) {
    double m = std::abs(params.beta) * spectral_norm;
    if (m >= 1.0 || params.beta == 0.0) return std::nullopt;
    return (std::abs(params.gamma) + std::abs(params.delta) / std::abs(params.beta)) /
           (1.0 - m);
}

VarnormCovParts conditional_varnorm_cov_parts(const NetworkOperator& op,
                                              const ModelParams& params, double sigma_x) {
    const int n = op.n();
    SparseSymMatrix g2 = square_offdiag(op.base());
    const double w = op.scale();
    const double w2 = w * w;
    double fro2 = frobenius_sq(g2) / (w2 * w2); // ||G2||_F^2 under scaling
    VarnormCovParts parts;
    parts.denominator = sigma_x * sigma_x / n * fro2;
    if (fro2 == 0.0)
        throw DegenerateInstrumentError(
            "conditional_varnorm_cov: G^(2) is identically zero (ill-defined estimand)");

    // Numerator trace: Tr(G2 (gamma I + delta G) G (I - beta G)^{-1}).
    // Since (gamma I + delta G), G, and (I - beta G)^{-1} commute, compute
    // M = (I - beta G)^{-1} (gamma G + delta G^2) by one dense solve and sum
    // against the sparse entries of G2.
    Mat g = op.dense();
    Mat rhs = params.gamma * g + params.delta * g * g;
    Mat a = -params.beta * g;
    a.diagonal().array() += 1.0;
    Eigen::PartialPivLU<Mat> lu(a);
    Mat m = lu.solve(rhs);
    double tr = 0.0;
    for (const auto& [i, j, v] : g2.entries()) {
        double vv = v / w2;
        if (i == j)
            tr += vv * m(i, i);
        else
            tr += vv * (m(i, j) + m(j, i));
    }
    parts.numerator = sigma_x * sigma_x / n * tr;
    return parts;
}

double conditional_varnorm_cov(const NetworkOperator& op, const ModelParams& params,
                               double sigma_x) {
    VarnormCovParts p = conditional_varnorm_cov_parts(op, params, sigma_x);
    return p.numerator / p.denominator;
}

SpectralCovReport spectral_cov_decomposition(const NetworkOperator& op,
                                             const ModelParams& params, double sigma_x,
                                             int dense_cap) {
    const int n = op.n();
    Spectrum sp = full_spectrum(op, dense_cap);
    SpectralCovReport rep;
    const double sx2_n = (n > 0) ? sigma_x * sigma_x / n : 0.0;

    double spectral_norm = 0.0;
    double inv_norm = 0.0; // ||(I - beta G)^{-1}||_2 = max 1/|1 - beta lam|
    for (int j = 0; j < n; ++j) {
        double lam = sp.eigenvalues[j];
        double denom = 1.0 - params.beta * lam;
        if (std::abs(denom) < 1e-10)
            throw SingularBoundaryError(
                "spectral_cov_decomposition: beta * lambda_j within 1e-10 of 1 at index " +
                    std::to_string(j),
                j);
        rep.leading_sum +=
            lam * lam * lam * (params.gamma + params.delta * lam) / denom;
        if (params.beta * lam >= 1.0) ++rep.boundary_count;
        rep.max_amplification = std::max(rep.max_amplification, 1.0 / std::abs(denom));
        spectral_norm = std::max(spectral_norm, std::abs(lam));
        inv_norm = std::max(inv_norm, 1.0 / std::abs(denom));
    }
    rep.leading_sum *= sx2_n;

    if (n == 0 || op.base().empty()) return rep; // all terms zero

    // Remainder: -(sx^2/n) Tr(D G (I - beta G)^{-1} (gamma I + delta G)) with
    // D = diag(G^2). Row i of the trace only needs column i of the solve
    // against the diagonal weight.
    Mat g = op.dense();
    Vec diag_g2 = (g * g).diagonal();
    Mat a = -params.beta * g;
    a.diagonal().array() += 1.0;
    Eigen::PartialPivLU<Mat> lu(a);
    Mat rhs = params.gamma * g + params.delta * g * g; // G (gamma I + delta G)
    Mat m = lu.solve(rhs);                             // (I-bG)^{-1} G (gamma I + delta G)
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += diag_g2[i] * m(i, i);
    rep.remainder_exact = -sx2_n * tr;

    double d_fro = diag_g2.norm();
    double op_norm2 = 0.0;
    for (int j = 0; j < n; ++j) {
        double lam = sp.eigenvalues[j];
        op_norm2 = std::max(op_norm2, std::abs(params.gamma + params.delta * lam));
    }
    // |Tr(D M)| <= ||D||_F ||M||_F and ||G K B||_F <= ||G||_F ||K||_2 ||B||_2;
    // the Frobenius factor must sit on G for the chain to hold.
    double g_fro = std::sqrt(frobenius_sq(op));
    rep.remainder_bound = sx2_n * d_fro * g_fro * inv_norm * op_norm2;
    (void)spectral_norm;
    return rep;
}

BoundaryDiagnostics boundary_diagnostics(const NetworkOperator& op, double beta,
                                         double gamma, double delta, int dense_cap) {
    Spectrum sp = full_spectrum(op, dense_cap);
    BoundaryDiagnostics d;
    for (double lam : sp.eigenvalues) {
        double denom = 1.0 - beta * lam;
        if (beta * lam >= 1.0) ++d.boundary_count;
        else d.max_amplification = std::max(d.max_amplification, 1.0 / std::abs(denom));
        double term = (denom == 0.0)
                          ? std::numeric_limits<double>::infinity()
                          : lam * lam * lam * (gamma + delta * lam) / denom;
        d.sign_profile.push_back(term > 0.0 ? 1 : (term < 0.0 ? -1 : 0));
    }
    return d;
}

} // namespace netiv
