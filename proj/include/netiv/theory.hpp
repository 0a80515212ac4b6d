#pragma once

#include <optional>
#include <vector>

#include "netiv/dgp.hpp"
#include "netiv/graph.hpp"

namespace netiv {

// Rate factors of the variance-normalized covariance bound for ER graphs:
// unscaled 1/sqrt(d + d^3/n), scaled w * that. The multiplicative constant
// (|gamma| + |delta|/|beta|) / (1 - |beta| ||G||_2) is attached separately
// when the spectral norm is available and the stability condition holds.
struct BoundReport {
    int n = 0;
    double d_n = 0.0;
    double w_n = 1.0;
    double bound_unscaled = 0.0;
    double bound_scaled = 0.0;
    std::optional<double> constant; // undefined when |beta| ||G||_2 >= 1
};

BoundReport upper_bound(int n, double d_n, double w_n, bool scaled);
// Multiplicative constant attached to the rate factors; nullopt when the
// stability condition fails (bound check skipped for that graph).
std::optional<double> bound_constant(const ModelParams& params, double spectral_norm);

// Ratio of the exact conditional covariance trace to the instrument variance:
//   [Tr(G2 (gamma I + delta G) G (I - beta G)^{-1})] / ||G2||_F^2
// (the sigma_x^2 / n factors cancel). Throws DegenerateInstrumentError when
// G2 = 0 (the ill-defined-estimand regime).
double conditional_varnorm_cov(const NetworkOperator& op, const ModelParams& params,
                               double sigma_x);
// Numerator and denominator separately, each carrying sigma_x^2 / n.
struct VarnormCovParts {
    double numerator = 0.0;
    double denominator = 0.0;
};
VarnormCovParts conditional_varnorm_cov_parts(const NetworkOperator& op,
                                              const ModelParams& params, double sigma_x);

// Spectral split of the first-stage covariance: leading eigenvalue sum plus
// the diagonal-correction remainder, with its deterministic bound.
struct SpectralCovReport {
    double leading_sum = 0.0;     // (sx^2/n) sum_j lam^3 (gamma + delta lam) / (1 - beta lam)
    double remainder_exact = 0.0; // -(sx^2/n) Tr(D G (I-beta G)^{-1} (gamma I + delta G))
    double remainder_bound = 0.0; // (sx^2/n) ||D||_F ||G||_F ||(I-beta G)^{-1}||_2 ||gamma I + delta G||_2
    int boundary_count = 0;       // #{j : beta * lambda_j >= 1}
    double max_amplification = 0.0; // max_j |1 - beta lambda_j|^{-1}
};
SpectralCovReport spectral_cov_decomposition(const NetworkOperator& op,
                                             const ModelParams& params, double sigma_x,
                                             int dense_cap = 4096);

// Near-boundary diagnostics: counts of eigenvalues past the stability
// boundary, the largest amplification factor among the stable ones, and the
// per-eigenvalue sign of lambda^3 (gamma + delta lambda) / (1 - beta lambda).
struct BoundaryDiagnostics {
    int boundary_count = 0;
    double max_amplification = 0.0; // over j with beta * lambda_j < 1
    std::vector<int> sign_profile;  // -1 / 0 / +1 per eigenvalue (descending)
};
BoundaryDiagnostics boundary_diagnostics(const NetworkOperator& op, double beta,
                                         double gamma, double delta, int dense_cap = 4096);

} // namespace netiv
