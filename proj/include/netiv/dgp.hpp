#pragma once

#include <Eigen/Dense>

#include "netiv/graph.hpp"
#include "netiv/rng.hpp"

namespace netiv {

// Coefficients of the structural outcome equation
//   Y = alpha*1 + beta*G*Y + gamma*X + delta*G*X + eps.
struct ModelParams {
    double alpha = 0.7683;
    double beta = 0.4666;
    double gamma = 0.0834;
    double delta = 0.1507;
    double sigma_eps = 1.0;
};

// Zero-inflated lognormal covariates: X_i = B_i * exp(mu + sigma * Z_i) with
// B_i ~ Bernoulli(1 - zero_mass). The (mu, sigma) pair parameterizes the
// underlying normal; the default reads "LogNormal(1, 3)" as mean 1 and
// VARIANCE 3 of that normal (sigma = sqrt(3)). Both fields are configurable
// for the sdlog reading.
struct CovariateSpec {
    double zero_mass = 1.0 - 0.9458333;
    double lognormal_mu = 1.0;
    double lognormal_sigma = 1.7320508075688772; // sqrt(3)
    bool demean = false;
};

enum class StabilityFlag { Stable, NearBoundary, Unstable };
StabilityFlag classify_stability(double beta, double lambda1);
const char* to_string(StabilityFlag f);

// One replication: covariates, errors, equilibrium outcomes, and the derived
// regressors under a given operator.
struct SimulatedSample {
    Vec x;
    Vec eps;
    Vec y;
    Vec gx;
    Vec gy;
    Vec g2x;
    StabilityFlag stability_flag = StabilityFlag::Stable;
};

Vec sample_covariates(int n, const CovariateSpec& spec, Rng& rng);
Vec sample_errors(int n, double sigma_eps, Rng& rng);

// Reusable factorization of (I - beta*G) for a fixed operator and beta. Built
// once per cell, shared read-only across replication workers.
class OutcomeSolver {
public:
    OutcomeSolver(const NetworkOperator& op, const ModelParams& params);

    // Solves (I - beta*G) y = alpha*1 + gamma*x + delta*Gx + eps and fills the
    // derived regressors.
    SimulatedSample solve(const Vec& x, const Vec& eps) const;

    double lambda1() const { return lambda1_; }
    StabilityFlag flag() const { return flag_; }

private:
    const NetworkOperator& op_;
    ModelParams params_;
    SparseSymMatrix g2_;
    Eigen::PartialPivLU<Mat> lu_;
    double lambda1_ = 0.0;
    StabilityFlag flag_ = StabilityFlag::Stable;
};

// Direct dense solve of the outcome system (one-shot convenience).
SimulatedSample solve_outcomes(const NetworkOperator& op, const ModelParams& params,
                               const Vec& x, const Vec& eps);

// Partial Neumann sum  sum_k beta^k G^k (alpha*1 + gamma*x + delta*Gx + eps),
// truncated once the geometric tail bound drops below tol. Requires
// |beta| * lambda1 < 1.
Vec neumann_outcomes(const NetworkOperator& op, const ModelParams& params, const Vec& x,
                     const Vec& eps, double tol = 1e-10, int k_max = 100000);

// Fills gx, gy, g2x of a sample whose y is already solved.
void build_instruments(const NetworkOperator& op, const SparseSymMatrix& g2_base,
                       SimulatedSample& sample);

} // namespace netiv
