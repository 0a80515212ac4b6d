#include "netiv/dgp.hpp"

#include <cmath>

#include "netiv/errors.hpp"

namespace netiv {

StabilityFlag classify_stability(double beta, double lambda1) {
    double m = std::abs(beta) * lambda1;
    if (m >= 1.0) return StabilityFlag::Unstable;
    if (m >= 0.9) return StabilityFlag::NearBoundary;
    return StabilityFlag::Stable;
}

const char* to_string(StabilityFlag f) {
    switch (f) {
        case StabilityFlag::Stable: return "Stable";
        case StabilityFlag::NearBoundary: return "NearBoundary";
        case StabilityFlag::Unstable: return "Unstable";
    }
    return "?";
}

Vec sample_covariates(int n, const CovariateSpec& spec, Rng& rng) {
    if (!(spec.zero_mass >= 0.0 && spec.zero_mass <= 1.0))
        throw ParameterError("sample_covariates: zero_mass must lie in [0,1]");
    if (!(spec.lognormal_sigma >= 0.0))
        throw ParameterError("sample_covariates: lognormal_sigma must be nonnegative");
    Vec x(n);
    for (int i = 0; i < n; ++i) {
        double gate = rng.bernoulli(1.0 - spec.zero_mass) ? 1.0 : 0.0;
        double z = rng.normal();
        x[i] = gate * std::exp(spec.lognormal_mu + spec.lognormal_sigma * z);
    }
    if (spec.demean && n > 0) x.array() -= x.mean();
    return x;
}

Vec sample_errors(int n, double sigma_eps, Rng& rng) {
    if (sigma_eps < 0.0) throw ParameterError("sample_errors: sigma_eps must be >= 0");
    Vec e(n);
    for (int i = 0; i < n; ++i) e[i] = sigma_eps * rng.normal();
    return e;
}

OutcomeSolver::OutcomeSolver(const NetworkOperator& op, const ModelParams& params)
    : op_(op), params_(params), g2_(square_offdiag(op.base())) {
    const int n = op.n();
    Mat a = -params_.beta * op.dense();
    a.diagonal().array() += 1.0;
    lu_.compute(a);
    // Pivot-based singularity gate relative to the matrix scale.
    double scale = a.cwiseAbs().maxCoeff();
    double min_pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (n > 0 && min_pivot < 1e-12 * std::max(scale, 1.0)) {
        int idx = 0;
        lu_.matrixLU().diagonal().cwiseAbs().minCoeff(&idx);
        throw SolveError("outcome system numerically singular (pivot " +
                             std::to_string(min_pivot) + " at index " + std::to_string(idx) + ")",
                         idx);
    }
    lambda1_ = largest_eigenvalue(op_);
    flag_ = classify_stability(params_.beta, lambda1_);
}

SimulatedSample OutcomeSolver::solve(const Vec& x, const Vec& eps) const {
    SimulatedSample s;
    s.x = x;
    s.eps = eps;
    Vec gx = op_.apply(x);
    Vec rhs = params_.alpha * Vec::Ones(op_.n()) + params_.gamma * x + params_.delta * gx + eps;
    s.y = lu_.solve(rhs);
    s.gx = std::move(gx);
    s.gy = op_.apply(s.y);
    double w = op_.scale();
    s.g2x = g2_.apply(x) / (w * w);
    s.stability_flag = flag_;
    return s;
}

SimulatedSample solve_outcomes(const NetworkOperator& op, const ModelParams& params,
                               const Vec& x, const Vec& eps) {
    OutcomeSolver solver(op, params);
    return solver.solve(x, eps);
}

Vec neumann_outcomes(const NetworkOperator& op, const ModelParams& params, const Vec& x,
                     const Vec& eps, double tol, int k_max) {
    double lambda1 = largest_eigenvalue(op);
    double r = std::abs(params.beta) * lambda1;
    if (r >= 1.0)
        throw ConvergenceError("neumann_outcomes: |beta|*lambda1 = " + std::to_string(r) +
                               " >= 1, series diverges");
    Vec b = params.alpha * Vec::Ones(op.n()) + params.gamma * x +
            params.delta * op.apply(x) + eps;
    Vec sum = b;
    Vec term = b;
    if (params.beta == 0.0) return sum; // K = 0
    // Stop once the geometric tail bound  ||term||_2 * r / (1 - r)  is below
    // tol (valid in the 2-norm since ||beta*G v|| <= r ||v|| for symmetric G).
    double tail_factor = (r > 0.0) ? r / (1.0 - r) : 0.0;
    for (int k = 1; k <= k_max; ++k) {
        term = params.beta * op.apply(term);
        sum += term;
        double tn = term.norm();
        if (tn * tail_factor <= tol || tn == 0.0) return sum;
    }
    throw ConvergenceError("neumann_outcomes: k_max exceeded before reaching tol");
}

void build_instruments(const NetworkOperator& op, const SparseSymMatrix& g2_base,
                       SimulatedSample& sample) {
    double w = op.scale();
    sample.gx = op.apply(sample.x);
    sample.gy = op.apply(sample.y);
    sample.g2x = g2_base.apply(sample.x) / (w * w);
}

} // namespace netiv
