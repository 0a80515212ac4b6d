#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netiv/dgp.hpp"
#include "netiv/graph.hpp"

namespace netiv {

// Kernel weights for the network-HAC estimator. `bandwidth` is the largest
// path distance that receives nonzero weight; Bartlett therefore uses
// 1 - s/(b+1) so that weight(b) > 0 and weight(b+1) = 0.
struct HacConfig {
    enum class Kernel { Rectangular, Bartlett };
    Kernel kernel = Kernel::Bartlett;
    int bandwidth = 2;

    double weight(int s) const;
};

// Plain least squares. Columns are the regressors; `labels` name them in
// collinearity errors.
struct OlsFit {
    Vec coef;
    Vec residuals;
    Vec fitted;
    Mat xtx_inv; // (X'X)^{-1}
};
OlsFit ols(const Mat& columns, const Vec& response,
           const std::vector<std::string>& labels = {});

// Regression design for the network-IV system: response Y, endogenous GY,
// exogenous columns (1, X, GX), excluded instrument G^(2)X appended last.
struct Design {
    Mat w_cols;                      // n x k exogenous block
    std::vector<std::string> w_labels;
    Vec z_col;                       // instrument
    Vec endo_col;                    // GY
    Vec response;                    // Y

    static Design from_sample(const SimulatedSample& s);
    Mat z_matrix() const;            // [w_cols, z_col]
    std::vector<std::string> z_labels() const;
};

// Joint 2x2 variance block of (xi_hat, pi_hat): finite-sample coefficient
// variances, i.e. v_pi = Var(pi_hat).
struct VcovBlock {
    double v_xi = 0.0;
    double v_pi = 0.0;
    double cov_xipi = 0.0;
};

struct IvFit {
    int n = 0;
    double pi_hat = 0.0;           // instrument coefficient, first stage (GY on Z)
    double xi_hat = 0.0;           // instrument coefficient, reduced structural (Y on Z)
    bool beta_defined = false;
    double beta_hat = 0.0;         // xi_hat / pi_hat
    Vec first_stage_coef;
    Vec structural_coef;
    Vec resid_first;               // eps-tilde hat
    Vec resid_structural;          // eta hat
    Vec fitted_first;
    Mat xtx_inv;                   // (Z'Z)^{-1}
    VcovBlock vcov_homo;
    VcovBlock vcov_hac;
    std::optional<double> corr_endog_instr;
};

enum class VcovKind { Homoskedastic, NetworkHac };

// Precomputed per-cell state for repeated fits on the same design columns:
// the Z factorization, (Z'Z)^{-1}, and the BFS shells for the HAC sums.
class IvEstimator {
public:
    IvEstimator(const Network& graph, Mat w_cols, std::vector<std::string> w_labels,
                Vec z_col, const HacConfig& hac);

    // Fits both regressions for the given response pair and fills both vcov
    // blocks plus the endogenous/instrument correlation.
    IvFit fit(const Vec& endo_col, const Vec& response) const;

    const Mat& z_matrix() const { return z_; }
    const Mat& xtx_inv() const { return xtx_inv_; }

private:
    Mat z_;
    std::vector<std::string> labels_;
    Eigen::ColPivHouseholderQR<Mat> qr_;
    Mat xtx_inv_;
    HacConfig hac_;
    std::vector<std::vector<std::vector<int>>> shells_; // shells_[i][s]
    int n_ = 0;
    int q_ = 0;

    VcovBlock hac_block(const Vec& resid_first, const Vec& resid_structural) const;
    VcovBlock homo_block(const Vec& resid_first, const Vec& resid_structural) const;
};

// One-shot fit of a design (constructs the estimator internally).
IvFit fit_iv(const Design& design, const Network& graph, const HacConfig& hac = {});

// F = pi_hat^2 / Var(pi_hat) under the chosen variance estimator.
double first_stage_F(const IvFit& fit, VcovKind which);

// Pearson correlation; nullopt when either vector is constant.
std::optional<double> correlation(const Vec& a, const Vec& b);

// Proxy for the information index: 1 / sd(pi_hat) under the chosen estimator.
double info_index_proxy(const IvFit& fit, VcovKind which);

// Stand-alone network-HAC covariance of the stacked moment vectors
// m_i = (e1_i * z_i, e2_i * z_i); returns the full (2q x 2q) matrix
// sum_s w(s) Omega(s) with Omega(s) = n^{-1} sum_i sum_{j: d(i,j)=s} m_i m_j'.
Mat network_hac_moment_cov(const Mat& zmat, const Vec& e1, const Vec& e2,
                           const Network& graph, const HacConfig& cfg);

} // namespace netiv
