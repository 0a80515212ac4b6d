#include "netiv/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "netiv/errors.hpp"

namespace netiv {

double HacConfig::weight(int s) const {
    if (s < 0) throw ParameterError("HacConfig::weight: negative distance");
    if (s > bandwidth) return 0.0;
    switch (kernel) {
        case Kernel::Rectangular:
            return 1.0;
        case Kernel::Bartlett:
            return 1.0 - static_cast<double>(s) / (bandwidth + 1.0);
    }
    return 0.0;
}

namespace {

// Rank/conditioning gate on the Gram matrix; throws CollinearityError naming
// the column with the largest weight in the null direction.
Mat checked_gram_inverse(const Mat& x, const std::vector<std::string>& labels) {
    const Eigen::Index k = x.cols();
    Mat gram = x.transpose() * x;
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    double lmax = es.eigenvalues().maxCoeff();
    double lmin = es.eigenvalues().minCoeff();
    if (lmin <= 0.0 || lmax / lmin > 1e12) {
        // Name the last column materially involved in the null direction
        // (for K_n designs this is the g2x instrument duplicating gx).
        Vec null_dir = es.eigenvectors().col(0).cwiseAbs();
        double top = null_dir.maxCoeff();
        int worst = 0;
        for (Eigen::Index c = 0; c < k; ++c)
            if (null_dir[c] >= 0.1 * top) worst = static_cast<int>(c);
        std::string name = (worst < static_cast<int>(labels.size()))
                               ? labels[worst]
                               : "column " + std::to_string(worst);
        throw CollinearityError("rank-deficient regressor matrix (dependent column: " +
                                    name + ")",
                                name);
    }
    return gram.inverse();
}

} // namespace

OlsFit ols(const Mat& columns, const Vec& response, const std::vector<std::string>& labels) {
    const Eigen::Index n = columns.rows();
    const Eigen::Index k = columns.cols();
    if (k >= n) throw ParameterError("ols: column count must be below n");
    OlsFit fit;
    fit.xtx_inv = checked_gram_inverse(columns, labels);
    fit.coef = fit.xtx_inv * (columns.transpose() * response);
    fit.fitted = columns * fit.coef;
    fit.residuals = response - fit.fitted;
    return fit;
}

Design Design::from_sample(const SimulatedSample& s) {
    Design d;
    const Eigen::Index n = s.x.size();
    d.w_cols.resize(n, 3);
    d.w_cols.col(0) = Vec::Ones(n);
    d.w_cols.col(1) = s.x;
    d.w_cols.col(2) = s.gx;
    d.w_labels = {"const", "x", "gx"};
    d.z_col = s.g2x;
    d.endo_col = s.gy;
    d.response = s.y;
    return d;
}

Mat Design::z_matrix() const {
    Mat z(w_cols.rows(), w_cols.cols() + 1);
    z.leftCols(w_cols.cols()) = w_cols;
    z.col(w_cols.cols()) = z_col;
    return z;
}

std::vector<std::string> Design::z_labels() const {
    auto l = w_labels;
    l.push_back("g2x");
    return l;
}

IvEstimator::IvEstimator(const Network& graph, Mat w_cols, std::vector<std::string> w_labels,
                         Vec z_col, const HacConfig& hac)
    : hac_(hac) {
    n_ = static_cast<int>(w_cols.rows());
    if (graph.n() != n_) throw ParameterError("IvEstimator: graph size mismatch");
    if (z_col.cwiseAbs().maxCoeff() == 0.0)
        throw DegenerateInstrumentError("instrument column is identically zero");

    q_ = static_cast<int>(w_cols.cols()) + 1;
    z_.resize(n_, q_);
    z_.leftCols(q_ - 1) = w_cols;
    z_.col(q_ - 1) = z_col;
    labels_ = std::move(w_labels);
    labels_.push_back("g2x");

    xtx_inv_ = checked_gram_inverse(z_, labels_);
    qr_.compute(z_);

    shells_.resize(n_);
    for (int i = 0; i < n_; ++i)
        shells_[i] = neighbors_at_distance(graph, i, hac_.bandwidth);
}

VcovBlock IvEstimator::homo_block(const Vec& resid_first, const Vec& resid_structural) const {
    double s_ee = resid_first.squaredNorm() / n_;
    double s_hh = resid_structural.squaredNorm() / n_;
    double s_he = resid_structural.dot(resid_first) / n_;
    double a_qq = xtx_inv_(q_ - 1, q_ - 1);
    VcovBlock b;
    b.v_pi = s_ee * a_qq;
    b.v_xi = s_hh * a_qq;
    b.cov_xipi = s_he * a_qq;
    return b;
}

VcovBlock IvEstimator::hac_block(const Vec& resid_first, const Vec& resid_structural) const {
    // Stacked moments m_i = (e~_i z_i, eta_i z_i); V = sum_s w(s) Omega(s).
    Mat v = Mat::Zero(2 * q_, 2 * q_);
    Vec mi(2 * q_), mj(2 * q_);
    for (int i = 0; i < n_; ++i) {
        mi.head(q_) = resid_first[i] * z_.row(i).transpose();
        mi.tail(q_) = resid_structural[i] * z_.row(i).transpose();
        for (int s = 0; s <= hac_.bandwidth; ++s) {
            double w = hac_.weight(s);
            if (w == 0.0) continue;
            for (int j : shells_[i][s]) {
                mj.head(q_) = resid_first[j] * z_.row(j).transpose();
                mj.tail(q_) = resid_structural[j] * z_.row(j).transpose();
                v.noalias() += (w / n_) * (mi * mj.transpose());
            }
        }
    }
    // The double sum is symmetric in exact arithmetic; symmetrize and verify.
    Mat vs = 0.5 * (v + v.transpose());
    double scale = std::max(1.0, vs.cwiseAbs().maxCoeff());
    if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error("network_hac: moment covariance asymmetric beyond tolerance");

    // Sandwich to coefficient scale: blockdiag(A, A) V blockdiag(A, A) / n,
    // A = (Z'Z/n)^{-1} = n * (Z'Z)^{-1}.
    Mat a = static_cast<double>(n_) * xtx_inv_;
    Mat s_pp = a * vs.topLeftCorner(q_, q_) * a / n_;
    Mat s_xx = a * vs.bottomRightCorner(q_, q_) * a / n_;
    Mat s_xp = a * vs.bottomLeftCorner(q_, q_) * a / n_;
    VcovBlock b;
    b.v_pi = s_pp(q_ - 1, q_ - 1);
    b.v_xi = s_xx(q_ - 1, q_ - 1);
    b.cov_xipi = s_xp(q_ - 1, q_ - 1);
    return b;
}

IvFit IvEstimator::fit(const Vec& endo_col, const Vec& response) const {
    IvFit f;
    f.n = n_;
    f.first_stage_coef = qr_.solve(endo_col);
    f.structural_coef = qr_.solve(response);
    f.fitted_first = z_ * f.first_stage_coef;
    f.resid_first = endo_col - f.fitted_first;
    f.resid_structural = response - z_ * f.structural_coef;
    f.pi_hat = f.first_stage_coef[q_ - 1];
    f.xi_hat = f.structural_coef[q_ - 1];
    f.beta_defined = (f.pi_hat != 0.0);
    f.beta_hat = f.beta_defined ? f.xi_hat / f.pi_hat
                                : std::numeric_limits<double>::quiet_NaN();
    f.xtx_inv = xtx_inv_;
    f.vcov_homo = homo_block(f.resid_first, f.resid_structural);
    f.vcov_hac = hac_block(f.resid_first, f.resid_structural);
    f.corr_endog_instr = correlation(endo_col, z_.col(q_ - 1));
    return f;
}

IvFit fit_iv(const Design& design, const Network& graph, const HacConfig& hac) {
    IvEstimator est(graph, design.w_cols, design.w_labels, design.z_col, hac);
    return est.fit(design.endo_col, design.response);
}

double first_stage_F(const IvFit& fit, VcovKind which) {
    const VcovBlock& b = (which == VcovKind::Homoskedastic) ? fit.vcov_homo : fit.vcov_hac;
    if (fit.pi_hat == 0.0) return 0.0;
    if (b.v_pi <= 0.0)
        throw DegenerateVarianceError("first_stage_F: variance of pi_hat is not positive");
    return fit.pi_hat * fit.pi_hat / b.v_pi;
}

std::optional<double> correlation(const Vec& a, const Vec& b) {
    const Eigen::Index n = a.size();
    if (n != b.size() || n < 2) return std::nullopt;
    Vec ac = a.array() - a.mean();
    Vec bc = b.array() - b.mean();
    double na = ac.norm();
    double nb = bc.norm();
    if (na == 0.0 || nb == 0.0) return std::nullopt;
    return ac.dot(bc) / (na * nb);
}

double info_index_proxy(const IvFit& fit, VcovKind which) {
    const VcovBlock& b = (which == VcovKind::Homoskedastic) ? fit.vcov_homo : fit.vcov_hac;
    if (b.v_pi <= 0.0)
        throw DegenerateVarianceError("info_index_proxy: variance of pi_hat is not positive");
    return 1.0 / std::sqrt(b.v_pi);
}

Mat network_hac_moment_cov(const Mat& zmat, const Vec& e1, const Vec& e2,
                           const Network& graph, const HacConfig& cfg) {
    const int n = static_cast<int>(zmat.rows());
    const int q = static_cast<int>(zmat.cols());
    Mat v = Mat::Zero(2 * q, 2 * q);
    Vec mi(2 * q), mj(2 * q);
    for (int i = 0; i < n; ++i) {
        auto shells = neighbors_at_distance(graph, i, cfg.bandwidth);
        mi.head(q) = e1[i] * zmat.row(i).transpose();
        mi.tail(q) = e2[i] * zmat.row(i).transpose();
        for (int s = 0; s <= cfg.bandwidth; ++s) {
            double w = cfg.weight(s);
            if (w == 0.0) continue;
            for (int j : shells[s]) {
                mj.head(q) = e1[j] * zmat.row(j).transpose();
                mj.tail(q) = e2[j] * zmat.row(j).transpose();
                v.noalias() += (w / n) * (mi * mj.transpose());
            }
        }
    }
    return 0.5 * (v + v.transpose());
}

} // namespace netiv
