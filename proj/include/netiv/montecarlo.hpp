#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netiv/dgp.hpp"
#include "netiv/estimate.hpp"
#include "netiv/graph.hpp"
#include "netiv/weakiv.hpp"

namespace netiv {

// Named average-degree schedule d_n(n).
struct Regime {
    enum class Kind { Constant, LogLog, Vanishing, Dense };
    Kind kind = Kind::Constant;
    double c = 1.0;
    double a = 0.5; // exponent for Vanishing / Dense

    double degree(int n) const;
    std::string name() const;
    // Parses "constant:5", "loglog:2", "vanishing:1,0.5", "dense:1,0.5".
    static Regime parse(const std::string& text);
};

struct CellConfig {
    int n = 250;
    Regime regime;
    NetworkOperator::Scaling scaling = NetworkOperator::Scaling::Scaled;
    int reps = 1000;
    std::uint64_t master_seed = 20240801;
    ModelParams params;          // params.beta is the true beta
    CovariateSpec covariates;
    HacConfig hac;
    double alpha = 0.05;

    double link_probability() const; // d_n(n)/n, validated to [0,1]
    std::string cell_id() const;     // stable textual id (excludes seed)
};

// Per-replication capture for distribution checks.
struct RepRecord {
    bool failed = false;
    std::string error;
    bool beta_defined = false;
    double beta_hat = 0.0;
    double ar_stat_homo = 0.0;
    double ar_stat_hac = 0.0;
    bool ar_omega_valid_homo = true;
    bool ar_omega_valid_hac = true;
    double f_homo = 0.0;
    std::optional<double> corr;
    double cov_gy_g2x = 0.0;
    bool cover_t_homo = false;
    bool cover_t_hac = false;
    bool cover_ar_homo = false;
    bool cover_ar_hac = false;
    std::optional<double> len_t_homo;
    std::optional<double> len_t_hac;
    std::optional<double> len_ar_homo; // nullopt when infinite
    std::optional<double> len_ar_hac;
    bool inf_ar_homo = false;
    bool inf_ar_hac = false;
    StabilityFlag flag = StabilityFlag::Stable;
};

struct CellSummary {
    std::string status = "ok"; // "ok", "degenerate-instrument", "collinear", "solve-failed"
    int reps = 0;
    int counted_reps = 0;
    int failed_reps = 0;

    std::optional<double> mean_beta_hat;
    std::optional<double> mean_corr;
    std::optional<double> mean_cov;
    std::optional<double> mean_var_instrument;
    std::optional<double> mean_f;

    std::optional<double> coverage_t_homo;
    std::optional<double> coverage_t_hac;
    std::optional<double> coverage_ar_homo;
    std::optional<double> coverage_ar_hac;

    std::optional<double> mean_ci_len_t_homo;
    std::optional<double> mean_ci_len_t_hac;
    std::optional<double> mean_ci_len_ar_homo; // finite sets only
    std::optional<double> mean_ci_len_ar_hac;
    std::optional<double> pct_ci_infinite_ar_homo;
    std::optional<double> pct_ci_infinite_ar_hac;

    int omega_invalid_homo = 0; // reps with Omega(beta_true) <= 0
    int omega_invalid_hac = 0;
    int stable_reps = 0;
    int near_boundary_reps = 0;
    int unstable_reps = 0;

    double realized_mean_degree = 0.0;
    double realized_max_degree = 0.0;
    double scale_w = 1.0;
    double lambda1 = 0.0;
};

// Runs one cell: one network and one covariate draw fixed across reps, errors
// redrawn per rep from rep-indexed streams. Aggregation order is fixed by rep
// index regardless of scheduling. `capture` receives every RepRecord in rep
// order when provided.
CellSummary run_cell(const CellConfig& cfg, int threads = 1,
                     std::vector<RepRecord>* capture = nullptr);

struct GridRow {
    CellConfig config;
    CellSummary summary;
};
// One row per cell; cell errors land in the row status, never abort the grid.
std::vector<GridRow> run_grid(const std::vector<CellConfig>& cells, int threads = 1);

// The full reference grid behind --reproduce paper-grid: beta values x
// degree set x sizes x both scalings, constant-degree regimes.
std::vector<CellConfig> paper_grid(const std::vector<double>& betas,
                                   const std::vector<double>& degrees,
                                   const std::vector<int>& sizes, int reps,
                                   std::uint64_t master_seed);

} // namespace netiv
