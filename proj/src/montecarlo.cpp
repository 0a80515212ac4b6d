#include "netiv/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "netiv/errors.hpp"
#include "netiv/stats.hpp"

namespace netiv {

double Regime::degree(int n) const {
    switch (kind) {
        case Kind::Constant: return c;
        case Kind::LogLog: return c * std::log(std::log(static_cast<double>(n)));
        case Kind::Vanishing: return c * std::pow(static_cast<double>(n), -a);
        case Kind::Dense: return c * std::pow(static_cast<double>(n), a);
    }
    return c;
}

std::string Regime::name() const {
    std::ostringstream ss;
    switch (kind) {
        case Kind::Constant: ss << "constant:" << c; break;
        case Kind::LogLog: ss << "loglog:" << c; break;
        case Kind::Vanishing: ss << "vanishing:" << c << "," << a; break;
        case Kind::Dense: ss << "dense:" << c << "," << a; break;
    }
    return ss.str();
}

Regime Regime::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParameterError("regime '" + text + "': expected name:params (e.g. constant:5)");
    std::string name = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    for (char& ch : rest)
        if (ch == ',') ch = ' ';
    std::istringstream ss(rest);
    Regime r;
    if (name == "constant") r.kind = Kind::Constant;
    else if (name == "loglog") r.kind = Kind::LogLog;
    else if (name == "vanishing") r.kind = Kind::Vanishing;
    else if (name == "dense") r.kind = Kind::Dense;
    else throw ParameterError("regime '" + text + "': unknown name '" + name + "'");
    if (!(ss >> r.c))
        throw ParameterError("regime '" + text + "': missing numeric parameter");
    if (r.kind == Kind::Vanishing || r.kind == Kind::Dense) {
        double a;
        if (ss >> a) r.a = a;
    }
    std::string extra;
    if (ss >> extra)
        throw ParameterError("regime '" + text + "': trailing token '" + extra + "'");
    if (!(r.c > 0.0)) throw ParameterError("regime '" + text + "': c must be positive");
    return r;
}

double CellConfig::link_probability() const {
    double p = regime.degree(n) / n;
    if (!(p >= 0.0 && p <= 1.0))
        throw ParameterError("cell " + cell_id() + ": derived link probability " +
                             std::to_string(p) + " outside [0,1]");
    return p;
}

std::string CellConfig::cell_id() const {
    std::ostringstream ss;
    ss << "n=" << n << "|regime=" << regime.name() << "|beta=" << params.beta << "|"
       << (scaling == NetworkOperator::Scaling::Scaled ? "scaled" : "unscaled");
    return ss.str();
}

namespace {

void parallel_for(int tasks, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, threads);
    if (threads == 1 || tasks <= 1) {
        for (int i = 0; i < tasks; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int workers = std::min(threads, tasks);
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < tasks; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::optional<double> mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_cov(const Vec& a, const Vec& b) {
    const Eigen::Index n = a.size();
    if (n < 2) return 0.0;
    double ma = a.mean(), mb = b.mean();
    return (a.array() - ma).matrix().dot((b.array() - mb).matrix()) /
           static_cast<double>(n - 1);
}

} // namespace

CellSummary run_cell(const CellConfig& cfg, int threads, std::vector<RepRecord>* capture) {
    if (cfg.reps < 1) throw ParameterError("run_cell: reps must be >= 1");
    CellSummary out;
    out.reps = cfg.reps;

    const double p = cfg.link_probability();
    const std::string graph_scope = "n=" + std::to_string(cfg.n) + "|regime=" + cfg.regime.name();

    // Network and covariates are fixed across reps and shared across beta and
    // scaling variants of the same (n, regime) cell.
    Rng rng_graph(derive_seed(cfg.master_seed, {"graph", graph_scope}));
    Network graph = sample_er(cfg.n, p, rng_graph);
    Rng rng_x(derive_seed(cfg.master_seed, {"covariates", graph_scope}));
    Vec x = sample_covariates(cfg.n, cfg.covariates, rng_x);

    out.realized_mean_degree = graph.mean_degree();
    out.realized_max_degree = graph.max_degree();

    NetworkOperator op(std::move(graph), cfg.scaling);
    out.scale_w = op.scale();

    SparseSymMatrix g2 = square_offdiag(op.base());
    const double w2 = op.scale() * op.scale();
    Vec g2x = g2.apply(x) / w2;
    if (g2x.cwiseAbs().maxCoeff() == 0.0) {
        out.status = "degenerate-instrument";
        return out;
    }
    Vec gx = op.apply(x);

    std::optional<OutcomeSolver> solver;
    try {
        solver.emplace(op, cfg.params);
    } catch (const SolveError& e) {
        out.status = std::string("solve-failed: ") + e.what();
        return out;
    }
    out.lambda1 = solver->lambda1();

    Mat w_cols(cfg.n, 3);
    w_cols.col(0) = Vec::Ones(cfg.n);
    w_cols.col(1) = x;
    w_cols.col(2) = gx;
    std::optional<IvEstimator> est;
    try {
        est.emplace(op.base(), w_cols, std::vector<std::string>{"const", "x", "gx"}, g2x,
                    cfg.hac);
    } catch (const CollinearityError& e) {
        out.status = std::string("collinear: ") + e.what();
        return out;
    } catch (const DegenerateInstrumentError& e) {
        out.status = std::string("degenerate-instrument: ") + e.what();
        return out;
    }

    const double z_crit = normal_two_sided_crit(cfg.alpha);
    const double beta_true = cfg.params.beta;

    std::vector<RepRecord> recs(cfg.reps);
    parallel_for(cfg.reps, threads, [&](int r) {
        RepRecord& rec = recs[r];
        try {
            Rng rng_eps(derive_seed(cfg.master_seed,
                                    {"errors", graph_scope, "rep=" + std::to_string(r)}));
            Vec eps = sample_errors(cfg.n, cfg.params.sigma_eps, rng_eps);
            SimulatedSample s = solver->solve(x, eps);
            rec.flag = s.stability_flag;

            IvFit fit = est->fit(s.gy, s.y);
            rec.beta_defined = fit.beta_defined;
            rec.beta_hat = fit.beta_hat;
            rec.corr = fit.corr_endog_instr;
            rec.cov_gy_g2x = sample_cov(s.gy, g2x);
            rec.f_homo = (fit.vcov_homo.v_pi > 0.0)
                             ? fit.pi_hat * fit.pi_hat / fit.vcov_homo.v_pi
                             : 0.0;

            for (VcovKind kind : {VcovKind::Homoskedastic, VcovKind::NetworkHac}) {
                const VcovBlock& vb =
                    (kind == VcovKind::Homoskedastic) ? fit.vcov_homo : fit.vcov_hac;
                bool homo = (kind == VcovKind::Homoskedastic);

                // t-interval via the delta method on (xi, pi).
                if (fit.beta_defined) {
                    double om = omega_at(fit.beta_hat, vb.v_xi, vb.v_pi, vb.cov_xipi);
                    double se = std::sqrt(std::max(0.0, om)) / std::abs(fit.pi_hat);
                    // eps guard keeps the noiseless case (se and error both
                    // float dust) classified as covered
                    bool cover = std::abs(beta_true - fit.beta_hat) <=
                                 z_crit * se + 1e-12 * (1.0 + std::abs(beta_true));
                    if (homo) {
                        rec.cover_t_homo = cover;
                        rec.len_t_homo = 2.0 * z_crit * se;
                    } else {
                        rec.cover_t_hac = cover;
                        rec.len_t_hac = 2.0 * z_crit * se;
                    }
                }

                ArResult ar = ar_test(beta_true, fit, kind, cfg.alpha);
                ConfidenceSet set = ar_confidence_set_closed_form(fit, kind, cfg.alpha);
                auto [len, infinite] = set.summary();
                if (homo) {
                    rec.ar_stat_homo = ar.statistic;
                    rec.ar_omega_valid_homo = ar.omega_valid;
                    rec.cover_ar_homo = !ar.reject;
                    rec.inf_ar_homo = infinite;
                    if (!infinite) rec.len_ar_homo = len;
                } else {
                    rec.ar_stat_hac = ar.statistic;
                    rec.ar_omega_valid_hac = ar.omega_valid;
                    rec.cover_ar_hac = !ar.reject;
                    rec.inf_ar_hac = infinite;
                    if (!infinite) rec.len_ar_hac = len;
                }
            }
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.error = e.what();
        }
    });

    // Ordered reduction over rep index: bit-reproducible for any thread count.
    std::vector<double> betas, corrs, covs, fs;
    std::vector<double> lt_h, lt_k, lar_h, lar_k;
    int cov_t_h = 0, cov_t_k = 0, cov_ar_h = 0, cov_ar_k = 0;
    int inf_h = 0, inf_k = 0;
    for (const RepRecord& rec : recs) {
        if (rec.failed) {
            ++out.failed_reps;
            continue;
        }
        ++out.counted_reps;
        if (rec.beta_defined) betas.push_back(rec.beta_hat);
        if (rec.corr) corrs.push_back(*rec.corr);
        covs.push_back(rec.cov_gy_g2x);
        fs.push_back(rec.f_homo);
        if (rec.cover_t_homo) ++cov_t_h;
        if (rec.cover_t_hac) ++cov_t_k;
        if (rec.cover_ar_homo) ++cov_ar_h;
        if (rec.cover_ar_hac) ++cov_ar_k;
        if (rec.len_t_homo) lt_h.push_back(*rec.len_t_homo);
        if (rec.len_t_hac) lt_k.push_back(*rec.len_t_hac);
        if (rec.inf_ar_homo) ++inf_h; else if (rec.len_ar_homo) lar_h.push_back(*rec.len_ar_homo);
        if (rec.inf_ar_hac) ++inf_k; else if (rec.len_ar_hac) lar_k.push_back(*rec.len_ar_hac);
        if (!rec.ar_omega_valid_homo) ++out.omega_invalid_homo;
        if (!rec.ar_omega_valid_hac) ++out.omega_invalid_hac;
        switch (rec.flag) {
            case StabilityFlag::Stable: ++out.stable_reps; break;
            case StabilityFlag::NearBoundary: ++out.near_boundary_reps; break;
            case StabilityFlag::Unstable: ++out.unstable_reps; break;
        }
    }
    out.mean_beta_hat = mean_of(betas);
    out.mean_corr = mean_of(corrs);
    out.mean_cov = mean_of(covs);
    out.mean_f = mean_of(fs);
    if (out.counted_reps > 0) {
        double var_instr = sample_cov(g2x, g2x);
        out.mean_var_instrument = var_instr;
        double denom = out.counted_reps;
        out.coverage_t_homo = cov_t_h / denom;
        out.coverage_t_hac = cov_t_k / denom;
        out.coverage_ar_homo = cov_ar_h / denom;
        out.coverage_ar_hac = cov_ar_k / denom;
        out.pct_ci_infinite_ar_homo = inf_h / denom;
        out.pct_ci_infinite_ar_hac = inf_k / denom;
    }
    out.mean_ci_len_t_homo = mean_of(lt_h);
    out.mean_ci_len_t_hac = mean_of(lt_k);
    out.mean_ci_len_ar_homo = mean_of(lar_h); // NA when every set is infinite
    out.mean_ci_len_ar_hac = mean_of(lar_k);

    if (capture) *capture = std::move(recs);
    return out;
}

std::vector<GridRow> run_grid(const std::vector<CellConfig>& cells, int threads) {
    if (cells.empty()) throw ParameterError("run_grid: empty cell list");
    std::vector<GridRow> rows;
    rows.reserve(cells.size());
    for (const CellConfig& cfg : cells) {
        GridRow row{cfg, {}};
        try {
            row.summary = run_cell(cfg, threads);
        } catch (const std::exception& e) {
            row.summary.status = std::string("failed: ") + e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CellConfig> paper_grid(const std::vector<double>& betas,
                                   const std::vector<double>& degrees,
                                   const std::vector<int>& sizes, int reps,
                                   std::uint64_t master_seed) {
    std::vector<CellConfig> cells;
    for (double beta : betas) {
        for (NetworkOperator::Scaling sc :
             {NetworkOperator::Scaling::Unscaled, NetworkOperator::Scaling::Scaled}) {
            for (double d : degrees) {
                for (int n : sizes) {
                    CellConfig c;
                    c.n = n;
                    c.regime = Regime{Regime::Kind::Constant, d, 0.5};
                    c.scaling = sc;
                    c.reps = reps;
                    c.master_seed = master_seed;
                    c.params.beta = beta;
                    cells.push_back(c);
                }
            }
        }
    }
    return cells;
}

} // namespace netiv
