#include "netiv/cli_app.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "netiv/csv.hpp"
#include "netiv/errors.hpp"
#include "netiv/theory.hpp"

namespace netiv {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string iso_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

HacConfig parse_hac(const std::string& kernel, int bandwidth) {
    HacConfig h;
    if (kernel == "bartlett") h.kernel = HacConfig::Kernel::Bartlett;
    else if (kernel == "rectangular") h.kernel = HacConfig::Kernel::Rectangular;
    else throw ParameterError("--hac-kernel must be 'bartlett' or 'rectangular'");
    if (bandwidth < 0) throw ParameterError("--hac-bandwidth must be >= 0");
    h.bandwidth = bandwidth;
    return h;
}

std::vector<std::string> id_cells(const GridRow& r) {
    return {std::to_string(r.config.n), r.config.regime.name(),
            r.config.scaling == NetworkOperator::Scaling::Scaled ? "scaled" : "unscaled",
            format_double(r.config.params.beta), std::to_string(r.config.reps),
            r.summary.status};
}

const std::vector<std::string> kIdHeader = {"n",         "regime", "scaling",
                                            "beta_true", "reps",   "status"};

std::vector<std::string> with_id_header(std::vector<std::string> tail) {
    std::vector<std::string> h = kIdHeader;
    for (auto& c : tail) h.push_back(std::move(c));
    return h;
}

void append(std::vector<std::string>& row, std::initializer_list<std::string> cells) {
    for (const auto& c : cells) row.push_back(c);
}

} // namespace

std::vector<CellConfig> build_cells(const SimulateOptions& opt) {
    HacConfig hac = parse_hac(opt.hac_kernel, opt.hac_bandwidth);
    std::vector<CellConfig> cells;
    if (opt.reproduce == "paper-grid" || opt.reproduce == "table2" ||
        opt.reproduce == "table3") {
        cells = paper_grid({0.4666, 0.95}, {0.25, 0.5, 0.75, 1.0, 2.0, 5.0},
                           {250, 500, 1000, 2000}, opt.reps, opt.seed);
    } else if (opt.reproduce.empty()) {
        CellConfig c;
        c.n = opt.n;
        c.regime = Regime::parse(opt.regime);
        c.scaling = opt.scaled ? NetworkOperator::Scaling::Scaled
                               : NetworkOperator::Scaling::Unscaled;
        c.reps = opt.reps;
        c.master_seed = opt.seed;
        c.params.beta = opt.beta;
        cells.push_back(c);
    } else {
        throw ParameterError("--reproduce must be one of paper-grid|table2|table3|bounds");
    }
    for (auto& c : cells) {
        c.alpha = opt.alpha;
        c.hac = hac;
        c.master_seed = opt.seed;
        (void)c.link_probability(); // validate early
    }
    return cells;
}

std::vector<std::string> write_grid_csvs(const std::vector<GridRow>& rows,
                                         const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::vector<std::string> files;

    CsvWriter est(out_dir + "/estimates.csv",
                  with_id_header({"mean_beta_hat", "mean_corr", "mean_F", "failed_reps"}));
    CsvWriter cov(out_dir + "/coverage.csv",
                  with_id_header({"coverage_t_homo", "coverage_t_hac", "coverage_ar_homo",
                                  "coverage_ar_hac"}));
    CsvWriter len(out_dir + "/ci_lengths.csv",
                  with_id_header({"mean_ci_len_t_homo", "mean_ci_len_t_hac",
                                  "mean_ci_len_ar_homo", "mean_ci_len_ar_hac",
                                  "pct_ci_infinite_ar_homo", "pct_ci_infinite_ar_hac"}));
    CsvWriter cv(out_dir + "/covariance.csv",
                 with_id_header({"mean_cov", "mean_var_instrument"}));

    for (const GridRow& r : rows) {
        const CellSummary& s = r.summary;
        auto row = id_cells(r);
        append(row, {format_opt(s.mean_beta_hat), format_opt(s.mean_corr),
                     format_opt(s.mean_f), std::to_string(s.failed_reps)});
        est.write_row(row);

        row = id_cells(r);
        append(row, {format_opt_fixed3(s.coverage_t_homo), format_opt_fixed3(s.coverage_t_hac),
                     format_opt_fixed3(s.coverage_ar_homo),
                     format_opt_fixed3(s.coverage_ar_hac)});
        cov.write_row(row);

        row = id_cells(r);
        append(row, {format_opt(s.mean_ci_len_t_homo), format_opt(s.mean_ci_len_t_hac),
                     format_opt(s.mean_ci_len_ar_homo), format_opt(s.mean_ci_len_ar_hac),
                     format_opt_fixed3(s.pct_ci_infinite_ar_homo),
                     format_opt_fixed3(s.pct_ci_infinite_ar_hac)});
        len.write_row(row);

        row = id_cells(r);
        append(row, {format_opt(s.mean_cov), format_opt(s.mean_var_instrument)});
        cv.write_row(row);
    }
    files.push_back(out_dir + "/estimates.csv");
    files.push_back(out_dir + "/coverage.csv");
    files.push_back(out_dir + "/ci_lengths.csv");
    files.push_back(out_dir + "/covariance.csv");
    return files;
}

namespace {

void dump_sample_csv(const CellConfig& cfg, const std::string& path) {
    Rng rng_graph(derive_seed(cfg.master_seed,
                              {"graph", "n=" + std::to_string(cfg.n) +
                                            "|regime=" + cfg.regime.name()}));
    Network g = sample_er(cfg.n, cfg.link_probability(), rng_graph);
    Rng rng_x(derive_seed(cfg.master_seed,
                          {"covariates", "n=" + std::to_string(cfg.n) +
                                             "|regime=" + cfg.regime.name()}));
    Vec x = sample_covariates(cfg.n, cfg.covariates, rng_x);
    Rng rng_e(derive_seed(cfg.master_seed,
                          {"errors", "n=" + std::to_string(cfg.n) +
                                         "|regime=" + cfg.regime.name(), "rep=0"}));
    Vec eps = sample_errors(cfg.n, cfg.params.sigma_eps, rng_e);
    NetworkOperator op(std::move(g), cfg.scaling);
    SimulatedSample s = solve_outcomes(op, cfg.params, x, eps);
    CsvWriter w(path, {"i", "x", "eps", "y", "gx", "gy", "g2x"});
    for (int i = 0; i < cfg.n; ++i)
        w.write_row({std::to_string(i), format_double(s.x[i]), format_double(s.eps[i]),
                     format_double(s.y[i]), format_double(s.gx[i]), format_double(s.gy[i]),
                     format_double(s.g2x[i])});
}

} // namespace

int exit_code_for(const std::vector<GridRow>& rows) {
    int failed = 0;
    for (const GridRow& r : rows)
        if (r.summary.status != "ok") ++failed;
    if (failed == static_cast<int>(rows.size())) return kExitFailure;
    if (failed > 0) return kExitPartial;
    return kExitOk;
}

namespace {

// --reproduce bounds: the bound-curve figure data instead of a cell grid.
int simulate_bounds_preset(const SimulateOptions& opt, const std::string& started) {
    BoundsOptions bo;
    bo.seed = opt.seed;
    bo.out_dir = opt.out_dir;
    bo.threads = opt.threads;
    int rc = cmd_bounds(bo);
    json manifest;
    manifest["version"] = std::string("netiv-") + NETIV_VERSION;
    manifest["master_seed"] = opt.seed;
    manifest["started_at"] = started;
    manifest["finished_at"] = iso_now();
    manifest["config"] = {{"reproduce", "bounds"}, {"out-dir", opt.out_dir}};
    manifest["outputs"] = {opt.out_dir + "/bounds.csv"};
    manifest["cells_total"] = 0;
    manifest["cells_failed"] = 0;
    std::ofstream mf(opt.out_dir + "/manifest.json");
    if (!mf) throw Error("cannot write manifest.json");
    mf << manifest.dump(2) << '\n';
    return rc;
}

} // namespace

int cmd_simulate(const SimulateOptions& opt) {
    std::string started = iso_now();
    if (opt.reproduce == "bounds") return simulate_bounds_preset(opt, started);
    std::vector<CellConfig> cells = build_cells(opt);
    std::vector<GridRow> rows = run_grid(cells, opt.threads);
    std::vector<std::string> files = write_grid_csvs(rows, opt.out_dir);

    if (!opt.dump_sample.empty()) {
        dump_sample_csv(cells.front(), opt.dump_sample);
        files.push_back(opt.dump_sample);
    }

    int failed = 0;
    json cell_status = json::array();
    for (const GridRow& r : rows) {
        if (r.summary.status != "ok") ++failed;
        cell_status.push_back({{"cell", r.config.cell_id()}, {"status", r.summary.status}});
    }

    json manifest;
    manifest["version"] = std::string("netiv-") + NETIV_VERSION;
    manifest["master_seed"] = opt.seed;
    manifest["started_at"] = started;
    manifest["finished_at"] = iso_now();
    manifest["config"] = {{"reproduce", opt.reproduce},
                          {"n", opt.n},
                          {"regime", opt.regime},
                          {"beta", opt.beta},
                          {"scaled", opt.scaled},
                          {"reps", opt.reps},
                          {"alpha", opt.alpha},
                          {"hac-kernel", opt.hac_kernel},
                          {"hac-bandwidth", opt.hac_bandwidth},
                          {"threads", opt.threads},
                          {"out-dir", opt.out_dir}};
    manifest["cells"] = cell_status;
    manifest["cells_total"] = rows.size();
    manifest["cells_failed"] = failed;
    manifest["outputs"] = files;

    // The manifest is written last: its presence signals completion.
    {
        std::ofstream mf(opt.out_dir + "/manifest.json");
        if (!mf) throw Error("cannot write manifest.json");
        mf << manifest.dump(2) << '\n';
    }

    return exit_code_for(rows);
}

int cmd_graph_stats(const GraphStatsOptions& opt) {
    EdgeListResult loaded =
        load_edge_list(opt.edge_list, opt.one_indexed ? Indexing::One : Indexing::Zero);
    const Network& g = loaded.network;
    if (g.n() == 0) throw ParameterError("graph-stats: empty graph (n = 0)");
    if (loaded.self_loops_dropped > 0)
        std::cerr << "warning: dropped " << loaded.self_loops_dropped << " self-loop(s)\n";

    SparseSymMatrix g2 = square_offdiag(g);
    std::vector<double> deg(g.degrees().begin(), g.degrees().end());
    DegreeSummary sg = value_stats(deg);
    DegreeSummary s2s = value_stats(g2.support_degrees());
    DegreeSummary s2w = value_stats(g2.weighted_degrees());

    fs::create_directories(opt.out_dir);
    CsvWriter w(opt.out_dir + "/graph_stats.csv",
                {"matrix", "min", "median", "mean", "mode", "max"});
    auto emit = [&w](const std::string& name, const DegreeSummary& s) {
        w.write_row({name, format_double(s.min), format_double(s.median),
                     format_double(s.mean), format_double(s.mode), format_double(s.max)});
        std::cout << name << ": min=" << format_double(s.min)
                  << " median=" << format_double(s.median) << " mean=" << format_double(s.mean)
                  << " mode=" << format_double(s.mode) << " max=" << format_double(s.max)
                  << '\n';
    };
    emit("G", sg);
    emit("G2_support", s2s);
    emit("G2_weighted", s2w);
    return kExitOk;
}

std::vector<BoundCurvePoint> bound_curves(const BoundsOptions& opt) {
    std::vector<BoundCurvePoint> points;
    for (const std::string& rtext : opt.regimes) {
        Regime regime = Regime::parse(rtext);
        for (int n : opt.sizes) {
            double p = regime.degree(n) / n;
            if (!(p >= 0.0 && p <= 1.0))
                throw ParameterError("bounds: regime " + rtext + " at n=" + std::to_string(n) +
                                     " gives p outside [0,1]");
            std::vector<double> vals;
            vals.reserve(opt.seeds);
            for (int s = 0; s < opt.seeds; ++s) {
                Rng rng(derive_seed(opt.seed, {"bounds", rtext, "n=" + std::to_string(n),
                                               "seed=" + std::to_string(s)}));
                Network g = sample_er(n, p, rng);
                double d = g.mean_degree();
                if (!(d > 0.0)) continue; // degenerate draw, skipped and counted below
                BoundReport rep = upper_bound(n, d, scale_weight(g), opt.scaled);
                vals.push_back(opt.scaled ? rep.bound_scaled : rep.bound_unscaled);
            }
            BoundCurvePoint pt;
            pt.n = n;
            pt.regime = rtext;
            pt.valid_seeds = static_cast<int>(vals.size());
            if (!vals.empty()) {
                double m = 0.0;
                for (double v : vals) m += v;
                m /= vals.size();
                double ss = 0.0;
                for (double v : vals) ss += (v - m) * (v - m);
                pt.mean_bound = m;
                pt.sd_bound = vals.size() > 1 ? std::sqrt(ss / (vals.size() - 1)) : 0.0;
            }
            points.push_back(pt);
        }
    }
    return points;
}

int cmd_bounds(const BoundsOptions& opt) {
    std::vector<BoundCurvePoint> pts = bound_curves(opt);
    fs::create_directories(opt.out_dir);
    CsvWriter w(opt.out_dir + "/bounds.csv", {"n", "regime", "mean_bound", "sd_bound"});
    for (const auto& pt : pts) {
        if (pt.valid_seeds < opt.seeds)
            std::cerr << "warning: " << pt.regime << " n=" << pt.n << ": skipped "
                      << (opt.seeds - pt.valid_seeds) << " empty-graph draw(s)\n";
        w.write_row({std::to_string(pt.n), pt.regime, format_double(pt.mean_bound),
                     format_double(pt.sd_bound)});
    }
    return kExitOk;
}

int cmd_diagnose(const DiagnoseOptions& opt) {
    Network g;
    if (!opt.edge_list.empty()) {
        g = load_edge_list(opt.edge_list, opt.one_indexed ? Indexing::One : Indexing::Zero)
                .network;
    } else {
        Regime regime = Regime::parse(opt.regime);
        Rng rng(derive_seed(opt.seed, {"graph", "n=" + std::to_string(opt.n) +
                                                    "|regime=" + regime.name()}));
        g = sample_er(opt.n, regime.degree(opt.n) / opt.n, rng);
    }

    SparseSymMatrix g2 = square_offdiag(g);
    double w = scale_weight(g);
    NetworkOperator op(g, opt.scaled ? NetworkOperator::Scaling::Scaled
                                     : NetworkOperator::Scaling::Unscaled);
    double lambda1 = largest_eigenvalue(op);
    StabilityFlag flag = classify_stability(opt.beta, lambda1);

    bool degenerate = (g2.nnz() == 0);
    std::optional<double> angle_deg;
    if (!degenerate && !g.empty()) {
        // Frobenius angle between G and G^(2); 0 exactly when G2 = c G.
        double dot = 0.0;
        for (const auto& [i, j, v] : g2.entries()) {
            if (i == j) continue;
            // adjacency entry is 1 iff (i, j) is an edge
            const auto& nb = g.neighbors(i);
            if (std::binary_search(nb.begin(), nb.end(), j)) dot += 2.0 * v;
        }
        double cosv = dot / std::sqrt(frobenius_sq(g2) *
                                      2.0 * static_cast<double>(g.edge_count()));
        cosv = std::min(1.0, std::max(-1.0, cosv));
        angle_deg = std::acos(cosv) * 180.0 / 3.14159265358979323846;
    }

    std::optional<BoundaryDiagnostics> bd;
    if (g.n() <= 4096) bd = boundary_diagnostics(op, opt.beta, opt.gamma, opt.delta);

    std::cout << "nodes: " << g.n() << ", edges: " << g.edge_count() << '\n'
              << "mean degree: " << format_double(g.mean_degree())
              << ", max degree: " << g.max_degree() << '\n'
              << "w_n: " << format_double(w) << '\n'
              << "lambda1 (" << (opt.scaled ? "scaled" : "unscaled")
              << "): " << format_double(lambda1) << '\n'
              << "beta * lambda1: " << format_double(opt.beta * lambda1) << " ["
              << to_string(flag) << "]\n";
    if (degenerate)
        std::cout << "instrument: DEGENERATE (G^(2) identically zero)\n";
    else if (angle_deg)
        std::cout << "G vs G^(2) angle: " << format_double(*angle_deg) << " deg\n";
    if (bd) {
        std::cout << "boundary eigenvalues (beta*lambda >= 1): " << bd->boundary_count << '\n'
                  << "max amplification 1/|1-beta*lambda|: "
                  << format_double(bd->max_amplification)
                  << (bd->max_amplification > 10.0 ? "  [amplification > 10]" : "") << '\n';
    }

    fs::create_directories(opt.out_dir);
    CsvWriter csv(opt.out_dir + "/diagnose.csv",
                  {"n", "edges", "mean_degree", "max_degree", "w", "lambda1", "beta_lambda1",
                   "stability", "degenerate_instrument", "angle_g_g2_deg", "boundary_count",
                   "max_amplification"});
    csv.write_row({std::to_string(g.n()), std::to_string(g.edge_count()),
                   format_double(g.mean_degree()), std::to_string(g.max_degree()),
                   format_double(w), format_double(lambda1),
                   format_double(opt.beta * lambda1), to_string(flag),
                   degenerate ? "1" : "0",
                   angle_deg ? format_double(*angle_deg) : std::string("NA"),
                   bd ? std::to_string(bd->boundary_count) : std::string("NA"),
                   bd ? format_double(bd->max_amplification) : std::string("NA")});
    return kExitOk;
}

} // namespace netiv
