#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netiv/cli_app.hpp"
#include "netiv/errors.hpp"

using namespace netiv;
using nlohmann::json;

namespace {

// Flat key-value JSON config mirroring the flags; flags override the file.
void apply_config(const std::string& path, SimulateOptions& o) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config '" + path + "'");
    json cfg = json::parse(in);
    for (auto& [key, val] : cfg.items()) {
        if (key == "reproduce") o.reproduce = val.get<std::string>();
        else if (key == "n") o.n = val.get<int>();
        else if (key == "regime") o.regime = val.get<std::string>();
        else if (key == "beta") o.beta = val.get<double>();
        else if (key == "scaled") o.scaled = val.get<bool>();
        else if (key == "reps") o.reps = val.get<int>();
        else if (key == "seed") o.seed = val.get<std::uint64_t>();
        else if (key == "alpha") o.alpha = val.get<double>();
        else if (key == "hac-kernel") o.hac_kernel = val.get<std::string>();
        else if (key == "hac-bandwidth") o.hac_bandwidth = val.get<int>();
        else if (key == "out-dir") o.out_dir = val.get<std::string>();
        else if (key == "threads") o.threads = val.get<int>();
        else throw ParameterError("config '" + path + "': unknown key '" + key + "'");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"netiv: Monte Carlo laboratory for network-instrument peer-effects models"};
    app.require_subcommand(1);

    SimulateOptions sim;
    std::string config_path;
    auto* simulate = app.add_subcommand("simulate", "run replication grids and emit CSV tables");
    simulate->add_option("--config", config_path, "flat JSON config (flags override)");
    simulate->add_option("--reproduce", sim.reproduce,
                         "preset grid: paper-grid|table2|table3");
    simulate->add_option("--n", sim.n, "node count");
    simulate->add_option("--regime", sim.regime, "degree regime name:params, e.g. constant:5");
    simulate->add_option("--beta", sim.beta, "true peer effect");
    auto* sflag = simulate->add_flag("--scaled", "use the w_n-scaled operator (default)");
    auto* uflag = simulate->add_flag("--unscaled", "use the raw adjacency operator");
    simulate->add_option("--reps", sim.reps, "replications per cell");
    simulate->add_option("--seed", sim.seed, "master seed");
    simulate->add_option("--alpha", sim.alpha, "test level");
    simulate->add_option("--hac-kernel", sim.hac_kernel, "bartlett|rectangular");
    simulate->add_option("--hac-bandwidth", sim.hac_bandwidth, "max distance with weight");
    simulate->add_option("--out-dir", sim.out_dir, "output directory");
    simulate->add_option("--threads", sim.threads, "worker threads");
    simulate->add_option("--dump-sample", sim.dump_sample,
                         "also write a rep-0 sample CSV (i,x,eps,y,gx,gy,g2x)");

    GraphStatsOptions gs;
    auto* graph_stats = app.add_subcommand("graph-stats",
                                           "degree summaries for an edge list and its square");
    graph_stats->add_option("edge_list", gs.edge_list, "edge list file")->required();
    graph_stats->add_flag("--one-indexed", gs.one_indexed, "node ids start at 1");
    graph_stats->add_option("--out-dir", gs.out_dir, "output directory");

    BoundsOptions bo;
    auto* bounds = app.add_subcommand("bounds", "bound-curve CSV across regimes and sizes");
    bounds->add_option("--regime", bo.regimes, "regime list (repeatable)");
    bounds->add_option("--n", bo.sizes, "size list (repeatable)");
    bounds->add_option("--seeds", bo.seeds, "graph draws per point");
    bounds->add_flag("--scaled", bo.scaled, "emit the w_n-scaled bound");
    bounds->add_option("--seed", bo.seed, "master seed");
    bounds->add_option("--out-dir", bo.out_dir, "output directory");
    bounds->add_option("--threads", bo.threads, "worker threads");

    DiagnoseOptions dg;
    auto* diagnose = app.add_subcommand("diagnose", "spectral and boundary report for a graph");
    diagnose->add_option("--edges", dg.edge_list, "edge list file (omit to generate)");
    diagnose->add_flag("--one-indexed", dg.one_indexed, "node ids start at 1");
    diagnose->add_option("--n", dg.n, "node count when generating");
    diagnose->add_option("--regime", dg.regime, "degree regime when generating");
    diagnose->add_option("--seed", dg.seed, "master seed when generating");
    auto* dsf = diagnose->add_flag("--scaled", "scaled operator (default)");
    auto* duf = diagnose->add_flag("--unscaled", "raw adjacency operator");
    diagnose->add_option("--beta", dg.beta, "peer effect for the boundary check");
    diagnose->add_option("--gamma", dg.gamma, "own-covariate effect");
    diagnose->add_option("--delta", dg.delta, "contextual effect");
    diagnose->add_option("--out-dir", dg.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            if (!config_path.empty()) {
                SimulateOptions from_file;
                apply_config(config_path, from_file);
                // Flags override file values.
                if (!simulate->count("--reproduce")) sim.reproduce = from_file.reproduce;
                if (!simulate->count("--n")) sim.n = from_file.n;
                if (!simulate->count("--regime")) sim.regime = from_file.regime;
                if (!simulate->count("--beta")) sim.beta = from_file.beta;
                if (!sflag->count() && !uflag->count()) sim.scaled = from_file.scaled;
                if (!simulate->count("--reps")) sim.reps = from_file.reps;
                if (!simulate->count("--seed")) sim.seed = from_file.seed;
                if (!simulate->count("--alpha")) sim.alpha = from_file.alpha;
                if (!simulate->count("--hac-kernel")) sim.hac_kernel = from_file.hac_kernel;
                if (!simulate->count("--hac-bandwidth"))
                    sim.hac_bandwidth = from_file.hac_bandwidth;
                if (!simulate->count("--out-dir")) sim.out_dir = from_file.out_dir;
                if (!simulate->count("--threads")) sim.threads = from_file.threads;
            }
            if (sflag->count() && uflag->count())
                throw ParameterError("--scaled and --unscaled are mutually exclusive");
            if (uflag->count()) sim.scaled = false;
            if (sflag->count()) sim.scaled = true;
            return cmd_simulate(sim);
        }
        if (graph_stats->parsed()) return cmd_graph_stats(gs);
        if (bounds->parsed()) return cmd_bounds(bo);
        if (diagnose->parsed()) {
            if (dsf->count() && duf->count())
                throw ParameterError("--scaled and --unscaled are mutually exclusive");
            if (duf->count()) dg.scaled = false;
            return cmd_diagnose(dg);
        }
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
