#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netiv/montecarlo.hpp"

namespace netiv {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPartial = 3;
inline constexpr int kExitFailure = 4;

struct SimulateOptions {
    std::string reproduce;              // "", "paper-grid", "table2", "table3", "bounds"
    int n = 250;
    std::string regime = "constant:1";
    double beta = 0.4666;
    bool scaled = true;
    int reps = 1000;
    std::uint64_t seed = 20240801;
    double alpha = 0.05;
    std::string hac_kernel = "bartlett";
    int hac_bandwidth = 2;
    std::string out_dir = "out";
    int threads = 1;
    std::string dump_sample;            // optional path for a rep-0 sample dump
};

// Writes estimates.csv, coverage.csv, ci_lengths.csv, covariance.csv and
// manifest.json (last). Returns kExitOk / kExitPartial / kExitFailure.
int cmd_simulate(const SimulateOptions& opt);

struct GraphStatsOptions {
    std::string edge_list;
    bool one_indexed = false;
    std::string out_dir = "out";
};
int cmd_graph_stats(const GraphStatsOptions& opt);

struct BoundsOptions {
    std::vector<std::string> regimes = {"constant:1", "vanishing:2,0.5", "dense:1,0.5"};
    std::vector<int> sizes = {200, 400, 800, 1200, 1600};
    int seeds = 500;
    bool scaled = false;
    std::uint64_t seed = 20240801;
    std::string out_dir = "out";
    int threads = 1;
};
int cmd_bounds(const BoundsOptions& opt);

struct DiagnoseOptions {
    std::string edge_list;              // empty -> generate from (n, regime, seed)
    bool one_indexed = false;
    int n = 250;
    std::string regime = "constant:1";
    std::uint64_t seed = 20240801;
    bool scaled = true;
    double beta = 0.4666;
    double gamma = 0.0834;
    double delta = 0.1507;
    std::string out_dir = "out";
};
int cmd_diagnose(const DiagnoseOptions& opt);

// Per-(n, regime) mean/sd of the realized per-graph bound; exposed for tests.
struct BoundCurvePoint {
    int n = 0;
    std::string regime;
    double mean_bound = 0.0;
    double sd_bound = 0.0;
    int valid_seeds = 0;
};
std::vector<BoundCurvePoint> bound_curves(const BoundsOptions& opt);

// Grid construction from simulate options; exposed for tests.
std::vector<CellConfig> build_cells(const SimulateOptions& opt);

// Writes the four grid CSVs into out_dir. Returns the file list.
std::vector<std::string> write_grid_csvs(const std::vector<GridRow>& rows,
                                         const std::string& out_dir);

// kExitOk when every cell succeeded, kExitPartial when some did, kExitFailure
// when none did.
int exit_code_for(const std::vector<GridRow>& rows);

} // namespace netiv
