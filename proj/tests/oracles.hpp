#pragma once

// Independent brute-force oracles used by the test suites. Everything here is
// deliberately naive (dense loops, no shared code with the library paths it
// checks).

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "netiv/estimate.hpp"
#include "netiv/graph.hpp"
#include "netiv/rng.hpp"

namespace oracles {

using netiv::Mat;
using netiv::Vec;

// Common-neighbor count between every pair, by definition.
inline Mat common_neighbors_dense(const netiv::Network& g) {
    const int n = g.n();
    Mat a = g.dense_adjacency();
    Mat c = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            for (int k = 0; k < n; ++k) c(i, j) += a(i, k) * a(k, j);
        }
    return c;
}

// All-pairs shortest path distances via Floyd-Warshall (-1 = unreachable).
inline std::vector<std::vector<int>> all_pairs_dist(const netiv::Network& g) {
    const int n = g.n();
    const int inf = 1 << 28;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& [i, j] : g.edges()) d[i][j] = d[j][i] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    for (auto& row : d)
        for (int& x : row)
            if (x >= inf) x = -1;
    return d;
}

// Network-HAC moment covariance by a double loop over all node pairs.
inline Mat hac_moment_cov_bruteforce(const Mat& z, const Vec& e1, const Vec& e2,
                                     const netiv::Network& g, const netiv::HacConfig& cfg) {
    const int n = static_cast<int>(z.rows());
    const int q = static_cast<int>(z.cols());
    auto dist = all_pairs_dist(g);
    Mat v = Mat::Zero(2 * q, 2 * q);
    for (int i = 0; i < n; ++i) {
        Vec mi(2 * q);
        mi.head(q) = e1[i] * z.row(i).transpose();
        mi.tail(q) = e2[i] * z.row(i).transpose();
        for (int j = 0; j < n; ++j) {
            int s = dist[i][j];
            if (s < 0 || s > cfg.bandwidth) continue;
            Vec mj(2 * q);
            mj.head(q) = e1[j] * z.row(j).transpose();
            mj.tail(q) = e2[j] * z.row(j).transpose();
            v += (cfg.weight(s) / n) * (mi * mj.transpose());
        }
    }
    return v;
}

// Complete graph on n nodes.
inline netiv::Network complete(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return netiv::Network(n, std::move(e));
}

// Path 0-1-2-...-(n-1).
inline netiv::Network path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return netiv::Network(n, std::move(e));
}

} // namespace oracles
