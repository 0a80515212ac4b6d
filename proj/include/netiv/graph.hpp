#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netiv/rng.hpp"

namespace netiv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Undirected simple graph on nodes 0..n-1. Edges are stored once in canonical
// (i < j) order; adjacency lists and degrees are built at construction and the
// object is immutable afterwards.
class Network {
public:
    Network() = default;
    // Edges are deduplicated; self-loops are rejected.
    Network(int n, std::vector<std::pair<int, int>> edges);

    int n() const { return n_; }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& degrees() const { return degrees_; }
    const std::vector<int>& neighbors(int i) const { return adj_[i]; }

    double mean_degree() const;
    int max_degree() const;
    bool empty() const { return edges_.empty(); }

    Mat dense_adjacency() const;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> degrees_;
    std::vector<std::vector<int>> adj_;
};

// Degree-sequence order statistics. Mode is the smallest value among ties.
struct DegreeSummary {
    double min = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double mode = 0.0;
    double max = 0.0;
};

DegreeSummary degree_stats(const Network& g);
// Summary of an arbitrary per-node value sequence (used for G^(2) variants).
DegreeSummary value_stats(const std::vector<double>& values);

// Symmetric sparse matrix stored as canonically ordered (i <= j, value)
// triples. No explicit zeros.
class SparseSymMatrix {
public:
    SparseSymMatrix() = default;
    SparseSymMatrix(int n, std::vector<std::tuple<int, int, double>> entries);

    int n() const { return n_; }
    const std::vector<std::tuple<int, int, double>>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }

    // y = M x, counting each off-diagonal entry for both orientations.
    Vec apply(const Vec& x) const;
    Mat dense() const;
    // Per-node support degree (# of j != i with a nonzero entry) and weighted
    // degree (sum over j != i of the entry value).
    std::vector<double> support_degrees() const;
    std::vector<double> weighted_degrees() const;

private:
    int n_ = 0;
    std::vector<std::tuple<int, int, double>> entries_;
};

// Erdos-Renyi G(n, p): each of the n(n-1)/2 pairs included independently with
// probability p. Deterministic given the stream (geometric skipping).
Network sample_er(int n, double p, Rng& rng);

// G^(2) = G^2 - diag(G^2): entry (i, j), i != j, counts common neighbors.
SparseSymMatrix square_offdiag(const Network& g);

// w_n = max{mean degree, sqrt(max degree)}; 1.0 for the empty graph.
double scale_weight(const Network& g);

// Network together with a positive scale w; the operator entries are g_ij / w.
class NetworkOperator {
public:
    enum class Scaling { Unscaled, Scaled };

    NetworkOperator(Network g, Scaling s);
    NetworkOperator(Network g, double scale);

    const Network& base() const { return g_; }
    double scale() const { return scale_; }
    int n() const { return g_.n(); }

    // y = (A / w) x.
    Vec apply(const Vec& x) const;
    Mat dense() const;
    double max_entry_degree() const { return g_.max_degree() / scale_; }
    double mean_entry_degree() const { return g_.mean_degree() / scale_; }

private:
    Network g_;
    double scale_ = 1.0;
};

// Largest (signed) eigenvalue of the symmetric operator to absolute accuracy
// tol. Shifted power iteration from the all-ones vector; falls back to the
// dense eigendecomposition when the iteration stalls.
double largest_eigenvalue(const NetworkOperator& op, double tol = 1e-10);

// Full symmetric eigendecomposition, eigenvalues descending, orthonormal
// eigenvectors as matching columns. n above dense_cap raises CapacityError.
struct Spectrum {
    std::vector<double> eigenvalues; // descending
    Mat eigenvectors;                // column j pairs with eigenvalues[j]
};
Spectrum full_spectrum(const NetworkOperator& op, int dense_cap = 4096);

// BFS shells: result[s] lists the nodes at distance exactly s from i, for
// s = 0..s_max. Unreachable nodes never appear.
std::vector<std::vector<int>> neighbors_at_distance(const Network& g, int i, int s_max);

// Sum of squared off-diagonal entries, both orientations counted.
double frobenius_sq(const SparseSymMatrix& m);
double frobenius_sq(const NetworkOperator& op);

// Edge-list files: integer pairs, one edge per line, whitespace or comma
// separated, '#' comments. Self-loops are dropped (counted), duplicates merged.
enum class Indexing { Zero, One };
struct EdgeListResult {
    Network network;
    long self_loops_dropped = 0;
    long duplicates_merged = 0;
};
EdgeListResult load_edge_list(const std::string& path, Indexing indexing,
                              std::optional<int> n_override = std::nullopt);
// Canonical "i j\n" lines, 0-based, sorted lexicographically.
void emit_edge_list(const Network& g, const std::string& path);

} // namespace netiv
