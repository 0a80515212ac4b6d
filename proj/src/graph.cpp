#include "netiv/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "netiv/errors.hpp"

namespace netiv {

Network::Network(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 0) throw ParameterError("Network: negative node count");
    for (auto& [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw ParameterError("Network: edge endpoint out of range");
        if (i == j) throw ParameterError("Network: self-loop not allowed");
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    degrees_.assign(n_, 0);
    adj_.assign(n_, {});
    for (const auto& [i, j] : edges_) {
        ++degrees_[i];
        ++degrees_[j];
    }
    for (int v = 0; v < n_; ++v) adj_[v].reserve(degrees_[v]);
    for (const auto& [i, j] : edges_) {
        adj_[i].push_back(j);
        adj_[j].push_back(i);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

double Network::mean_degree() const {
    if (n_ == 0) return 0.0;
    return 2.0 * static_cast<double>(edges_.size()) / n_;
}

int Network::max_degree() const {
    if (degrees_.empty()) return 0;
    return *std::max_element(degrees_.begin(), degrees_.end());
}

Mat Network::dense_adjacency() const {
    Mat a = Mat::Zero(n_, n_);
    for (const auto& [i, j] : edges_) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
    }
    return a;
}

DegreeSummary degree_stats(const Network& g) {
    std::vector<double> vals(g.degrees().begin(), g.degrees().end());
    return value_stats(vals);
}

DegreeSummary value_stats(const std::vector<double>& values) {
    if (values.empty()) throw ParameterError("value_stats: empty sequence");
    std::vector<double> v = values;
    std::sort(v.begin(), v.end());
    DegreeSummary s;
    s.min = v.front();
    s.max = v.back();
    const std::size_t n = v.size();
    s.median = (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(n);
    // Mode: smallest value attaining maximal frequency.
    double best = v[0];
    std::size_t best_count = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && v[j] == v[i]) ++j;
        if (j - i > best_count) {
            best_count = j - i;
            best = v[i];
        }
        i = j;
    }
    s.mode = best;
    return s;
}

SparseSymMatrix::SparseSymMatrix(int n, std::vector<std::tuple<int, int, double>> entries)
    : n_(n) {
    for (auto& [i, j, v] : entries) {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw ParameterError("SparseSymMatrix: index out of range");
        if (i > j) std::swap(i, j);
        (void)v;
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                  return std::tie(std::get<0>(a), std::get<1>(a)) <
                         std::tie(std::get<0>(b), std::get<1>(b));
              });
    // Merge duplicates, drop zeros.
    entries_.reserve(entries.size());
    for (const auto& e : entries) {
        if (!entries_.empty() && std::get<0>(entries_.back()) == std::get<0>(e) &&
            std::get<1>(entries_.back()) == std::get<1>(e)) {
            std::get<2>(entries_.back()) += std::get<2>(e);
        } else {
            entries_.push_back(e);
        }
    }
    std::erase_if(entries_, [](const auto& e) { return std::get<2>(e) == 0.0; });
}

Vec SparseSymMatrix::apply(const Vec& x) const {
    Vec y = Vec::Zero(n_);
    for (const auto& [i, j, v] : entries_) {
        if (i == j) {
            y[i] += v * x[i];
        } else {
            y[i] += v * x[j];
            y[j] += v * x[i];
        }
    }
    return y;
}

Mat SparseSymMatrix::dense() const {
    Mat m = Mat::Zero(n_, n_);
    for (const auto& [i, j, v] : entries_) {
        m(i, j) = v;
        m(j, i) = v;
    }
    return m;
}

std::vector<double> SparseSymMatrix::support_degrees() const {
    std::vector<double> d(n_, 0.0);
    for (const auto& [i, j, v] : entries_) {
        if (i != j && v != 0.0) {
            d[i] += 1.0;
            d[j] += 1.0;
        }
    }
    return d;
}

std::vector<double> SparseSymMatrix::weighted_degrees() const {
    std::vector<double> d(n_, 0.0);
    for (const auto& [i, j, v] : entries_) {
        if (i != j) {
            d[i] += v;
            d[j] += v;
        }
    }
    return d;
}

Network sample_er(int n, double p, Rng& rng) {
    if (n < 1) throw ParameterError("sample_er: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("sample_er: p must lie in [0,1]");
    std::vector<std::pair<int, int>> edges;
    if (p == 0.0 || n == 1) return Network(n, {});
    const std::int64_t total = static_cast<std::int64_t>(n) * (n - 1) / 2;
    if (p == 1.0) {
        edges.reserve(static_cast<std::size_t>(total));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
        return Network(n, std::move(edges));
    }
    // Geometric skipping over the linearized pair index (row-major over i<j).
    const double log1mp = std::log1p(-p);
    std::int64_t idx = -1;
    while (true) {
        double u = 1.0 - rng.uniform(); // (0, 1]
        double skip = std::floor(std::log(u) / log1mp);
        if (skip > static_cast<double>(total)) break;
        idx += 1 + static_cast<std::int64_t>(skip);
        if (idx >= total) break;
        // Invert the linear index to (i, j).
        std::int64_t i = 0;
        std::int64_t rem = idx;
        std::int64_t row_len = n - 1;
        while (rem >= row_len) {
            rem -= row_len;
            ++i;
            --row_len;
        }
        edges.emplace_back(static_cast<int>(i), static_cast<int>(i + 1 + rem));
    }
    return Network(n, std::move(edges));
}

SparseSymMatrix square_offdiag(const Network& g) {
    // Count two-step walks i-k-j for i < j by enumerating neighbor pairs of
    // each middle node k.
    std::map<std::pair<int, int>, double> counts;
    for (int k = 0; k < g.n(); ++k) {
        const auto& nb = g.neighbors(k);
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                counts[{nb[a], nb[b]}] += 1.0;
    }
    std::vector<std::tuple<int, int, double>> entries;
    entries.reserve(counts.size());
    for (const auto& [ij, v] : counts) entries.emplace_back(ij.first, ij.second, v);
    return SparseSymMatrix(g.n(), std::move(entries));
}

double scale_weight(const Network& g) {
    if (g.empty()) return 1.0;
    return std::max(g.mean_degree(), std::sqrt(static_cast<double>(g.max_degree())));
}

NetworkOperator::NetworkOperator(Network g, Scaling s) : g_(std::move(g)) {
    scale_ = (s == Scaling::Scaled) ? scale_weight(g_) : 1.0;
}

NetworkOperator::NetworkOperator(Network g, double scale) : g_(std::move(g)), scale_(scale) {
    if (!(scale > 0.0)) throw ParameterError("NetworkOperator: scale must be positive");
}

Vec NetworkOperator::apply(const Vec& x) const {
    Vec y = Vec::Zero(g_.n());
    for (const auto& [i, j] : g_.edges()) {
        y[i] += x[j];
        y[j] += x[i];
    }
    return y / scale_;
}

Mat NetworkOperator::dense() const {
    return g_.dense_adjacency() / scale_;
}

double largest_eigenvalue(const NetworkOperator& op, double tol) {
    if (!(tol > 0.0)) throw ParameterError("largest_eigenvalue: tol must be positive");
    const int n = op.n();
    if (n == 0 || op.base().empty()) return 0.0;

    // Shift by the max entry degree so the shifted spectrum is nonnegative;
    // this removes the +/- oscillation on bipartite graphs. The all-ones start
    // has positive overlap with the top eigenvector (Perron-Frobenius).
    const double shift = op.max_entry_degree();
    Vec v = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
    double theta = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    double prev_change = std::numeric_limits<double>::infinity();
    const double stall = std::min(tol, 1e-10);
    for (int it = 0; it < 20000; ++it) {
        Vec w = op.apply(v) + shift * v;
        double norm = w.norm();
        if (norm == 0.0) return -shift; // cannot happen for nonempty graphs
        w /= norm;
        theta = w.dot(op.apply(w));
        double change = std::abs(theta - prev);
        v = w;
        if (change == 0.0) return theta;
        // The Rayleigh quotient converges geometrically; once the per-step
        // change stalls, bound the remaining tail from the observed ratio.
        if (std::isfinite(prev_change) && prev_change > 0.0 && change <= stall) {
            double ratio = change / prev_change;
            if (ratio < 1.0 && change * ratio / (1.0 - ratio) <= 0.5 * tol) return theta;
        }
        prev = theta;
        prev_change = change;
    }
    // Stalled short of the requested accuracy (near-degenerate top pair):
    // fall back to the dense decomposition when affordable.
    if (n <= 4096) {
        Spectrum sp = full_spectrum(op);
        return sp.eigenvalues.front();
    }
    throw ConvergenceError("largest_eigenvalue: power iteration stalled and n exceeds the dense cap");
}

Spectrum full_spectrum(const NetworkOperator& op, int dense_cap) {
    const int n = op.n();
    if (n > dense_cap) throw CapacityError("full_spectrum: n exceeds dense cap");
    Spectrum out;
    if (n == 0) return out;
    Eigen::SelfAdjointEigenSolver<Mat> es(op.dense());
    if (es.info() != Eigen::Success)
        throw SolveError("full_spectrum: eigendecomposition failed");
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    // Eigen returns ascending order; flip to descending.
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = es.eigenvalues()(n - 1 - k);
        out.eigenvectors.col(k) = es.eigenvectors().col(n - 1 - k);
    }
    return out;
}

std::vector<std::vector<int>> neighbors_at_distance(const Network& g, int i, int s_max) {
    if (i < 0 || i >= g.n()) throw ParameterError("neighbors_at_distance: node out of range");
    if (s_max < 0) throw ParameterError("neighbors_at_distance: s_max must be >= 0");
    std::vector<std::vector<int>> shells(s_max + 1);
    std::vector<int> dist(g.n(), -1);
    dist[i] = 0;
    shells[0].push_back(i);
    std::deque<int> frontier{i};
    int s = 0;
    while (!frontier.empty() && s < s_max) {
        std::deque<int> next;
        for (int u : frontier) {
            for (int w : g.neighbors(u)) {
                if (dist[w] < 0) {
                    dist[w] = s + 1;
                    next.push_back(w);
                    shells[s + 1].push_back(w);
                }
            }
        }
        frontier = std::move(next);
        ++s;
    }
    for (auto& shell : shells) std::sort(shell.begin(), shell.end());
    return shells;
}

double frobenius_sq(const SparseSymMatrix& m) {
    double sum = 0.0;
    for (const auto& [i, j, v] : m.entries())
        if (i != j) sum += 2.0 * v * v;
    return sum;
}

double frobenius_sq(const NetworkOperator& op) {
    double w = op.scale();
    return 2.0 * static_cast<double>(op.base().edge_count()) / (w * w);
}

EdgeListResult load_edge_list(const std::string& path, Indexing indexing,
                              std::optional<int> n_override) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_edge_list: cannot open '" + path + "'");
    EdgeListResult res;
    std::vector<std::pair<int, int>> edges;
    std::string line;
    long lineno = 0;
    int max_id = -1;
    const int offset = (indexing == Indexing::One) ? 1 : 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char& c : line)
            if (c == ',') c = ' ';
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ss(line);
        long a, b;
        if (!(ss >> a))
            throw ParseError("load_edge_list: line " + std::to_string(lineno) +
                                 ": expected an integer node id",
                             lineno);
        if (!(ss >> b))
            throw ParseError("load_edge_list: line " + std::to_string(lineno) +
                                 ": expected two integers",
                             lineno);
        std::string trailing;
        if (ss >> trailing)
            throw ParseError("load_edge_list: line " + std::to_string(lineno) +
                                 ": trailing token '" + trailing + "'",
                             lineno);
        a -= offset;
        b -= offset;
        if (a < 0 || b < 0)
            throw ParseError("load_edge_list: line " + std::to_string(lineno) +
                                 ": negative node id",
                             lineno);
        if (a == b) {
            ++res.self_loops_dropped;
            continue;
        }
        max_id = std::max(max_id, static_cast<int>(std::max(a, b)));
        edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
    int n = n_override.value_or(max_id + 1);
    for (auto& [i, j] : edges)
        if (i > j) std::swap(i, j);
    std::sort(edges.begin(), edges.end());
    auto last = std::unique(edges.begin(), edges.end());
    res.duplicates_merged = static_cast<long>(edges.end() - last);
    edges.erase(last, edges.end());
    res.network = Network(n, std::move(edges));
    return res;
}

void emit_edge_list(const Network& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("emit_edge_list: cannot open '" + path + "' for writing");
    for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

} // namespace netiv
