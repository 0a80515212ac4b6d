#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <unordered_set>

#include "netiv/errors.hpp"
#include "netiv/graph.hpp"
#include "oracles.hpp"

using namespace netiv;

TEST_CASE("sample_er trivial probabilities") {
    Rng rng(1);
    Network empty = sample_er(3, 0.0, rng);
    CHECK(empty.edge_count() == 0);
    for (int d : empty.degrees()) CHECK(d == 0);

    Network k3 = sample_er(3, 1.0, rng);
    CHECK(k3.edge_count() == 3);
    for (int d : k3.degrees()) CHECK(d == 2);

    CHECK_THROWS_AS(sample_er(3, 1.5, rng), ParameterError);
    CHECK_THROWS_AS(sample_er(3, -0.1, rng), ParameterError);
    CHECK_THROWS_AS(sample_er(0, 0.5, rng), ParameterError);
}

TEST_CASE("sample_er mean degree concentration at n=2000, d=5") {
    int hits = 0;
    for (int s = 0; s < 100; ++s) {
        Rng rng(derive_seed(42, {"er-conc", std::to_string(s)}));
        Network g = sample_er(2000, 5.0 / 2000, rng);
        double d = g.mean_degree();
        if (d >= 5.0 * 0.85 && d <= 5.0 * 1.15) ++hits;
    }
    CHECK(hits >= 99);
}

TEST_CASE("sample_er deterministic replay") {
    Rng a(987654321), b(987654321);
    Network g1 = sample_er(500, 0.01, a);
    Network g2 = sample_er(500, 0.01, b);
    CHECK(g1.edges() == g2.edges());
}

TEST_CASE("sample_er matches per-pair Bernoulli marginals") {
    // The skipping sampler must reproduce the edge inclusion rate.
    int total = 0;
    for (int s = 0; s < 200; ++s) {
        Rng rng(derive_seed(7, {"er-marginal", std::to_string(s)}));
        total += static_cast<int>(sample_er(100, 0.3, rng).edge_count());
    }
    double rate = total / (200.0 * 4950.0);
    CHECK(rate == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("degree_stats on regular, path, empty graphs") {
    DegreeSummary k3 = degree_stats(oracles::complete(3));
    CHECK(k3.min == 2);
    CHECK(k3.median == 2);
    CHECK(k3.mean == 2);
    CHECK(k3.mode == 2);
    CHECK(k3.max == 2);

    DegreeSummary p3 = degree_stats(oracles::path(3));
    CHECK(p3.min == 1);
    CHECK(p3.median == 1);
    CHECK(p3.mean == doctest::Approx(4.0 / 3).epsilon(1e-15));
    CHECK(p3.mode == 1);
    CHECK(p3.max == 2);

    DegreeSummary empty = degree_stats(Network(5, {}));
    CHECK(empty.min == 0);
    CHECK(empty.max == 0);
    CHECK(empty.mean == 0);
}

TEST_CASE("degree_stats mode ties break to the smallest value") {
    // Degrees {1, 1, 2, 2}: mode must be 1.
    Network g(4, {{0, 1}, {2, 3}});
    (void)g;
    DegreeSummary s = degree_stats(g);
    CHECK(s.mode == 1);
    CHECK(s.median == 1);
}

TEST_CASE("square_offdiag hand cases") {
    SparseSymMatrix p3 = square_offdiag(oracles::path(3));
    REQUIRE(p3.nnz() == 1);
    auto [i, j, v] = p3.entries()[0];
    CHECK(i == 0);
    CHECK(j == 2);
    CHECK(v == 1.0);

    // K_n identity: G^(2) = (n-2) G.
    for (int n : {3, 5, 8}) {
        Network kn = oracles::complete(n);
        Mat g2 = square_offdiag(kn).dense();
        Mat expect = (n - 2) * kn.dense_adjacency();
        CHECK((g2 - expect).cwiseAbs().maxCoeff() == 0.0);
    }

    CHECK(square_offdiag(Network(4, {})).nnz() == 0);
}

TEST_CASE("square_offdiag equals brute-force common-neighbor counts, n <= 12") {
    for (int trial = 0; trial < 200; ++trial) {
        Rng rng(derive_seed(11, {"sq-batt", std::to_string(trial)}));
        int n = 1 + static_cast<int>(rng.uniform() * 12);
        double p = rng.uniform();
        Network g = sample_er(n, p, rng);
        Mat got = square_offdiag(g).dense();
        Mat want = oracles::common_neighbors_dense(g);
        CHECK((got - want).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("scale_weight") {
    CHECK(scale_weight(oracles::complete(3)) == 2.0);
    CHECK(scale_weight(oracles::path(3)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(scale_weight(Network(4, {})) == 1.0);
}

TEST_CASE("largest_eigenvalue hand values") {
    NetworkOperator k3(oracles::complete(3), NetworkOperator::Scaling::Unscaled);
    CHECK(largest_eigenvalue(k3) == doctest::Approx(2.0).epsilon(1e-9));

    // P3 is bipartite (eigenvalues +-sqrt(2), 0): the shifted iteration must
    // still land on the top one.
    NetworkOperator p3(oracles::path(3), NetworkOperator::Scaling::Unscaled);
    CHECK(largest_eigenvalue(p3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    NetworkOperator empty(Network(6, {}), NetworkOperator::Scaling::Unscaled);
    CHECK(largest_eigenvalue(empty) == 0.0);

    // Scaled K3: lambda1 = 2 / w = 1.
    NetworkOperator k3s(oracles::complete(3), NetworkOperator::Scaling::Scaled);
    CHECK(largest_eigenvalue(k3s) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("largest_eigenvalue bounds and agreement with dense spectrum") {
    for (int trial = 0; trial < 25; ++trial) {
        Rng rng(derive_seed(3, {"eig-batt", std::to_string(trial)}));
        int n = 5 + static_cast<int>(rng.uniform() * 60);
        Network g = sample_er(n, 3.0 / n, rng);
        NetworkOperator op(g, NetworkOperator::Scaling::Unscaled);
        double lam = largest_eigenvalue(op);
        CHECK(lam <= op.max_entry_degree() + 1e-9);
        CHECK(lam >= op.mean_entry_degree() - 1e-9);
        Spectrum sp = full_spectrum(op);
        if (!sp.eigenvalues.empty())
            CHECK(lam == doctest::Approx(sp.eigenvalues.front()).epsilon(1e-8));
    }
}

TEST_CASE("largest_eigenvalue tracks max{sqrt(max degree), np} on ER graphs") {
    // Rate-constant check: the ratio approaches 1 from above as the scale
    // grows. At np = ln(n) the correction is still ~0.15 at n = 2000, so the
    // band there is wider; at np = 50 the plain [0.9, 1.1] band holds.
    int in_wide = 0;
    for (int s = 0; s < 100; ++s) {
        Rng rng(derive_seed(5, {"ks-rate", std::to_string(s)}));
        int n = 2000;
        Network g = sample_er(n, std::log(static_cast<double>(n)) / n, rng);
        NetworkOperator op(g, NetworkOperator::Scaling::Unscaled);
        double lam = largest_eigenvalue(op, 1e-8);
        double denom = std::max(std::sqrt(static_cast<double>(g.max_degree())),
                                g.mean_degree());
        double ratio = lam / denom;
        if (ratio >= 0.9 && ratio <= 1.25) ++in_wide;
    }
    CHECK(in_wide >= 95);

    int in_tight = 0;
    for (int s = 0; s < 20; ++s) {
        Rng rng(derive_seed(5, {"ks-rate-dense", std::to_string(s)}));
        int n = 2000;
        Network g = sample_er(n, 50.0 / n, rng);
        NetworkOperator op(g, NetworkOperator::Scaling::Unscaled);
        double lam = largest_eigenvalue(op, 1e-8);
        double denom = std::max(std::sqrt(static_cast<double>(g.max_degree())),
                                g.mean_degree());
        double ratio = lam / denom;
        if (ratio >= 0.9 && ratio <= 1.1) ++in_tight;
    }
    CHECK(in_tight == 20);
}

TEST_CASE("full_spectrum hand cases and reconstruction") {
    NetworkOperator p3(oracles::path(3), NetworkOperator::Scaling::Unscaled);
    Spectrum sp = full_spectrum(p3);
    REQUIRE(sp.eigenvalues.size() == 3);
    CHECK(sp.eigenvalues[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sp.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sp.eigenvalues[2] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));

    NetworkOperator k3(oracles::complete(3), NetworkOperator::Scaling::Unscaled);
    Spectrum spk = full_spectrum(k3);
    CHECK(spk.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(spk.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(spk.eigenvalues[2] == doctest::Approx(-1.0).epsilon(1e-12));

    NetworkOperator empty(Network(4, {}), NetworkOperator::Scaling::Unscaled);
    for (double l : full_spectrum(empty).eigenvalues) CHECK(l == 0.0);

    Rng rng(99);
    Network g = sample_er(80, 0.08, rng);
    NetworkOperator op(g, NetworkOperator::Scaling::Unscaled);
    Spectrum s = full_spectrum(op);
    Mat lam = Mat::Zero(80, 80);
    for (int k = 0; k < 80; ++k) lam(k, k) = s.eigenvalues[k];
    Mat recon = s.eigenvectors * lam * s.eigenvectors.transpose();
    CHECK((recon - op.dense()).norm() <= 1e-8 * 80);

    // Trace zero, sum of squares = frobenius norm.
    double sum = 0.0, sumsq = 0.0;
    for (double l : s.eigenvalues) {
        sum += l;
        sumsq += l * l;
    }
    CHECK(std::abs(sum) <= 1e-8 * 80);
    CHECK(sumsq == doctest::Approx(frobenius_sq(op)).epsilon(1e-6));

    CHECK_THROWS_AS(full_spectrum(op, 79), CapacityError);
}

TEST_CASE("neighbors_at_distance shells") {
    auto sh = neighbors_at_distance(oracles::path(3), 0, 2);
    REQUIRE(sh.size() == 3);
    CHECK(sh[0] == std::vector<int>{0});
    CHECK(sh[1] == std::vector<int>{1});
    CHECK(sh[2] == std::vector<int>{2});

    Network iso(4, {{1, 2}});
    auto sh_iso = neighbors_at_distance(iso, 0, 3);
    REQUIRE(sh_iso.size() == 4);
    CHECK(sh_iso[0] == std::vector<int>{0});
    CHECK(sh_iso[1].empty());
    CHECK(sh_iso[2].empty());
    CHECK(sh_iso[3].empty());

    auto sh_k3 = neighbors_at_distance(oracles::complete(3), 0, 2);
    CHECK(sh_k3[1] == std::vector<int>{1, 2});
    CHECK(sh_k3[2].empty());
}

TEST_CASE("neighbors_at_distance shells partition the BFS ball") {
    for (int trial = 0; trial < 40; ++trial) {
        Rng rng(derive_seed(13, {"shell-batt", std::to_string(trial)}));
        int n = 2 + static_cast<int>(rng.uniform() * 40);
        Network g = sample_er(n, 2.5 / n, rng);
        auto dist = oracles::all_pairs_dist(g);
        int i = static_cast<int>(rng.uniform() * n);
        int smax = static_cast<int>(rng.uniform() * 5);
        auto shells = neighbors_at_distance(g, i, smax);
        std::set<int> seen;
        for (int s = 0; s <= smax; ++s) {
            for (int v : shells[s]) {
                CHECK(dist[i][v] == s);
                CHECK(seen.insert(v).second); // disjoint
            }
        }
        for (int v = 0; v < n; ++v)
            if (dist[i][v] >= 0 && dist[i][v] <= smax) CHECK(seen.count(v) == 1);
    }
}

TEST_CASE("frobenius_sq") {
    NetworkOperator k3(oracles::complete(3), NetworkOperator::Scaling::Unscaled);
    CHECK(frobenius_sq(k3) == 6.0);
    CHECK(frobenius_sq(square_offdiag(oracles::path(3))) == 2.0);
    CHECK(frobenius_sq(SparseSymMatrix(5, {})) == 0.0);
}

TEST_CASE("edge list round trip and parsing") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "netiv_graph_test";
    fs::create_directories(dir);

    {
        std::ofstream f(dir / "p3.txt");
        f << "0 1\n1 2\n";
    }
    EdgeListResult p3 = load_edge_list((dir / "p3.txt").string(), Indexing::Zero);
    CHECK(p3.network.n() == 3);
    CHECK(p3.network.edges() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});

    {
        std::ofstream f(dir / "dup.txt");
        f << "0 1\n1 0\n1 1\n";
    }
    EdgeListResult dup = load_edge_list((dir / "dup.txt").string(), Indexing::Zero);
    CHECK(dup.network.edge_count() == 1);
    CHECK(dup.self_loops_dropped == 1);
    CHECK(dup.duplicates_merged == 1);

    {
        std::ofstream f(dir / "bad.txt");
        f << "0 1\nnot numbers\n";
    }
    CHECK_THROWS_AS(load_edge_list((dir / "bad.txt").string(), Indexing::Zero), ParseError);

    {
        std::ofstream f(dir / "neg.txt");
        f << "0 -2\n";
    }
    CHECK_THROWS_AS(load_edge_list((dir / "neg.txt").string(), Indexing::Zero), ParseError);

    // Comma separation, comments, 1-based indexing.
    {
        std::ofstream f(dir / "fmt.txt");
        f << "# comment line\n1,2\n2,3 # trailing comment\n";
    }
    EdgeListResult fmt = load_edge_list((dir / "fmt.txt").string(), Indexing::One);
    CHECK(fmt.network.edges() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});

    // Round trip after canonicalization: emit, reload, emit again, compare bytes.
    Rng rng(2024);
    Network g = sample_er(40, 0.12, rng);
    emit_edge_list(g, (dir / "rt1.txt").string());
    Network g2 = load_edge_list((dir / "rt1.txt").string(), Indexing::Zero).network;
    emit_edge_list(g2, (dir / "rt2.txt").string());
    std::ifstream a(dir / "rt1.txt"), b(dir / "rt2.txt");
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
    CHECK(g.edges() == g2.edges());
}

TEST_CASE("network invariants: symmetry, zero diagonal, degree consistency") {
    for (int trial = 0; trial < 30; ++trial) {
        Rng rng(derive_seed(17, {"net-batt", std::to_string(trial)}));
        int n = 1 + static_cast<int>(rng.uniform() * 30);
        Network g = sample_er(n, rng.uniform(), rng);
        std::vector<int> deg(n, 0);
        for (const auto& [i, j] : g.edges()) {
            CHECK(i < j);
            ++deg[i];
            ++deg[j];
        }
        CHECK(deg == g.degrees());
        std::set<std::pair<int, int>> uniq(g.edges().begin(), g.edges().end());
        CHECK(uniq.size() == g.edges().size());
    }
}

TEST_CASE("NetworkOperator scaling divides entries by w") {
    Rng rng(31);
    Network g = sample_er(30, 0.2, rng);
    NetworkOperator raw(g, NetworkOperator::Scaling::Unscaled);
    NetworkOperator scaled(g, NetworkOperator::Scaling::Scaled);
    double w = scale_weight(g);
    CHECK(scaled.scale() == w);
    Mat diff = raw.dense() / w - scaled.dense();
    CHECK(diff.cwiseAbs().maxCoeff() <= 1e-15);
    CHECK_THROWS_AS(NetworkOperator(g, 0.0), ParameterError);
}
