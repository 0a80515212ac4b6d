#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netiv/rng.hpp"
#include "netiv/stats.hpp"
#include "netiv/weakiv.hpp"

using namespace netiv;

namespace {

// Synthetic just-identified fit with a PSD homoskedastic block.
IvFit synth_fit(double xi, double pi, double v_xi, double v_pi, double cov) {
    IvFit f;
    f.n = 100;
    f.xi_hat = xi;
    f.pi_hat = pi;
    f.beta_defined = (pi != 0.0);
    f.beta_hat = f.beta_defined ? xi / pi : 0.0;
    f.vcov_homo = {v_xi, v_pi, cov};
    f.vcov_hac = f.vcov_homo;
    return f;
}

IvFit random_psd_fit(Rng& rng, double scale = 1.0) {
    double l11 = (0.1 + rng.uniform()) * scale;
    double l21 = (rng.uniform() - 0.5) * scale;
    double l22 = (0.1 + rng.uniform()) * scale;
    // [v_xi cov; cov v_pi] = L L' with L = [[l11, 0], [l21, l22]].
    double v_xi = l11 * l11;
    double cov = l11 * l21;
    double v_pi = l21 * l21 + l22 * l22;
    double xi = rng.normal() * scale;
    double pi = rng.normal() * scale;
    if (pi == 0.0) pi = 0.1;
    return synth_fit(xi, pi, v_xi, v_pi, cov);
}

} // namespace

TEST_CASE("chi-squared quantile matches the incomplete-gamma oracle") {
    // Value pinned after verifying against the regularized incomplete gamma.
    CHECK(std::abs(chi2_quantile(0.95, 1.0) - 3.841458820694124) <= 1e-10);
    // Round trip through the CDF.
    for (double p : {0.01, 0.5, 0.9, 0.95, 0.99}) {
        double q = chi2_quantile(p, 1.0);
        CHECK(chi2_cdf(q, 1.0) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK(std::abs(normal_two_sided_crit(0.05) - 1.959964) <= 1e-6);
}

TEST_CASE("omega_at arithmetic") {
    CHECK(omega_at(0.0, 3.5, 1.0, 0.2) == 3.5);
    CHECK(omega_at(2.0, 1.0, 1.0, 0.0) == 5.0);
}

TEST_CASE("omega_at positive for all beta0 when the block is PSD") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        IvFit f = random_psd_fit(rng);
        const VcovBlock& b = f.vcov_homo;
        // Discriminant of the quadratic in beta0 must be <= 0.
        double disc = 4.0 * b.cov_xipi * b.cov_xipi - 4.0 * b.v_pi * b.v_xi;
        CHECK(disc <= 1e-12);
        for (double beta0 : {-10.0, -1.0, 0.0, 0.3, 2.0, 25.0})
            CHECK(omega_at(beta0, b.v_xi, b.v_pi, b.cov_xipi) >= -1e-12);
    }
}

TEST_CASE("ar_test basics") {
    // xi = beta0 * pi exactly: statistic 0, never rejects.
    IvFit f = synth_fit(0.8, 2.0, 1.0, 1.0, 0.2);
    ArResult r = ar_test(0.4, f, VcovKind::Homoskedastic);
    CHECK(r.statistic == 0.0);
    CHECK(!r.reject);
    CHECK(r.p_value == doctest::Approx(1.0));

    // xi = pi = 0: statistic 0 at every beta0.
    IvFit z = synth_fit(0.0, 0.0, 1.0, 1.0, 0.0);
    for (double b0 : {-5.0, 0.0, 1.0, 7.7}) {
        ArResult rz = ar_test(b0, z, VcovKind::Homoskedastic);
        CHECK(rz.statistic == 0.0);
        CHECK(!rz.reject);
    }
    ConfidenceSet set = ar_confidence_set_closed_form(z, VcovKind::Homoskedastic, 0.05);
    CHECK(set.kind == ConfidenceSet::Kind::WholeLine);

    // Omega <= 0 path: invalid marker, non-rejection.
    IvFit degen = synth_fit(3.0, 1.0, 0.0, 0.0, 0.0);
    ArResult rd = ar_test(0.0, degen, VcovKind::Homoskedastic);
    CHECK(!rd.omega_valid);
    CHECK(!rd.reject);
}

TEST_CASE("AR statistic is zero at beta_hat") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        IvFit f = random_psd_fit(rng);
        ArResult r = ar_test(f.beta_hat, f, VcovKind::Homoskedastic);
        CHECK(r.statistic <= 1e-18);
        ConfidenceSet set = ar_confidence_set_closed_form(f, VcovKind::Homoskedastic, 0.05);
        if (set.kind != ConfidenceSet::Kind::Empty) CHECK(set.contains(f.beta_hat));
    }
}

TEST_CASE("closed form set shapes") {
    // Strong instrument, tiny noise: bounded set containing beta_true with
    // width shrinking in the noise scale.
    double beta_true = 0.4666;
    IvFit strong = synth_fit(beta_true * 5.0, 5.0, 1e-4, 1e-4, 0.0);
    ConfidenceSet s1 = ar_confidence_set_closed_form(strong, VcovKind::Homoskedastic, 0.05);
    REQUIRE(s1.kind == ConfidenceSet::Kind::Bounded);
    CHECK(s1.contains(beta_true));
    IvFit stronger = synth_fit(beta_true * 5.0, 5.0, 1e-8, 1e-8, 0.0);
    ConfidenceSet s2 = ar_confidence_set_closed_form(stronger, VcovKind::Homoskedastic, 0.05);
    REQUIRE(s2.kind == ConfidenceSet::Kind::Bounded);
    CHECK((s2.hi - s2.lo) < (s1.hi - s1.lo));
    CHECK(s2.contains(beta_true));

    // Weak instrument: V_pi dominates pi^2 -> A < 0 -> rays or whole line.
    IvFit weak = synth_fit(0.3, 0.05, 0.5, 0.5, 0.0);
    ConfidenceSet sw = ar_confidence_set_closed_form(weak, VcovKind::Homoskedastic, 0.05);
    CHECK((sw.kind == ConfidenceSet::Kind::TwoRays ||
           sw.kind == ConfidenceSet::Kind::WholeLine));
}

TEST_CASE("grid acceptance basics") {
    IvFit strong = synth_fit(0.4666 * 5.0, 5.0, 1e-6, 1e-6, 0.0);
    GridSpec one{0.4666, 0.4666, 1};
    auto acc = grid_confidence_set(strong, VcovKind::Homoskedastic, 0.05, one);
    CHECK(acc.size() == 1);

    // A grid entirely outside a bounded set accepts nothing.
    ConfidenceSet set = ar_confidence_set_closed_form(strong, VcovKind::Homoskedastic, 0.05);
    REQUIRE(set.kind == ConfidenceSet::Kind::Bounded);
    GridSpec off{set.hi + 1.0, set.hi + 2.0, 50};
    CHECK(grid_confidence_set(strong, VcovKind::Homoskedastic, 0.05, off).empty());
}

TEST_CASE("duality: closed form equals pointwise testing") {
    Rng rng(4242);
    int disagreements = 0;
    for (int trial = 0; trial < 200; ++trial) {
        IvFit f = random_psd_fit(rng, trial % 3 == 0 ? 0.05 : 1.0);
        ConfidenceSet set = ar_confidence_set_closed_form(f, VcovKind::Homoskedastic, 0.05);
        GridSpec grid{-10.0, 10.0, 401};
        auto accepted = grid_confidence_set(f, VcovKind::Homoskedastic, 0.05, grid);
        const double step = (grid.hi - grid.lo) / (grid.points - 1);
        std::size_t k = 0;
        for (int g = 0; g < grid.points; ++g) {
            double b0 = grid.lo + g * step; // same expression as the grid op
            bool in_grid = (k < accepted.size() && accepted[k] == b0);
            if (in_grid) ++k;
            if (in_grid != set.contains(b0)) ++disagreements;
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("AR statistic invariant to instrument units") {
    Rng rng(515);
    for (int trial = 0; trial < 25; ++trial) {
        IvFit f = random_psd_fit(rng);
        for (double c : {0.01, 3.0, 250.0}) {
            IvFit g = synth_fit(f.xi_hat / c, f.pi_hat / c, f.vcov_homo.v_xi / (c * c),
                                f.vcov_homo.v_pi / (c * c), f.vcov_homo.cov_xipi / (c * c));
            for (double b0 : {-2.0, 0.0, 0.4666, 5.0}) {
                ArResult ra = ar_test(b0, f, VcovKind::Homoskedastic);
                ArResult rb = ar_test(b0, g, VcovKind::Homoskedastic);
                CHECK(ra.statistic == doctest::Approx(rb.statistic).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("ci_summary conventions") {
    ConfidenceSet bounded;
    bounded.kind = ConfidenceSet::Kind::Bounded;
    bounded.lo = 0.1;
    bounded.hi = 0.5;
    auto [len, inf] = ci_summary(bounded);
    CHECK(len == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(!inf);

    ConfidenceSet line;
    line.kind = ConfidenceSet::Kind::WholeLine;
    auto [len2, inf2] = ci_summary(line);
    CHECK(std::isinf(len2));
    CHECK(inf2);

    ConfidenceSet empty;
    empty.kind = ConfidenceSet::Kind::Empty;
    auto [len3, inf3] = ci_summary(empty);
    CHECK(len3 == 0.0);
    CHECK(!inf3);

    ConfidenceSet rays;
    rays.kind = ConfidenceSet::Kind::TwoRays;
    rays.left_hi = -1.0;
    rays.right_lo = 2.0;
    CHECK(rays.contains(-1.5));
    CHECK(!rays.contains(0.0));
    CHECK(rays.contains(2.5));
    auto [len4, inf4] = ci_summary(rays);
    CHECK(inf4);
    (void)len4;
}

TEST_CASE("kolmogorov-smirnov helper sanity") {
    // Uniform sample against the uniform CDF should not reject.
    Rng rng(999);
    std::vector<double> u(2000);
    for (auto& v : u) v = rng.uniform();
    KsResult r = ks_test(u, [](double x) { return std::min(1.0, std::max(0.0, x)); });
    CHECK(r.p_value > 0.01);
    // Shifted sample must reject hard.
    for (auto& v : u) v = 0.5 * v;
    KsResult r2 = ks_test(u, [](double x) { return std::min(1.0, std::max(0.0, x)); });
    CHECK(r2.p_value < 1e-6);
}
