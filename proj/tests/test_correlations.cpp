#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "xychain/correlations.hpp"
#include "xychain/oracle.hpp"

using namespace xychain;
using correlations::correlation_partials;
using correlations::correlation_set;
using correlations::GTable;

namespace {
QuadratureConfig tight() {
    QuadratureConfig c;
    c.abs_tol = 1e-12;
    c.rel_tol = 1e-11;
    return c;
}
}  // namespace

TEST_CASE("pair correlators against pinned values") {
    const auto cfg = tight();
    auto c1 = correlation_set({0.5, 1.0, 0.0}, Separation::finite(1), cfg);
    CHECK(c1.sxx == doctest::Approx(-0.258657904611).epsilon(1e-9));
    CHECK(c1.syy == doctest::Approx(0.225185851019).epsilon(1e-9));
    CHECK(c1.szz == doctest::Approx(0.931004621718).epsilon(1e-9));

    auto c3 = correlation_set({0.5, 1.0, 0.0}, Separation::finite(3), cfg);
    CHECK(c3.sxx == doctest::Approx(-0.041159859362).epsilon(1e-8));
    CHECK(c3.syy == doctest::Approx(0.006674849498).epsilon(1e-7));
    CHECK(c3.szz == doctest::Approx(0.873052544393).epsilon(1e-9));

    auto c2 = correlation_set({0.5, 1.0, 0.3}, Separation::finite(2), cfg);
    CHECK(c2.sxx == doctest::Approx(0.068981654691).epsilon(1e-8));
    CHECK(c2.syy == doctest::Approx(-0.020152158725).epsilon(1e-7));
    CHECK(c2.szz == doctest::Approx(0.918263777399).epsilon(1e-9));
}

TEST_CASE("r = 1 correlators reduce to single G coefficients") {
    // The 1x1 transverse determinants are G_{-1} and G_{+1} themselves,
    // so this pins the Toeplitz index layout.
    const auto cfg = tight();
    const ChainParams p{1.5, 0.25, 0.1};
    GTable t(p, cfg, 1);
    auto c = correlation_set(t, Separation::finite(1));
    CHECK(std::abs(c.sxx - t.g(-1)) < 1e-14);
    CHECK(std::abs(c.syy - t.g(1)) < 1e-14);
    CHECK(std::abs(c.szz - (t.m() * t.m() - t.g(1) * t.g(-1))) < 1e-14);
}

TEST_CASE("table and direct evaluations agree") {
    const auto cfg = tight();
    const ChainParams p{0.8, 0.6, 0.2};
    GTable t(p, cfg, 4);
    for (int r : {1, 2, 4}) {
        auto a = correlation_set(t, Separation::finite(r));
        auto b = correlation_set(p, Separation::finite(r), cfg);
        CHECK(std::abs(a.sxx - b.sxx) < 1e-12);
        CHECK(std::abs(a.syy - b.syy) < 1e-12);
        CHECK(std::abs(a.szz - b.szz) < 1e-12);
    }
    CHECK_THROWS_AS(t.g(5), std::out_of_range);
    CHECK_THROWS_AS(t.dg(-6, Tag::J), std::out_of_range);
}

TEST_CASE("infinite separation factorizes") {
    const auto cfg = tight();
    for (const ChainParams p : {ChainParams{0.5, 1.0, 0.0}, ChainParams{1.5, 0.25, 0.1}}) {
        auto c = correlation_set(p, Separation::infinite(), cfg);
        const double m = chain_model::magnetization(p, cfg);
        CHECK(c.sxx == 0.0);
        CHECK(c.syy == 0.0);
        CHECK(std::abs(c.szz - m * m) < 1e-12);
    }
}

TEST_CASE("correlators are bounded by one") {
    const auto cfg = tight();
    for (double J : {0.3, 0.9, 1.2, 1.9}) {
        for (int r : {1, 2, 5}) {
            auto c = correlation_set({J, 0.7, 0.15}, Separation::finite(r), cfg);
            CHECK(std::abs(c.sxx) <= 1.0 + 1e-12);
            CHECK(std::abs(c.syy) <= 1.0 + 1e-12);
            CHECK(std::abs(c.szz) <= 1.0 + 1e-12);
            CHECK(std::abs(c.m) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("partials match five-point stencils of the correlators") {
    const auto cfg = tight();
    const ChainParams p{1.5, 0.25, 0.1};
    const double h = 5e-3;
    for (Tag tag : {Tag::J, Tag::Gamma, Tag::D}) {
        auto bump = [&](double x) {
            ChainParams q = p;
            if (tag == Tag::J) q.J = x;
            if (tag == Tag::Gamma) q.gamma = x;
            if (tag == Tag::D) q.D = x;
            return q;
        };
        const double at = tag == Tag::J ? p.J : (tag == Tag::Gamma ? p.gamma : p.D);
        auto d = correlation_partials(p, Separation::finite(2), tag, cfg);

        auto fd = [&](auto pick) {
            return oracle::finite_difference(
                       [&](double x) {
                           return pick(correlation_set(bump(x), Separation::finite(2), cfg));
                       },
                       at, h)
                .value;
        };
        CHECK(std::abs(d.dsxx - fd([](const correlations::CorrelationSet& c) { return c.sxx; })) <
              1e-6);
        CHECK(std::abs(d.dsyy - fd([](const correlations::CorrelationSet& c) { return c.syy; })) <
              1e-6);
        CHECK(std::abs(d.dszz - fd([](const correlations::CorrelationSet& c) { return c.szz; })) <
              1e-6);
        CHECK(std::abs(d.dm - fd([](const correlations::CorrelationSet& c) { return c.m; })) <
              1e-6);
    }
}

TEST_CASE("finite-chain ground state reproduces the correlators") {
    QuadratureConfig cfg;  // default tolerance is plenty against N = 12
    const ChainParams p{0.5, 1.0, 0.0};
    oracle::FiniteChainSpec fs{12, p};
    auto gs = oracle::ground_state(fs);
    for (int r : {1, 2}) {
        auto lib = correlation_set(p, Separation::finite(r), cfg);
        auto ed = oracle::oracle_correlators(gs, fs, r);
        CHECK(std::abs(lib.m - ed.m) < 1e-3);
        CHECK(std::abs(lib.sxx - ed.sxx) < 2e-3);
        CHECK(std::abs(lib.syy - ed.syy) < 2e-3);
        CHECK(std::abs(lib.szz - ed.szz) < 2e-3);
    }
}

TEST_CASE("decay fit input validation and degenerate data") {
    QuadratureConfig cfg;
    const std::vector<int> good{8, 16, 32, 64};
    CHECK_THROWS_AS(correlations::asymptotic_decay_check({0.995, 1.0, 0.0}, {8, 16, 32}, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(correlations::asymptotic_decay_check({0.995, 1.0, 0.0}, {4, 8, 16, 32}, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(correlations::asymptotic_decay_check({0.995, 1.0, 0.0}, {8, 16, 16, 32}, cfg),
                    std::invalid_argument);
    // deep in the gapped phase the tail underflows the fit cutoff
    CHECK_THROWS_AS(correlations::asymptotic_decay_check({0.5, 1.0, 0.0}, good, cfg),
                    DegenerateFit);
    // free chain: all G_r vanish identically
    CHECK_THROWS_AS(correlations::asymptotic_decay_check({0.0, 1.0, 0.0}, good, cfg),
                    DegenerateFit);
}

TEST_CASE("near-critical transverse correlators decay about like 1/r") {
    QuadratureConfig cfg;
    auto fit = correlations::asymptotic_decay_check({0.995, 1.0, 0.0}, {8, 16, 32, 64}, cfg);
    CHECK(fit.slope == doctest::Approx(-0.898).epsilon(0.05));
    CHECK(fit.max_asymmetry >= 0.0);
    CHECK(std::isfinite(fit.max_asymmetry));
}
