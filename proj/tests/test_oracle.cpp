#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "xychain/correlations.hpp"
#include "xychain/oracle.hpp"
#include "xychain/states.hpp"

using namespace xychain;
using oracle::FiniteChainSpec;
using oracle::ground_state;
using oracle::ground_state_dense;

TEST_CASE("chain size validation") {
    CHECK_THROWS_AS(FiniteChainSpec({3, {0.5, 1.0, 0.0}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(FiniteChainSpec({2, {0.5, 1.0, 0.0}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(FiniteChainSpec({16, {0.5, 1.0, 0.0}}).validate(), std::invalid_argument);
    CHECK_NOTHROW(FiniteChainSpec({12, {0.5, 1.0, 0.0}}).validate());
}

TEST_CASE("operator application is Hermitian and linear") {
    const FiniteChainSpec fs{6, {0.8, 0.6, 0.2}};
    const int dim = fs.dimension();
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd x(dim), y(dim);
    for (int i = 0; i < dim; ++i) {
        x(i) = std::complex<double>(gauss(rng), gauss(rng));
        y(i) = std::complex<double>(gauss(rng), gauss(rng));
    }
    Eigen::VectorXcd hx(dim), hy(dim);
    oracle::apply_hamiltonian(fs, x, hx);
    oracle::apply_hamiltonian(fs, y, hy);
    const std::complex<double> lhs = x.dot(hy);  // <x|H y>
    const std::complex<double> rhs = hx.dot(y);  // <H x|y>
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));

    Eigen::VectorXcd hz(dim);
    oracle::apply_hamiltonian(fs, Eigen::VectorXcd(2.0 * x - 3.0 * y), hz);
    CHECK((hz - (2.0 * hx - 3.0 * hy)).norm() < 1e-10 * hz.norm());
}

TEST_CASE("iterative and dense ground states coincide") {
    for (int N : {4, 6, 8}) {
        for (const ChainParams p : {ChainParams{0.5, 1.0, 0.0}, ChainParams{1.3, 0.7, 0.0}}) {
            const FiniteChainSpec fs{N, p};
            const auto a = ground_state(fs);
            const auto b = ground_state_dense(fs);
            CHECK(std::abs(a.energy - b.energy) < 1e-9 * std::abs(b.energy));
            CHECK(std::abs(a.state.norm() - 1.0) < 1e-12);
            const double overlap = std::abs(a.state.dot(b.state));
            CHECK(1.0 - overlap < 1e-8);
        }
    }
}

TEST_CASE("free chain is the fully polarized product state") {
    const FiniteChainSpec fs{8, {0.0, 1.0, 0.0}};
    const auto gs = ground_state(fs);
    CHECK(gs.energy == doctest::Approx(-8.0).epsilon(1e-12));
    const auto c = oracle::oracle_correlators(gs, fs, 1);
    CHECK(c.m == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(c.sxx) < 1e-10);
    CHECK(std::abs(c.syy) < 1e-10);
    CHECK(c.szz == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("reduced pair matrix: trace, Hermiticity, translation invariance") {
    const FiniteChainSpec fs{10, {0.5, 1.0, 0.0}};
    const auto gs = ground_state(fs);
    Eigen::Matrix4cd first = oracle::reduced_pair(gs, fs, 0, 1);
    CHECK(std::abs(first.trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(first.trace().imag()) < 1e-14);
    CHECK((first - first.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    for (int j = 1; j < 10; ++j) {
        const Eigen::Matrix4cd other = oracle::reduced_pair(gs, fs, j, 1);
        CHECK((other - first).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("reduced pair matrix has the X sparsity pattern") {
    const FiniteChainSpec fs{10, {1.5, 0.25, 0.0}};
    const auto gs = ground_state(fs);
    const Eigen::Matrix4cd rho = oracle::reduced_pair(gs, fs, 0, 2);
    // tolerance reflects the eigenvector error, residual over gap
    for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}}) {
        CHECK(std::abs(rho(i, j)) < 1e-7);
        CHECK(std::abs(rho(j, i)) < 1e-7);
    }
    // center block is real and symmetric for this chain
    CHECK(std::abs(rho(1, 2).imag()) < 1e-7);
    CHECK(std::abs(rho(0, 3).imag()) < 1e-7);
}

TEST_CASE("near-degenerate doublet deep in the ordered phase") {
    // The splitting between the two lowest states closes like an N-th
    // power of 1/J, so at J = 20 and N = 12 the solver must flag the
    // doublet and return an orthonormal partner.
    const FiniteChainSpec fs{12, {20.0, 1.0, 0.0}};
    const auto gs = ground_state(fs);
    CHECK(gs.degenerate);
    CHECK(gs.gap < 1e-10);
    CHECK(std::abs(gs.partner.norm() - 1.0) < 1e-10);
    CHECK(std::abs(gs.state.dot(gs.partner)) < 1e-8);

    // a healthy gap away from the degeneracy
    const auto gapped = ground_state(FiniteChainSpec{12, {0.5, 1.0, 0.0}});
    CHECK_FALSE(gapped.degenerate);
    CHECK(gapped.gap > 0.1);
}

TEST_CASE("dense eigenbasis information matches the X-state algebra") {
    // Build the pair state and its derivative from the chain integrals,
    // then check the generic 4x4 machinery reproduces the closed form.
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-12;
    cfg.rel_tol = 1e-11;
    const ChainParams p{0.5, 1.0, 0.0};
    const auto cs = correlations::correlation_set(p, Separation::finite(1), cfg);
    const auto cp = correlations::correlation_partials(p, Separation::finite(1), Tag::J, cfg);
    const Eigen::Matrix4cd rho =
        states::to_dense(states::pair_state(cs).entries()).cast<std::complex<double>>();
    const Eigen::Matrix4cd drho =
        states::to_dense(states::xstate_derivative(cp)).cast<std::complex<double>>();

    const double direct = oracle::qfi_dense(rho, drho);
    CHECK(direct == doctest::Approx(1.0154602708).epsilon(1e-8));

    const Eigen::Matrix4cd L = oracle::sld_dense(rho, drho);
    CHECK((L - L.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((drho - 0.5 * (L * rho + rho * L)).cwiseAbs().maxCoeff() < 1e-12);
    // Tr[rho L] = d Tr[rho] = 0 and Tr[d rho] = 0
    CHECK(std::abs((rho * L).trace()) < 1e-12);
    CHECK(std::abs(drho.trace()) < 1e-14);
}

TEST_CASE("five-point stencil differentiates cleanly and wraps failures") {
    auto sq = [](double x) { return x * x; };
    const auto d1 = oracle::finite_difference(sq, 3.0, 1e-3);
    CHECK(d1.value == doctest::Approx(6.0).epsilon(1e-10));
    CHECK(d1.error < 1e-9);

    const auto d2 = oracle::finite_difference([](double x) { return std::sin(x); }, 0.7, 0.02);
    CHECK(d2.value == doctest::Approx(std::cos(0.7)).epsilon(1e-8));

    CHECK_THROWS_AS(oracle::finite_difference(
                        [](double) -> double { throw std::runtime_error("boom"); }, 0.0, 1e-3),
                    EvaluationFailure);
}
