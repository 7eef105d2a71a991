#include "xychain/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xychain::states {

namespace {
constexpr double kTraceTol = 1e-12;
constexpr double kPsdSlack = 1e-9;
constexpr double kEigenClamp = 1e-12;
}  // namespace

SingleSpinState single_spin_state(const ChainParams& p, const QuadratureConfig& cfg) {
    SingleSpinState s;
    s.m = chain_model::magnetization(p, cfg);
    s.p = 0.5 * (1.0 + s.m);
    return s;
}

Eigen::Matrix4d to_dense(const XEntries& e) {
    Eigen::Matrix4d R = Eigen::Matrix4d::Zero();
    R(0, 0) = e.a_plus;
    R(3, 3) = e.a_minus;
    R(1, 1) = e.c;
    R(2, 2) = e.c;
    R(0, 3) = R(3, 0) = e.b_minus;
    R(1, 2) = R(2, 1) = e.b_plus;
    return R;
}

XState::XState(const XEntries& e, Separation r) : e_(e), r_(r) {
    if (std::abs(e.trace() - 1.0) > kTraceTol)
        throw PositivityViolation("XState: trace deviates from 1 by " +
                                  std::to_string(e.trace() - 1.0));
    // PSD of an X matrix decouples into the two 2x2 blocks.
    if (e.a_plus < -kPsdSlack || e.a_minus < -kPsdSlack || e.c < -kPsdSlack)
        throw PositivityViolation("XState: negative diagonal entry");
    if (e.a_plus * e.a_minus - e.b_minus * e.b_minus < -kPsdSlack)
        throw PositivityViolation("XState: outer block determinant negative");
    if (e.c - std::abs(e.b_plus) < -kPsdSlack)
        throw PositivityViolation("XState: inner block determinant negative");
}

XState pair_state(const correlations::CorrelationSet& cs) {
    XEntries e;
    e.a_plus = 0.25 * (1.0 + 2.0 * cs.m + cs.szz);
    e.a_minus = 0.25 * (1.0 - 2.0 * cs.m + cs.szz);
    e.b_plus = 0.25 * (cs.sxx + cs.syy);
    e.b_minus = 0.25 * (cs.sxx - cs.syy);
    e.c = 0.25 * (1.0 - cs.szz);
    return XState(e, cs.r);
}

XState pair_state(const ChainParams& p, Separation r, const QuadratureConfig& cfg) {
    return pair_state(correlations::correlation_set(p, r, cfg));
}

XEntries xstate_derivative(const correlations::CorrelationPartials& cp) {
    XEntries d;
    d.a_plus = 0.25 * (2.0 * cp.dm + cp.dszz);
    d.a_minus = 0.25 * (-2.0 * cp.dm + cp.dszz);
    d.b_plus = 0.25 * (cp.dsxx + cp.dsyy);
    d.b_minus = 0.25 * (cp.dsxx - cp.dsyy);
    d.c = -0.25 * cp.dszz;
    return d;
}

XEigensystem xstate_eigensystem(const XState& state) {
    const XEntries& e = state.entries();

    // Outer block [[a+, b-], [b-, a-]] on span{|00>, |11>}. The rotation
    // angle comes from atan2, which stays well-conditioned when the
    // block degenerates (a+ = a-, b- -> 0).
    const double avg = 0.5 * (e.a_plus + e.a_minus);
    const double rad = std::hypot(0.5 * (e.a_plus - e.a_minus), e.b_minus);
    const double theta = 0.5 * std::atan2(2.0 * e.b_minus, e.a_plus - e.a_minus);
    const double ct = std::cos(theta), st = std::sin(theta);

    struct Pair {
        double value;
        Eigen::Vector4d vec;
    };
    std::array<Pair, 4> pairs = {
        Pair{avg + rad, {ct, 0.0, 0.0, st}},
        Pair{avg - rad, {-st, 0.0, 0.0, ct}},
        Pair{e.c + e.b_plus, {0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0}},
        Pair{e.c - e.b_plus, {0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0}},
    };
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& x, const Pair& y) { return x.value > y.value; });

    XEigensystem out;
    for (int i = 0; i < 4; ++i) {
        double v = pairs[static_cast<std::size_t>(i)].value;
        if (v < -kEigenClamp)
            throw PositivityViolation("xstate_eigensystem: eigenvalue " + std::to_string(v));
        out.eigenvalues[static_cast<std::size_t>(i)] = std::max(v, 0.0);
        out.eigenvectors.col(i) = pairs[static_cast<std::size_t>(i)].vec;
    }
    return out;
}

MinkowskiCoefficients minkowski_coefficients(const correlations::CorrelationSet& cs) {
    MinkowskiCoefficients w;
    w.a = {0.5 * (1.0 + cs.szz), 0.5 * (cs.sxx - cs.syy), 0.0, cs.m};
    w.b = {0.5 * (1.0 - cs.szz), 0.5 * (cs.sxx + cs.syy), 0.0, 0.0};
    return w;
}

MinkowskiCoefficients minkowski_coefficients(const ChainParams& p, Separation r,
                                             const QuadratureConfig& cfg) {
    return minkowski_coefficients(correlations::correlation_set(p, r, cfg));
}

MinkowskiCoefficients minkowski_derivative(const correlations::CorrelationPartials& cp) {
    MinkowskiCoefficients w;
    w.a = {0.5 * cp.dszz, 0.5 * (cp.dsxx - cp.dsyy), 0.0, cp.dm};
    w.b = {-0.5 * cp.dszz, 0.5 * (cp.dsxx + cp.dsyy), 0.0, 0.0};
    return w;
}

Eigen::Matrix4d to_dense(const MinkowskiCoefficients& w) {
    // rho = 1/2 sum_alpha (a_alpha eta_alpha + b_alpha eta~_alpha) with
    //   eta_0 = |00><00| + |11><11|    eta~_0 = |01><01| + |10><10|
    //   eta_1 = |00><11| + |11><00|    eta~_1 = |01><10| + |10><01|
    //   eta_3 = |00><00| - |11><11|    eta~_3 = |01><01| - |10><10|
    // (the imaginary eta_2 components carry zero coefficients here).
    Eigen::Matrix4d R = Eigen::Matrix4d::Zero();
    R(0, 0) = 0.5 * (w.a[0] + w.a[3]);
    R(3, 3) = 0.5 * (w.a[0] - w.a[3]);
    R(0, 3) = R(3, 0) = 0.5 * w.a[1];
    R(1, 1) = 0.5 * (w.b[0] + w.b[3]);
    R(2, 2) = 0.5 * (w.b[0] - w.b[3]);
    R(1, 2) = R(2, 1) = 0.5 * w.b[1];
    return R;
}

}  // namespace xychain::states
