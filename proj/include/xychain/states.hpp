#pragma once

#include <Eigen/Dense>

#include <array>

#include "xychain/correlations.hpp"

// =====================================================================
// Reduced density matrices of one spin and of a spin pair at distance r.
//
// The single-spin state is diagonal in the sigma^z basis with up
// population p = (1 + m)/2. The pair state has the X form in the basis
// {|00>, |01>, |10>, |11>} (0 = up):
//
//        [ a+  .   .   b- ]        a± = (1 ± 2m + szz)/4
//        [ .   c   b+  .  ]        b± = (sxx ± syy)/4
//        [ .   b+  c   .  ]        c  = (1 - szz)/4
//        [ b-  .   .   a- ]
//
// An equivalent parametrization splits rho into the outer {|00>,|11>}
// and inner {|01>,|10>} blocks, each written as one half of a
// four-vector contracted with the block operator basis; the Minkowski
// metric eta = Diag{1,-1,-1,-1} then turns quadratic forms of those
// vectors into the block determinants. Both reconstructions are exposed
// and tested against each other.
// =====================================================================

namespace xychain::states {

struct SingleSpinState {
    double p = 1.0;  // population of |0> (spin up)
    double m = 1.0;
};

SingleSpinState single_spin_state(const ChainParams& p, const QuadratureConfig& cfg);

// The five independent real entries of an X matrix. Also reused for
// parameter derivatives of a state, which share the same shape (their
// trace is 0 instead of 1).
struct XEntries {
    double a_plus = 0.0;
    double a_minus = 0.0;
    double b_plus = 0.0;
    double b_minus = 0.0;
    double c = 0.0;

    double trace() const { return a_plus + a_minus + 2.0 * c; }
};

Eigen::Matrix4d to_dense(const XEntries& e);

// A validated physical pair state. Construction enforces trace 1 to
// 1e-12 and the X-block positivity conditions to slack 1e-9; violations
// signal upstream numerical trouble and throw PositivityViolation.
class XState {
  public:
    XState(const XEntries& e, Separation r);

    const XEntries& entries() const { return e_; }
    Separation separation() const { return r_; }

  private:
    XEntries e_;
    Separation r_;
};

XState pair_state(const correlations::CorrelationSet& cs);
XState pair_state(const ChainParams& p, Separation r, const QuadratureConfig& cfg);

// Derivative of the X entries with respect to one parameter, by the
// chain rule through (m, sxx, syy, szz).
XEntries xstate_derivative(const correlations::CorrelationPartials& cp);

// Eigen-decomposition in closed form: two 2x2 blocks, (a+, a-, b-) and
// (c, c, b+). Eigenvalues sorted descending and clamped to 0 from
// [-1e-12, 0); more negative values throw PositivityViolation.
// eigenvectors.col(i) belongs to eigenvalues[i].
struct XEigensystem {
    std::array<double, 4> eigenvalues{};
    Eigen::Matrix4d eigenvectors = Eigen::Matrix4d::Zero();
};

XEigensystem xstate_eigensystem(const XState& state);

// Block four-vectors: a = (a0, a1, a2, a3) for the outer block and
// b likewise for the inner block, with
//   a0 = (1+szz)/2   a1 = (sxx-syy)/2   a2 = 0        a3 = m
//   b0 = (1-szz)/2   b1 = (sxx+syy)/2   b2 = b3 = 0
// so a0 + b0 = 1. minkowski_dot applies Diag{1,-1,-1,-1}.
struct MinkowskiCoefficients {
    std::array<double, 4> a{};
    std::array<double, 4> b{};
};

MinkowskiCoefficients minkowski_coefficients(const correlations::CorrelationSet& cs);
MinkowskiCoefficients minkowski_coefficients(const ChainParams& p, Separation r,
                                             const QuadratureConfig& cfg);
// Derivative of the coefficient vectors with respect to one parameter.
MinkowskiCoefficients minkowski_derivative(const correlations::CorrelationPartials& cp);

inline double minkowski_dot(const std::array<double, 4>& x, const std::array<double, 4>& y) {
    return x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3];
}

// Reconstruction through the block operator basis (eta_0..eta_3 on the
// outer block, tilde counterparts on the inner one); must agree with
// to_dense(XEntries) to 1e-12.
Eigen::Matrix4d to_dense(const MinkowskiCoefficients& w);

}  // namespace xychain::states
