#pragma once

#include "xychain/quadrature.hpp"
#include "xychain/types.hpp"

// =====================================================================
// Thermodynamic-limit building blocks for the anisotropic XY chain with
// DM interaction in a transverse field (field scaled to 1).
//
// Everything reduces to two integrals over the Brillouin half-axis
// phi in [0, pi], built from
//
//     A(phi) = J (cos phi - 2 D sin phi) - 1
//     B(phi) = J gamma sin phi
//     Delta  = sqrt(A^2 + B^2)
//
//     m   = -(1/pi) Int A / Delta dphi                       (magnetization)
//     G_k = -(1/pi) Int [cos(k phi) A - sin(k phi) B] / Delta dphi
//
// Normalization note: G_k is defined here WITHOUT an overall factor 2,
// so that G_0 = m and S^x_1 = G_{-1}, S^y_1 = G_1 hold as identities.
// A doubled convention (G_0 = 2m) is also found in the literature; it was
// rejected because it yields |G_0| = 2 at J = 0 and pair correlators
// outside [-1, 1]. The convention used here is pinned by the
// exact-diagonalization oracle tests (S^x_1, S^z_r match finite chains).
//
// Parameter derivatives are taken analytically under the integral sign.
// With W = (B dA - A dB) / Delta^3 one has
//
//     d(A/Delta)                        = B * W
//     d([cos(k phi) A - sin(k phi) B]/Delta) = [cos(k phi) B + sin(k phi) A] * W
//
// where dA/dJ = cos phi - 2 D sin phi, dA/dgamma = 0, dA/dD = -2 J sin phi,
//       dB/dJ = gamma sin phi, dB/dgamma = J sin phi, dB/dD = 0.
// This avoids finite-difference step dilemmas near the critical lines
// |J| = 1 where the integrands steepen.
// =====================================================================

namespace xychain::chain_model {

struct DispersionPoint {
    double phi;
    double delta;  // >= 0; vanishes only at critical parameter combinations
};

// Total function: Delta(phi) for phi in [0, pi].
DispersionPoint dispersion(const ChainParams& p, double phi);

// m in [-1, 1]; throws NonConvergence if quadrature fails or |m| exceeds
// 1 by more than abs_tol (which signals a quadrature failure, since the
// integrand is bounded by 1/pi * pi = 1 in magnitude).
double magnetization(const ChainParams& p, const QuadratureConfig& cfg);

// G_k for any integer k (negative allowed); G_0 = m.
double g_coefficient(const ChainParams& p, int k, const QuadratureConfig& cfg);

// Analytic d m / d lambda and d G_k / d lambda.
double magnetization_partial(const ChainParams& p, Tag wrt, const QuadratureConfig& cfg);
double g_coefficient_partial(const ChainParams& p, int k, Tag wrt, const QuadratureConfig& cfg);

}  // namespace xychain::chain_model
