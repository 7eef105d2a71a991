#pragma once

#include <array>
#include <optional>

#include "xychain/fisher.hpp"

// =====================================================================
// Multi-parameter machinery over the fixed triple (J, gamma, D):
// symmetric logarithmic derivatives of the pair X state in closed
// block form, the 3x3 QFI matrix H_{mu nu} = Re Tr[rho {L_mu, L_nu}]/2,
// its determinant (sloppiness measure), the scalar precision bound
// Tr[H^-1], the H_JJ trace fraction, and the Uhlmann matrix
//
//     U_{mu nu} = Tr[rho (L_mu L_nu - L_nu L_mu)] / 2 ,
//
// which is purely imaginary for Hermitian inputs and vanishes
// identically for real X states. UhlmannMatrix::entries stores the
// imaginary (physical) component as a real antisymmetric matrix, and
// max_abs is the largest complex modulus actually produced by the
// dense products — for real states a rounding-level number that is
// computed, not assumed.
//
// SLD block form: write each 2x2 block of rho as (w0·I + w·sigma)/2.
// The corresponding SLD block is f0·I + f·sigma (no 1/2) with
//
//     f0 = (w0 dw0 - sum_i w_i dw_i) / (w0^2 - sum_i w_i^2)
//     f_i = (dw_i - f0 w_i) / w0
//
// Outer block (span {|00>,|11>}):  w0 = a+ + a-, w1 = 2 b-, w2 = 0,
// w3 = a+ - a-.  Inner block (span {|01>,|10>}): w0 = 2c, w1 = 2 b+,
// w2 = w3 = 0.  Real X states force f2 = 0 in both blocks.
// =====================================================================

namespace xychain::multiparam {

struct SldXState {
    std::array<double, 4> f{};       // outer-block coefficients f0..f3
    std::array<double, 4> ftilde{};  // inner-block coefficients
    Tag tag = Tag::J;
};

// Assembles f0..f3 on the eta operator basis into a dense symmetric L.
Eigen::Matrix4d to_dense(const SldXState& sld);

SldXState sld_xstate(const states::XState& rho, const states::XEntries& drho, Tag tag);
SldXState sld_xstate(const ChainParams& p, Separation r, Tag tag, const QuadratureConfig& cfg);

struct FisherMatrix {
    Eigen::Matrix3d entries = Eigen::Matrix3d::Zero();
    double det = 0.0;
    // Populated only when det clears the invertibility threshold; a
    // sloppy (numerically singular) matrix has no meaningful bound.
    std::optional<double> trace_inverse;
    double hjj_fraction = 0.0;
};

// Scale-relative invertibility cutoff: det > 1e-12 * (Tr/3)^3.
double invertibility_threshold(const Eigen::Matrix3d& H);

FisherMatrix qfim_pair(const correlations::GTable& table, Separation r);
FisherMatrix qfim_pair(const ChainParams& p, Separation r, const QuadratureConfig& cfg);

// Single-spin matrix: rank-1 outer product dm_mu dm_nu / (1 - m^2);
// det = 0 identically, so trace_inverse is never populated.
FisherMatrix qfim_single(const ChainParams& p, const QuadratureConfig& cfg);

struct UhlmannMatrix {
    Eigen::Matrix3d entries = Eigen::Matrix3d::Zero();  // antisymmetric
    double max_abs = 0.0;
};

UhlmannMatrix uhlmann_matrix(const correlations::GTable& table, Separation r);
UhlmannMatrix uhlmann_matrix(const ChainParams& p, Separation r, const QuadratureConfig& cfg);

// Tr[H^-1] with unit weight matrix, or nothing when H is sloppy.
std::optional<double> scalar_bound(const ChainParams& p, Separation r,
                                   const QuadratureConfig& cfg);

// H_JJ / Tr[H] in [0, 1]; throws ZeroTrace on a vanishing trace.
double hjj_fraction(const ChainParams& p, Separation r, const QuadratureConfig& cfg);

// Definitional assembly from a density matrix and ready-made SLDs, in
// (J, gamma, D) order. Complex inputs are allowed so that non-real
// fixtures can exercise a genuinely nonzero Uhlmann matrix.
Eigen::Matrix3d qfim_from_slds(const Eigen::Matrix4cd& rho,
                               const std::array<Eigen::Matrix4cd, 3>& slds);
UhlmannMatrix uhlmann_from_slds(const Eigen::Matrix4cd& rho,
                                const std::array<Eigen::Matrix4cd, 3>& slds);

}  // namespace xychain::multiparam
