#pragma once

#include "xychain/states.hpp"

// =====================================================================
// Single-parameter information measures for one spin and for a spin
// pair at distance r, plus the derived diagnostics used in scans:
//
//   - qfi_single: H = (d m)^2 / (1 - m^2), the magnetization-basis QFI
//     of the diagonal single-spin state (its FI coincides).
//   - qfi_pair_closed_form: block/Minkowski closed form for the X state.
//   - qfi_pair_spectral: definitional route through the eigensystem,
//     sum over 2 |<i| d rho |j>|^2 / (p_i + p_j). The two agree to
//     ~1e-12 relative; the spectral path is kept as the in-tree oracle.
//   - fi_pair_magnetization: classical FI of the two-spin magnetization
//     measurement (the four diagonal outcome probabilities).
//   - saturation S = F/H and the distance ratios R_H, R_F against the
//     infinite-separation baseline.
//
// The chain is only considered for J != 0 (at J = 0 the field term
// dominates trivially and the parametric model degenerates), so every
// entry point here rejects J == 0 with std::invalid_argument.
// =====================================================================

namespace xychain::fisher {

struct FisherScalars {
    double qfi = 0.0;
    double fi = 0.0;
    double saturation = 0.0;
    Separation r = Separation::finite(1);
    Tag tag = Tag::J;
    bool near_critical = false;
};

struct DistanceRatios {
    double R_H = 1.0;
    double R_F = 1.0;
};

// --- kernels on precomputed correlators (used by scans) --------------
double qfi_single_kernel(double m, double dm);
double qfi_pair_closed_form(const correlations::CorrelationSet& cs,
                            const correlations::CorrelationPartials& cp);
double qfi_pair_spectral(const correlations::CorrelationSet& cs,
                         const correlations::CorrelationPartials& cp);
double fi_pair_magnetization(const correlations::CorrelationSet& cs,
                             const correlations::CorrelationPartials& cp);
double saturation_of(double fi, double qfi);

// --- parameter-level entry points ------------------------------------
double qfi_single(const ChainParams& p, Tag tag, const QuadratureConfig& cfg);
double fi_single(const ChainParams& p, Tag tag, const QuadratureConfig& cfg);

double qfi_pair_closed_form(const ChainParams& p, Separation r, Tag tag,
                            const QuadratureConfig& cfg);
double qfi_pair_spectral(const ChainParams& p, Separation r, Tag tag,
                         const QuadratureConfig& cfg);
double fi_pair_magnetization(const ChainParams& p, Separation r, Tag tag,
                             const QuadratureConfig& cfg);

double saturation(const ChainParams& p, Separation r, Tag tag, const QuadratureConfig& cfg);
DistanceRatios distance_ratios(const ChainParams& p, Separation r, Tag tag,
                               const QuadratureConfig& cfg);

// Bundle used by the scan runners; reuses one GTable for all
// separations at a fixed parameter point.
FisherScalars fisher_scalars(const correlations::GTable& table, Separation r, Tag tag);

}  // namespace xychain::fisher
