#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

// =====================================================================
// Core value types and named error conditions shared by every module.
//
// Parameter conventions: the chain Hamiltonian is parametrized by the
// dimensionless triple (J, gamma, D) — coupling, anisotropy, and the
// antisymmetric (Dzyaloshinskii–Moriya) exchange factor — with the
// transverse field scaled to 1. Parameter order is fixed as (J, gamma, D)
// in every matrix and output schema.
// =====================================================================

namespace xychain {

struct ChainParams {
    double J = 0.0;
    double gamma = 1.0;  // anisotropy, restricted to [-1, 1]
    double D = 0.0;      // DM factor

    void validate() const {
        if (gamma < -1.0 || gamma > 1.0)
            throw std::invalid_argument("ChainParams: gamma must lie in [-1, 1], got " +
                                        std::to_string(gamma));
        if (!(J == J) || !(gamma == gamma) || !(D == D))
            throw std::invalid_argument("ChainParams: NaN parameter");
    }
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdivisions = 400;
    // Points with |J - 1| or |J + 1| below this distance are still computed
    // but tagged near-critical: the integrands develop an integrable
    // singularity at phi -> 0 as |J| -> 1 and results there are
    // scheme-dependent.
    double critical_guard = 1e-3;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
        if (critical_guard < 0.0)
            throw std::invalid_argument("QuadratureConfig: critical_guard must be >= 0");
    }
};

inline bool near_critical(const ChainParams& p, const QuadratureConfig& cfg) {
    return std::abs(std::abs(p.J) - 1.0) < cfg.critical_guard;
}

// Separation between the two measured spins: a finite distance r >= 1 or
// the infinite-distance limit (correlations dropped, szz -> m^2).
class Separation {
  public:
    static Separation finite(int r) {
        if (r < 1) throw std::invalid_argument("Separation: finite r must be >= 1");
        return Separation(r);
    }
    static Separation infinite() { return Separation(kInfinite); }

    bool is_infinite() const { return r_ == kInfinite; }
    int r() const {
        if (is_infinite()) throw std::logic_error("Separation: infinite has no finite r");
        return r_;
    }
    bool operator==(const Separation& o) const { return r_ == o.r_; }

    std::string str() const { return is_infinite() ? "inf" : std::to_string(r_); }

  private:
    explicit Separation(int r) : r_(r) {}
    static constexpr int kInfinite = -1;
    int r_;
};

// Parameters one can differentiate against; order fixed as (J, Gamma, D).
enum class Tag { J = 0, Gamma = 1, D = 2 };

inline const char* tag_name(Tag t) {
    switch (t) {
        case Tag::J: return "J";
        case Tag::Gamma: return "gamma";
        case Tag::D: return "D";
    }
    return "?";
}

// ---------------------------------------------------------------------
// Named error conditions. All derive from std::runtime_error so callers
// can catch coarsely (per scan point) or finely (per condition).
// ---------------------------------------------------------------------

#define XYCHAIN_ERROR(Name)                                              \
    struct Name : std::runtime_error {                                   \
        explicit Name(const std::string& what) : std::runtime_error(std::string(#Name) + ": " + what) {} \
    }

XYCHAIN_ERROR(NonConvergence);        // quadrature subdivision budget exhausted
XYCHAIN_ERROR(PositivityViolation);   // density-matrix invariants broken beyond slack
XYCHAIN_ERROR(DegenerateDenominator); // closed-form QFI denominator underflow
XYCHAIN_ERROR(DegenerateBlock);       // SLD block denominator underflow
XYCHAIN_ERROR(PureStateDegeneracy);   // 1 - m^2 underflow in single-spin formulas
XYCHAIN_ERROR(DegenerateOutcome);     // measurement outcome probability underflow
XYCHAIN_ERROR(DegenerateFit);         // decay-fit input below noise floor
XYCHAIN_ERROR(ZeroQfi);               // saturation/ratio denominators vanish
XYCHAIN_ERROR(ZeroTrace);             // Fisher-matrix trace vanishes
XYCHAIN_ERROR(DegenerateGroundState); // finite-chain gap below resolution
XYCHAIN_ERROR(EvaluationFailure);     // finite-difference function evaluation failed

#undef XYCHAIN_ERROR

}  // namespace xychain
