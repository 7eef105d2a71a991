#pragma once

#include <optional>
#include <vector>

#include "xychain/chain_model.hpp"

// =====================================================================
// Spin-spin correlators from Toeplitz determinants of G coefficients.
//
//   S^x_r = det M,  M[i][j] = G_{j-i-1}   (first row G_{-1} ... G_{-r})
//   S^y_r = det M,  M[i][j] = G_{i-j+1}   (first row G_{1}, G_{0}, ..., G_{-r+2})
//   S^z_r = m^2 - G_r G_{-r}
//
// The entry indexing above is pinned by exact-diagonalization tests —
// off-by-one index conventions are the main correctness hazard here.
//
// The infinite-separation branch takes sxx = syy = 0 and szz = m^2
// exactly. Note on decay: |G_r| falls off as 1/r only while r stays well
// inside the correlation length (the critical fan |J| -> 1); at gapped
// parameter points the decay is exponential and much faster. The decay
// fit below reports whatever slope the chosen window actually has.
// =====================================================================

namespace xychain::correlations {

struct CorrelationSet {
    Separation r = Separation::finite(1);
    double m = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    double szz = 0.0;
};

// Derivatives of a CorrelationSet with respect to one parameter.
struct CorrelationPartials {
    double dsxx = 0.0;
    double dsyy = 0.0;
    double dszz = 0.0;
    double dm = 0.0;
};

// ---------------------------------------------------------------------
// Per-point cache of G_k, dG_k, m, dm for one (params, cfg). The scan
// hot path evaluates many separations and tags at a fixed parameter
// point; this avoids recomputing the underlying integrals. Lazy,
// single-threaded by design: each scan task owns its own GTable.
// ---------------------------------------------------------------------
class GTable {
  public:
    GTable(const ChainParams& p, const QuadratureConfig& cfg, int kmax);

    const ChainParams& params() const { return params_; }
    const QuadratureConfig& config() const { return cfg_; }
    int kmax() const { return kmax_; }

    double m() const;
    double dm(Tag wrt) const;
    double g(int k) const;         // |k| <= kmax
    double dg(int k, Tag wrt) const;

  private:
    ChainParams params_;
    QuadratureConfig cfg_;
    int kmax_;
    mutable std::optional<double> m_;
    mutable std::optional<double> dm_[3];
    mutable std::vector<std::optional<double>> g_;        // index k + kmax
    mutable std::vector<std::optional<double>> dg_[3];
};

// Toeplitz determinants and the zz product form. Finite r >= 1.
double toeplitz_sx(const ChainParams& p, int r, const QuadratureConfig& cfg);
double toeplitz_sy(const ChainParams& p, int r, const QuadratureConfig& cfg);
double s_z(const ChainParams& p, int r, const QuadratureConfig& cfg);

CorrelationSet correlation_set(const ChainParams& p, Separation r, const QuadratureConfig& cfg);
CorrelationPartials correlation_partials(const ChainParams& p, Separation r, Tag wrt,
                                         const QuadratureConfig& cfg);

// GTable-backed variants used by scans (and by the functions above).
CorrelationSet correlation_set(const GTable& table, Separation r);
CorrelationPartials correlation_partials(const GTable& table, Separation r, Tag wrt);

// Least-squares fit of log|G_r| vs log r over r_list (at least 4
// increasing values >= 8). Throws DegenerateFit when any |G_r| < 1e-14.
// Also reports max_r |G_r + G_{-r}| / |G_r| as an antisymmetry measure.
struct DecayFit {
    double slope = 0.0;
    double max_asymmetry = 0.0;
};
DecayFit asymptotic_decay_check(const ChainParams& p, const std::vector<int>& r_list,
                                const QuadratureConfig& cfg);

}  // namespace xychain::correlations
