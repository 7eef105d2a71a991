#include "xychain/fisher.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace xychain::fisher {

namespace {

constexpr double kDenomFloor = 1e-12;
constexpr double kSaturationSlack = 1e-9;

void require_nonzero_J(const ChainParams& p, const char* where) {
    if (p.J == 0.0)
        throw std::invalid_argument(std::string(where) + ": information measures need J != 0");
}

}  // namespace

// ---------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------

double qfi_single_kernel(double m, double dm) {
    const double denom = 1.0 - m * m;
    if (denom < kDenomFloor)
        throw PureStateDegeneracy("qfi_single: 1 - m^2 = " + std::to_string(denom));
    return dm * dm / denom;
}

double qfi_pair_closed_form(const correlations::CorrelationSet& cs,
                            const correlations::CorrelationPartials& cp) {
    using states::minkowski_dot;
    const auto w = states::minkowski_coefficients(cs);
    const auto dw = states::minkowski_derivative(cp);

    const double a0 = w.a[0], b0 = w.b[0];
    if (a0 <= kDenomFloor)
        throw DegenerateDenominator("pair QFI closed form: outer block weight a0");
    if (b0 <= kDenomFloor)
        throw DegenerateDenominator("pair QFI closed form: inner block weight b0");
    const double naa = minkowski_dot(w.a, w.a);
    const double nbb = minkowski_dot(w.b, w.b);
    if (naa <= kDenomFloor)
        throw DegenerateDenominator("pair QFI closed form: outer Minkowski norm a.eta.a");
    if (nbb <= kDenomFloor)
        throw DegenerateDenominator("pair QFI closed form: inner Minkowski norm b.eta.b");

    const double ada = minkowski_dot(w.a, dw.a);
    const double bdb = minkowski_dot(w.b, dw.b);
    const double outer = (ada * ada / naa - minkowski_dot(dw.a, dw.a)) / a0;
    const double inner = (bdb * bdb / nbb - minkowski_dot(dw.b, dw.b)) / b0;
    const double weights = dw.a[0] * dw.a[0] / a0 + dw.b[0] * dw.b[0] / b0;
    return outer + inner + weights;
}

double qfi_pair_spectral(const correlations::CorrelationSet& cs,
                         const correlations::CorrelationPartials& cp) {
    const states::XState rho = states::pair_state(cs);
    const Eigen::Matrix4d R = states::to_dense(rho.entries());
    const Eigen::Matrix4d dR = states::to_dense(states::xstate_derivative(cp));

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(R);
    const Eigen::Vector4d p = es.eigenvalues();
    const Eigen::Matrix4d dV = es.eigenvectors().transpose() * dR * es.eigenvectors();

    double H = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double s = p(i) + p(j);
            if (s > kDenomFloor) H += 2.0 * dV(i, j) * dV(i, j) / s;
        }
    }
    return H;
}

double fi_pair_magnetization(const correlations::CorrelationSet& cs,
                             const correlations::CorrelationPartials& cp) {
    const states::XEntries e = states::pair_state(cs).entries();
    const states::XEntries d = states::xstate_derivative(cp);
    if (e.a_plus <= kDenomFloor)
        throw DegenerateOutcome("pair FI: outcome probability a_plus underflow");
    if (e.a_minus <= kDenomFloor)
        throw DegenerateOutcome("pair FI: outcome probability a_minus underflow");
    if (e.c <= kDenomFloor)
        throw DegenerateOutcome("pair FI: outcome probability c underflow");
    return d.a_plus * d.a_plus / e.a_plus + 2.0 * d.c * d.c / e.c +
           d.a_minus * d.a_minus / e.a_minus;
}

double saturation_of(double fi, double qfi) {
    if (qfi <= 0.0) throw ZeroQfi("saturation: qfi = " + std::to_string(qfi));
    const double s = fi / qfi;
    if (s > 1.0 + kSaturationSlack)
        throw PositivityViolation("saturation: F/H = " + std::to_string(s) +
                                  " exceeds 1 beyond slack");
    return s > 1.0 ? 1.0 : s;
}

// ---------------------------------------------------------------------
// Parameter-level entry points
// ---------------------------------------------------------------------

double qfi_single(const ChainParams& p, Tag tag, const QuadratureConfig& cfg) {
    require_nonzero_J(p, "qfi_single");
    const double m = chain_model::magnetization(p, cfg);
    const double dm = chain_model::magnetization_partial(p, tag, cfg);
    return qfi_single_kernel(m, dm);
}

// The single-spin state is diagonal in the measured basis, so the
// magnetization FI equals the QFI identically; exposed for symmetry.
double fi_single(const ChainParams& p, Tag tag, const QuadratureConfig& cfg) {
    return qfi_single(p, tag, cfg);
}

namespace {

struct PairData {
    correlations::CorrelationSet cs;
    correlations::CorrelationPartials cp;
};

PairData pair_data(const ChainParams& p, Separation r, Tag tag, const QuadratureConfig& cfg) {
    correlations::GTable table(p, cfg, r.is_infinite() ? 0 : r.r());
    return {correlations::correlation_set(table, r),
            correlations::correlation_partials(table, r, tag)};
}

}  // namespace

double qfi_pair_closed_form(const ChainParams& p, Separation r, Tag tag,
                            const QuadratureConfig& cfg) {
    require_nonzero_J(p, "qfi_pair_closed_form");
    const auto d = pair_data(p, r, tag, cfg);
    return qfi_pair_closed_form(d.cs, d.cp);
}

double qfi_pair_spectral(const ChainParams& p, Separation r, Tag tag,
                         const QuadratureConfig& cfg) {
    require_nonzero_J(p, "qfi_pair_spectral");
    const auto d = pair_data(p, r, tag, cfg);
    return qfi_pair_spectral(d.cs, d.cp);
}

double fi_pair_magnetization(const ChainParams& p, Separation r, Tag tag,
                             const QuadratureConfig& cfg) {
    require_nonzero_J(p, "fi_pair_magnetization");
    const auto d = pair_data(p, r, tag, cfg);
    return fi_pair_magnetization(d.cs, d.cp);
}

double saturation(const ChainParams& p, Separation r, Tag tag, const QuadratureConfig& cfg) {
    require_nonzero_J(p, "saturation");
    const auto d = pair_data(p, r, tag, cfg);
    return saturation_of(fi_pair_magnetization(d.cs, d.cp), qfi_pair_closed_form(d.cs, d.cp));
}

DistanceRatios distance_ratios(const ChainParams& p, Separation r, Tag tag,
                               const QuadratureConfig& cfg) {
    require_nonzero_J(p, "distance_ratios");
    if (r.is_infinite()) return {1.0, 1.0};

    const auto at_r = pair_data(p, r, tag, cfg);
    const auto at_inf = pair_data(p, Separation::infinite(), tag, cfg);
    const double h_inf = qfi_pair_closed_form(at_inf.cs, at_inf.cp);
    const double f_inf = fi_pair_magnetization(at_inf.cs, at_inf.cp);
    if (h_inf <= 0.0 || f_inf <= 0.0)
        throw ZeroQfi("distance_ratios: infinite-separation baseline vanishes");
    return {qfi_pair_closed_form(at_r.cs, at_r.cp) / h_inf,
            fi_pair_magnetization(at_r.cs, at_r.cp) / f_inf};
}

FisherScalars fisher_scalars(const correlations::GTable& table, Separation r, Tag tag) {
    require_nonzero_J(table.params(), "fisher_scalars");
    const auto cs = correlations::correlation_set(table, r);
    const auto cp = correlations::correlation_partials(table, r, tag);
    FisherScalars out;
    out.qfi = qfi_pair_closed_form(cs, cp);
    out.fi = fi_pair_magnetization(cs, cp);
    out.saturation = saturation_of(out.fi, out.qfi);
    out.r = r;
    out.tag = tag;
    out.near_critical = near_critical(table.params(), table.config());
    return out;
}

}  // namespace xychain::fisher
