#include "xychain/multiparam.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace xychain::multiparam {

namespace {

constexpr double kBlockFloor = 1e-12;
constexpr std::array<Tag, 3> kTags = {Tag::J, Tag::Gamma, Tag::D};

void require_nonzero_J(const ChainParams& p, const char* where) {
    if (p.J == 0.0)
        throw std::invalid_argument(std::string(where) + ": information measures need J != 0");
}

// Solves the 2x2 block SLD relation for one block given (w0, w) and the
// parameter derivative (dw0, dw); w2 components are structurally zero.
std::array<double, 4> block_coefficients(double w0, double w1, double w3, double dw0, double dw1,
                                         double dw3, const char* which) {
    const double denom = w0 * w0 - w1 * w1 - w3 * w3;
    if (denom <= kBlockFloor)
        throw DegenerateBlock(std::string("sld_xstate: ") + which +
                              " block denominator w0^2 - |w|^2 = " + std::to_string(denom));
    const double f0 = (w0 * dw0 - w1 * dw1 - w3 * dw3) / denom;
    return {f0, (dw1 - f0 * w1) / w0, 0.0, (dw3 - f0 * w3) / w0};
}

std::array<Eigen::Matrix4cd, 3> model_slds(const correlations::GTable& table, Separation r,
                                           const states::XState& rho) {
    std::array<Eigen::Matrix4cd, 3> out;
    for (std::size_t i = 0; i < kTags.size(); ++i) {
        const auto cp = correlations::correlation_partials(table, r, kTags[i]);
        const auto sld = sld_xstate(rho, states::xstate_derivative(cp), kTags[i]);
        out[i] = to_dense(sld).cast<std::complex<double>>();
    }
    return out;
}

FisherMatrix finish_matrix(const Eigen::Matrix3d& H) {
    FisherMatrix out;
    out.entries = H;
    out.det = H.determinant();
    const double trace = H.trace();
    if (trace <= 0.0) throw ZeroTrace("qfim: Tr[H] = " + std::to_string(trace));
    out.hjj_fraction = H(0, 0) / trace;
    if (out.det > invertibility_threshold(H)) out.trace_inverse = H.inverse().trace();
    return out;
}

}  // namespace

double invertibility_threshold(const Eigen::Matrix3d& H) {
    const double scale = H.trace() / 3.0;
    return 1e-12 * scale * scale * scale;
}

Eigen::Matrix4d to_dense(const SldXState& sld) {
    Eigen::Matrix4d L = Eigen::Matrix4d::Zero();
    L(0, 0) = sld.f[0] + sld.f[3];
    L(3, 3) = sld.f[0] - sld.f[3];
    L(0, 3) = L(3, 0) = sld.f[1];
    L(1, 1) = sld.ftilde[0] + sld.ftilde[3];
    L(2, 2) = sld.ftilde[0] - sld.ftilde[3];
    L(1, 2) = L(2, 1) = sld.ftilde[1];
    return L;
}

SldXState sld_xstate(const states::XState& rho, const states::XEntries& drho, Tag tag) {
    const states::XEntries& e = rho.entries();
    SldXState out;
    out.tag = tag;
    out.f = block_coefficients(e.a_plus + e.a_minus, 2.0 * e.b_minus, e.a_plus - e.a_minus,
                               drho.a_plus + drho.a_minus, 2.0 * drho.b_minus,
                               drho.a_plus - drho.a_minus, "outer");
    out.ftilde = block_coefficients(2.0 * e.c, 2.0 * e.b_plus, 0.0, 2.0 * drho.c,
                                    2.0 * drho.b_plus, 0.0, "inner");
    return out;
}

SldXState sld_xstate(const ChainParams& p, Separation r, Tag tag, const QuadratureConfig& cfg) {
    require_nonzero_J(p, "sld_xstate");
    correlations::GTable table(p, cfg, r.is_infinite() ? 0 : r.r());
    const auto rho = states::pair_state(correlations::correlation_set(table, r));
    const auto cp = correlations::correlation_partials(table, r, tag);
    return sld_xstate(rho, states::xstate_derivative(cp), tag);
}

Eigen::Matrix3d qfim_from_slds(const Eigen::Matrix4cd& rho,
                               const std::array<Eigen::Matrix4cd, 3>& slds) {
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            const std::size_t a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
            const std::complex<double> t =
                (rho * (slds[a] * slds[b] + slds[b] * slds[a])).trace();
            H(i, j) = H(j, i) = 0.5 * t.real();
        }
    }
    return H;
}

UhlmannMatrix uhlmann_from_slds(const Eigen::Matrix4cd& rho,
                                const std::array<Eigen::Matrix4cd, 3>& slds) {
    UhlmannMatrix out;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const std::size_t a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
            const std::complex<double> t = 0.5 * ((rho * slds[a] * slds[b]).trace() -
                                                  (rho * slds[b] * slds[a]).trace());
            out.entries(i, j) = t.imag();
            out.entries(j, i) = -t.imag();
            out.max_abs = std::max(out.max_abs, std::abs(t));
        }
    }
    return out;
}

FisherMatrix qfim_pair(const correlations::GTable& table, Separation r) {
    require_nonzero_J(table.params(), "qfim_pair");
    const auto cs = correlations::correlation_set(table, r);
    const auto rho = states::pair_state(cs);
    const auto slds = model_slds(table, r, rho);
    return finish_matrix(
        qfim_from_slds(states::to_dense(rho.entries()).cast<std::complex<double>>(), slds));
}

FisherMatrix qfim_pair(const ChainParams& p, Separation r, const QuadratureConfig& cfg) {
    correlations::GTable table(p, cfg, r.is_infinite() ? 0 : r.r());
    return qfim_pair(table, r);
}

FisherMatrix qfim_single(const ChainParams& p, const QuadratureConfig& cfg) {
    require_nonzero_J(p, "qfim_single");
    const double m = chain_model::magnetization(p, cfg);
    const double denom = 1.0 - m * m;
    if (denom < kBlockFloor)
        throw PureStateDegeneracy("qfim_single: 1 - m^2 = " + std::to_string(denom));
    Eigen::Vector3d dm;
    for (std::size_t i = 0; i < kTags.size(); ++i)
        dm(static_cast<int>(i)) = chain_model::magnetization_partial(p, kTags[i], cfg);
    return finish_matrix((dm * dm.transpose()) / denom);
}

UhlmannMatrix uhlmann_matrix(const correlations::GTable& table, Separation r) {
    require_nonzero_J(table.params(), "uhlmann_matrix");
    const auto cs = correlations::correlation_set(table, r);
    const auto rho = states::pair_state(cs);
    const auto slds = model_slds(table, r, rho);
    return uhlmann_from_slds(states::to_dense(rho.entries()).cast<std::complex<double>>(), slds);
}

UhlmannMatrix uhlmann_matrix(const ChainParams& p, Separation r, const QuadratureConfig& cfg) {
    correlations::GTable table(p, cfg, r.is_infinite() ? 0 : r.r());
    return uhlmann_matrix(table, r);
}

std::optional<double> scalar_bound(const ChainParams& p, Separation r,
                                   const QuadratureConfig& cfg) {
    return qfim_pair(p, r, cfg).trace_inverse;
}

double hjj_fraction(const ChainParams& p, Separation r, const QuadratureConfig& cfg) {
    return qfim_pair(p, r, cfg).hjj_fraction;
}

}  // namespace xychain::multiparam
