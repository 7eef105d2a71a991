#include "xychain/chain_model.hpp"

#include <algorithm>
#include <cmath>

namespace xychain::chain_model {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Integrand {
    double J, gamma, D;

    double A(double phi) const { return J * (std::cos(phi) - 2.0 * D * std::sin(phi)) - 1.0; }
    double B(double phi) const { return J * gamma * std::sin(phi); }

    // dA, dB with respect to one parameter.
    double dA(double phi, Tag wrt) const {
        switch (wrt) {
            case Tag::J: return std::cos(phi) - 2.0 * D * std::sin(phi);
            case Tag::Gamma: return 0.0;
            case Tag::D: return -2.0 * J * std::sin(phi);
        }
        return 0.0;
    }
    double dB(double phi, Tag wrt) const {
        switch (wrt) {
            case Tag::J: return gamma * std::sin(phi);
            case Tag::Gamma: return J * std::sin(phi);
            case Tag::D: return 0.0;
        }
        return 0.0;
    }
};

}  // namespace

DispersionPoint dispersion(const ChainParams& p, double phi) {
    p.validate();
    if (phi < 0.0 || phi > kPi)
        throw std::invalid_argument("dispersion: phi must lie in [0, pi]");
    Integrand f{p.J, p.gamma, p.D};
    return DispersionPoint{phi, std::hypot(f.A(phi), f.B(phi))};
}

double magnetization(const ChainParams& p, const QuadratureConfig& cfg) {
    p.validate();
    Integrand f{p.J, p.gamma, p.D};
    const double m = quadrature::integrate_or_throw(
        [&](double phi) {
            const double a = f.A(phi);
            return -a / (kPi * std::hypot(a, f.B(phi)));
        },
        0.0, kPi, cfg, "magnetization integral");
    if (std::abs(m) > 1.0 + cfg.abs_tol)
        throw NonConvergence("magnetization out of [-1,1]: " + std::to_string(m));
    return std::clamp(m, -1.0, 1.0);
}

double g_coefficient(const ChainParams& p, int k, const QuadratureConfig& cfg) {
    p.validate();
    Integrand f{p.J, p.gamma, p.D};
    const double kk = static_cast<double>(k);
    return quadrature::integrate_or_throw(
        [&](double phi) {
            const double a = f.A(phi);
            const double b = f.B(phi);
            return -(std::cos(kk * phi) * a - std::sin(kk * phi) * b) /
                   (kPi * std::hypot(a, b));
        },
        0.0, kPi, cfg, "G_k integral");
}

double magnetization_partial(const ChainParams& p, Tag wrt, const QuadratureConfig& cfg) {
    p.validate();
    Integrand f{p.J, p.gamma, p.D};
    return quadrature::integrate_or_throw(
        [&](double phi) {
            const double a = f.A(phi);
            const double b = f.B(phi);
            const double delta = std::hypot(a, b);
            const double w = (b * f.dA(phi, wrt) - a * f.dB(phi, wrt)) / (delta * delta * delta);
            return -b * w / kPi;
        },
        0.0, kPi, cfg, "magnetization partial integral");
}

double g_coefficient_partial(const ChainParams& p, int k, Tag wrt, const QuadratureConfig& cfg) {
    p.validate();
    Integrand f{p.J, p.gamma, p.D};
    const double kk = static_cast<double>(k);
    return quadrature::integrate_or_throw(
        [&](double phi) {
            const double a = f.A(phi);
            const double b = f.B(phi);
            const double delta = std::hypot(a, b);
            const double w = (b * f.dA(phi, wrt) - a * f.dB(phi, wrt)) / (delta * delta * delta);
            return -(std::cos(kk * phi) * b + std::sin(kk * phi) * a) * w / kPi;
        },
        0.0, kPi, cfg, "G_k partial integral");
}

}  // namespace xychain::chain_model
