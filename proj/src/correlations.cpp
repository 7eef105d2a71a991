#include "xychain/correlations.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace xychain::correlations {

namespace {

// Builds the r x r Toeplitz matrix for S^x_r: M[i][j] = G_{j-i-1}.
// `get` maps an index k in [-r, r] to G_k (or dG_k for derivative rows).
template <typename Getter>
Eigen::MatrixXd toeplitz_x(int r, Getter&& get) {
    Eigen::MatrixXd M(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) M(i, j) = get(j - i - 1);
    return M;
}

// S^y_r: M[i][j] = G_{i-j+1}.
template <typename Getter>
Eigen::MatrixXd toeplitz_y(int r, Getter&& get) {
    Eigen::MatrixXd M(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) M(i, j) = get(i - j + 1);
    return M;
}

// d(det M) via the Jacobi identity det(M)·tr(M⁻¹ dM). Near-singular M
// (|det| < 1e-12) falls back to the cofactor expansion: the sum over i
// of det(M with row i replaced by the corresponding row of dM), which
// stays finite when M⁻¹ does not exist.
double det_derivative(const Eigen::MatrixXd& M, const Eigen::MatrixXd& dM) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const double det = lu.determinant();
    if (std::abs(det) >= 1e-12) return det * lu.solve(dM).trace();

    const auto n = M.rows();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::MatrixXd R = M;
        R.row(i) = dM.row(i);
        sum += R.determinant();
    }
    return sum;
}

}  // namespace

// =====================================================================
// GTable
// =====================================================================

GTable::GTable(const ChainParams& p, const QuadratureConfig& cfg, int kmax)
    : params_(p), cfg_(cfg), kmax_(kmax) {
    params_.validate();
    cfg_.validate();
    if (kmax_ < 0) throw std::invalid_argument("GTable: kmax must be >= 0");
    g_.resize(2 * kmax_ + 1);
    for (auto& slot : dg_) slot.resize(2 * kmax_ + 1);
}

double GTable::m() const {
    if (!m_) m_ = chain_model::magnetization(params_, cfg_);
    return *m_;
}

double GTable::dm(Tag wrt) const {
    auto& slot = dm_[static_cast<int>(wrt)];
    if (!slot) slot = chain_model::magnetization_partial(params_, wrt, cfg_);
    return *slot;
}

double GTable::g(int k) const {
    if (k < -kmax_ || k > kmax_) throw std::out_of_range("GTable::g: |k| exceeds kmax");
    auto& slot = g_[static_cast<std::size_t>(k + kmax_)];
    if (!slot) slot = chain_model::g_coefficient(params_, k, cfg_);
    return *slot;
}

double GTable::dg(int k, Tag wrt) const {
    if (k < -kmax_ || k > kmax_) throw std::out_of_range("GTable::dg: |k| exceeds kmax");
    auto& slot = dg_[static_cast<int>(wrt)][static_cast<std::size_t>(k + kmax_)];
    if (!slot) slot = chain_model::g_coefficient_partial(params_, k, wrt, cfg_);
    return *slot;
}

// =====================================================================
// Correlators
// =====================================================================

double toeplitz_sx(const ChainParams& p, int r, const QuadratureConfig& cfg) {
    if (r < 1) throw std::invalid_argument("toeplitz_sx: r must be >= 1");
    GTable table(p, cfg, r);
    return toeplitz_x(r, [&](int k) { return table.g(k); }).partialPivLu().determinant();
}

double toeplitz_sy(const ChainParams& p, int r, const QuadratureConfig& cfg) {
    if (r < 1) throw std::invalid_argument("toeplitz_sy: r must be >= 1");
    GTable table(p, cfg, r);
    return toeplitz_y(r, [&](int k) { return table.g(k); }).partialPivLu().determinant();
}

double s_z(const ChainParams& p, int r, const QuadratureConfig& cfg) {
    if (r < 1) throw std::invalid_argument("s_z: r must be >= 1");
    GTable table(p, cfg, r);
    const double m = table.m();
    return m * m - table.g(r) * table.g(-r);
}

CorrelationSet correlation_set(const GTable& table, Separation r) {
    CorrelationSet out;
    out.r = r;
    out.m = table.m();
    if (r.is_infinite()) {
        // Transverse correlators vanish at infinite separation; the
        // longitudinal one factorizes into m².
        out.sxx = 0.0;
        out.syy = 0.0;
        out.szz = out.m * out.m;
        return out;
    }
    const int n = r.r();
    if (n > table.kmax()) throw std::out_of_range("correlation_set: separation exceeds GTable kmax");
    auto get = [&](int k) { return table.g(k); };
    out.sxx = toeplitz_x(n, get).partialPivLu().determinant();
    out.syy = toeplitz_y(n, get).partialPivLu().determinant();
    out.szz = out.m * out.m - table.g(n) * table.g(-n);
    return out;
}

CorrelationSet correlation_set(const ChainParams& p, Separation r, const QuadratureConfig& cfg) {
    GTable table(p, cfg, r.is_infinite() ? 0 : r.r());
    return correlation_set(table, r);
}

CorrelationPartials correlation_partials(const GTable& table, Separation r, Tag wrt) {
    CorrelationPartials out;
    out.dm = table.dm(wrt);
    const double m = table.m();
    if (r.is_infinite()) {
        out.dsxx = 0.0;
        out.dsyy = 0.0;
        out.dszz = 2.0 * m * out.dm;
        return out;
    }
    const int n = r.r();
    if (n > table.kmax())
        throw std::out_of_range("correlation_partials: separation exceeds GTable kmax");
    auto get = [&](int k) { return table.g(k); };
    auto dget = [&](int k) { return table.dg(k, wrt); };
    out.dsxx = det_derivative(toeplitz_x(n, get), toeplitz_x(n, dget));
    out.dsyy = det_derivative(toeplitz_y(n, get), toeplitz_y(n, dget));
    out.dszz = 2.0 * m * out.dm - table.dg(n, wrt) * table.g(-n) - table.g(n) * table.dg(-n, wrt);
    return out;
}

CorrelationPartials correlation_partials(const ChainParams& p, Separation r, Tag wrt,
                                         const QuadratureConfig& cfg) {
    GTable table(p, cfg, r.is_infinite() ? 0 : r.r());
    return correlation_partials(table, r, wrt);
}

// =====================================================================
// Long-distance decay fit
// =====================================================================

DecayFit asymptotic_decay_check(const ChainParams& p, const std::vector<int>& r_list,
                                const QuadratureConfig& cfg) {
    if (r_list.size() < 4)
        throw std::invalid_argument("asymptotic_decay_check: need at least 4 separations");
    for (std::size_t i = 0; i < r_list.size(); ++i) {
        if (r_list[i] < 8)
            throw std::invalid_argument("asymptotic_decay_check: separations must be >= 8");
        if (i > 0 && r_list[i] <= r_list[i - 1])
            throw std::invalid_argument("asymptotic_decay_check: separations must increase");
    }

    std::vector<double> logr, logg;
    logr.reserve(r_list.size());
    logg.reserve(r_list.size());
    DecayFit fit;
    for (int r : r_list) {
        const double gp = chain_model::g_coefficient(p, r, cfg);
        const double gm = chain_model::g_coefficient(p, -r, cfg);
        if (std::abs(gp) < 1e-14)
            throw DegenerateFit("asymptotic_decay_check: |G_r| < 1e-14 at r=" + std::to_string(r));
        fit.max_asymmetry = std::max(fit.max_asymmetry, std::abs(gp + gm) / std::abs(gp));
        logr.push_back(std::log(static_cast<double>(r)));
        logg.push_back(std::log(std::abs(gp)));
    }

    const auto n = static_cast<double>(logr.size());
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < logr.size(); ++i) {
        xbar += logr[i];
        ybar += logg[i];
    }
    xbar /= n;
    ybar /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < logr.size(); ++i) {
        sxy += (logr[i] - xbar) * (logg[i] - ybar);
        sxx += (logr[i] - xbar) * (logr[i] - xbar);
    }
    fit.slope = sxy / sxx;
    return fit;
}

}  // namespace xychain::correlations
