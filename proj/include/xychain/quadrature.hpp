#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "xychain/types.hpp"

// =====================================================================
// Adaptive Gauss–Kronrod 15(7) quadrature.
//
// The dispersion-type integrands handled here are smooth on (0, pi] but
// develop an integrable near-singularity at phi -> 0 when |J| -> 1
// (Delta -> | |J| - 1 |), so a worst-panel-first adaptive scheme is used:
// panels are kept in a max-heap by error estimate and the worst one is
// bisected until the global estimate passes max(abs_tol, rel_tol*|I|)
// or the subdivision budget runs out.
// =====================================================================

namespace xychain::quadrature {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // accumulated Kronrod error estimate
    bool converged = false;
    int panels = 0;
};

namespace detail {

// 15-point Kronrod nodes/weights on [-1, 1] with the embedded 7-point
// Gauss rule (nodes at the odd Kronrod indices). Values from the usual
// QUADPACK tabulation.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double integral;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double res_g = fc * kWg[3];
    double res_k = fc * kWgk[7];
    for (int i = 0; i < 7; ++i) {
        const double x = h * kXgk[i];
        const double fsum = f(c - x) + f(c + x);
        res_k += kWgk[i] * fsum;
        if (i % 2 == 1) res_g += kWg[i / 2] * fsum;
    }
    res_g *= h;
    res_k *= h;
    // QUADPACK-style sharpened error estimate.
    const double diff = std::abs(res_k - res_g);
    double err = diff;
    if (diff > 0.0) err = diff * std::min(1.0, std::pow(200.0 * diff, 1.5));
    return Panel{a, b, res_k, err};
}

}  // namespace detail

template <class F>
QuadResult integrate(const F& f, double a, double b, const QuadratureConfig& cfg) {
    cfg.validate();
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }

    std::priority_queue<detail::Panel> heap;
    detail::Panel first = detail::gk15(f, a, b);
    double total = first.integral;
    double err = first.error;
    heap.push(first);
    int panels = 1;

    auto tolerance = [&](double t) { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(t)); };

    while (err > tolerance(total) && panels < cfg.max_subdivisions) {
        detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        detail::Panel left = detail::gk15(f, worst.a, mid);
        detail::Panel right = detail::gk15(f, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    out.value = total;
    out.error = err;
    out.panels = panels;
    out.converged = err <= tolerance(total);
    return out;
}

// Same, but throws NonConvergence instead of returning a flagged result.
template <class F>
double integrate_or_throw(const F& f, double a, double b, const QuadratureConfig& cfg,
                          const char* what) {
    QuadResult r = integrate(f, a, b, cfg);
    if (!r.converged)
        throw NonConvergence(std::string(what) + " (error " + std::to_string(r.error) + " after " +
                             std::to_string(r.panels) + " panels)");
    return r.value;
}

}  // namespace xychain::quadrature
