#include "xychain/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "xychain/fisher.hpp"

namespace xychain::scan {

namespace {

using json = nlohmann::ordered_json;

// All J grids live on this lattice so refined and coarse points line up
// exactly and reruns reproduce the same doubles.
constexpr double kGridUnit = 0.002;

long to_units(double x, const char* what) {
    const double u = x / kGridUnit;
    const long k = std::lround(u);
    if (std::abs(u - static_cast<double>(k)) > 1e-9) {
        throw std::invalid_argument(std::string(what) +
                                    " must be a multiple of 0.002, got " + std::to_string(x));
    }
    return k;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string r_cell(const std::optional<Separation>& r) {
    if (!r) return {};
    return r->str();
}

std::string tag_cell(const std::optional<Tag>& t) { return t ? tag_name(*t) : std::string(); }

const char* bool_cell(bool b) { return b ? "true" : "false"; }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Runs body(0..n-1) on `threads` workers. Work is claimed through an
// atomic counter; callers write into preallocated slots so the output
// order never depends on scheduling. body must not throw.
template <typename Body>
void parallel_for(std::size_t n, int threads, const Body& body) {
    const int nt = std::max(1, threads);
    if (nt == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

std::vector<Separation> effective_r_list(const ScanSpec& spec) {
    if (!spec.r_list.empty()) return spec.r_list;
    std::vector<Separation> out;
    for (int r = 1; r <= 6; ++r) out.push_back(Separation::finite(r));
    out.push_back(Separation::infinite());
    return out;
}

int max_finite_r(const std::vector<Separation>& rs) {
    int k = 0;
    for (const auto& r : rs)
        if (!r.is_infinite()) k = std::max(k, r.r());
    return k;
}

// ---------------------------------------------------------------------
// mode runners
// ---------------------------------------------------------------------

void run_single_heatmap(const ScanSpec& spec, const GridPoints& grid, ScanResult& out) {
    const std::vector<double> ds = build_d_grid(spec.grid);
    const std::size_t nj = grid.J.size(), nd = ds.size(), ntag = spec.tags.size();
    std::vector<ScanRecord> recs(nj * nd * ntag);
    parallel_for(nj * nd, spec.threads, [&](std::size_t idx) {
        const double J = grid.J[idx / nd];
        const double D = ds[idx % nd];
        const ChainParams p{J, spec.gamma, D};
        const bool nc = near_critical(p, spec.cfg);
        for (std::size_t t = 0; t < ntag; ++t) {
            ScanRecord& rec = recs[idx * ntag + t];
            rec.J = J;
            rec.gamma = spec.gamma;
            rec.D = D;
            rec.tag = spec.tags[t];
            rec.near_critical = nc;
            try {
                const double h = fisher::qfi_single(p, spec.tags[t], spec.cfg);
                rec.qfi = h;
                rec.fi = h;  // diagonal qubit: the z measurement is optimal
                rec.saturation = 1.0;
            } catch (const std::exception& e) {
                rec.converged = false;
                rec.failure = e.what();
            }
        }
    });
    out.records = std::move(recs);
}

void run_pair_curves(const ScanSpec& spec, const GridPoints& grid, ScanResult& out) {
    const std::vector<Separation> rs = effective_r_list(spec);
    const std::size_t nj = grid.J.size(), ntag = spec.tags.size(), nr = rs.size();
    const int kmax = max_finite_r(rs);
    std::vector<ScanRecord> recs(nj * ntag * nr);
    parallel_for(nj, spec.threads, [&](std::size_t jidx) {
        const double J = grid.J[jidx];
        const ChainParams p{J, spec.gamma, spec.D};
        const bool nc = near_critical(p, spec.cfg);
        auto rec_at = [&](std::size_t t, std::size_t ri) -> ScanRecord& {
            return recs[(jidx * ntag + t) * nr + ri];
        };
        std::optional<correlations::GTable> table;
        std::string table_failure;
        try {
            table.emplace(p, spec.cfg, kmax);
            table->m();  // force the common integral up front
        } catch (const std::exception& e) {
            table_failure = e.what();
        }
        for (std::size_t t = 0; t < ntag; ++t) {
            // Distance ratios are taken against the infinite-separation
            // pair, so R_H and R_F tend to 1 as r grows.
            std::optional<double> h_inf, f_inf;
            if (table) {
                try {
                    const auto cs = correlations::correlation_set(*table, Separation::infinite());
                    const auto cp =
                        correlations::correlation_partials(*table, Separation::infinite(), spec.tags[t]);
                    const double h = fisher::qfi_pair_closed_form(cs, cp);
                    const double f = fisher::fi_pair_magnetization(cs, cp);
                    if (h > 0.0) h_inf = h;
                    if (f > 0.0) f_inf = f;
                } catch (const std::exception&) {
                    // leave the ratios empty for this tag
                }
            }
            for (std::size_t ri = 0; ri < nr; ++ri) {
                ScanRecord& rec = rec_at(t, ri);
                rec.J = J;
                rec.gamma = spec.gamma;
                rec.D = spec.D;
                rec.r = rs[ri];
                rec.tag = spec.tags[t];
                rec.near_critical = nc;
                if (!table) {
                    rec.converged = false;
                    rec.failure = table_failure;
                    continue;
                }
                try {
                    const fisher::FisherScalars s = fisher::fisher_scalars(*table, rs[ri], spec.tags[t]);
                    rec.qfi = s.qfi;
                    rec.fi = s.fi;
                    rec.saturation = s.saturation;
                    if (h_inf) rec.R_H = s.qfi / *h_inf;
                    if (f_inf) rec.R_F = s.fi / *f_inf;
                } catch (const std::exception& e) {
                    rec.converged = false;
                    rec.failure = e.what();
                }
            }
        }
    });
    out.records = std::move(recs);
}

void run_multiparam(const ScanSpec& spec, const GridPoints& grid, ScanResult& out) {
    const std::vector<Separation> rs = effective_r_list(spec);
    const std::size_t nj = grid.J.size(), nr = rs.size();
    const int kmax = max_finite_r(rs);
    std::vector<ScanRecord> recs(nj * nr);
    parallel_for(nj, spec.threads, [&](std::size_t jidx) {
        const double J = grid.J[jidx];
        const ChainParams p{J, spec.gamma, spec.D};
        const bool nc = near_critical(p, spec.cfg);
        std::optional<correlations::GTable> table;
        std::string table_failure;
        try {
            table.emplace(p, spec.cfg, kmax);
            table->m();
        } catch (const std::exception& e) {
            table_failure = e.what();
        }
        for (std::size_t ri = 0; ri < nr; ++ri) {
            ScanRecord& rec = recs[jidx * nr + ri];
            rec.J = J;
            rec.gamma = spec.gamma;
            rec.D = spec.D;
            rec.r = rs[ri];
            rec.near_critical = nc;
            if (!table) {
                rec.converged = false;
                rec.failure = table_failure;
                continue;
            }
            try {
                const multiparam::FisherMatrix H = multiparam::qfim_pair(*table, rs[ri]);
                const multiparam::UhlmannMatrix U = multiparam::uhlmann_matrix(*table, rs[ri]);
                rec.det_qfim = H.det;
                rec.trace_inverse = H.trace_inverse;
                rec.hjj_fraction = H.hjj_fraction;
                rec.uhlmann_max_abs = U.max_abs;
            } catch (const std::exception& e) {
                rec.converged = false;
                rec.failure = e.what();
            }
        }
    });
    out.records = std::move(recs);
}

// --- oracle-check ----------------------------------------------------

struct OracleJob {
    double J = 0.0;
    int N = 12;
};

// Entrywise five-point stencil in J of the site-averaged reduced pair
// matrix of the finite chain. h is scaled to the magnitude of J.
Eigen::Matrix4cd oracle_drho_dJ(const ScanSpec& spec, const OracleJob& job, int r) {
    const double h = 1e-3 * std::max(1.0, std::abs(job.J));
    auto rho_at = [&](double J) {
        oracle::FiniteChainSpec fs{job.N, ChainParams{J, spec.gamma, spec.D}};
        const oracle::GroundState gs = oracle::ground_state(fs);
        return states::to_dense(states::pair_state(oracle::oracle_correlators(gs, fs, r)).entries())
            .cast<std::complex<double>>()
            .eval();
    };
    // (-f(2h) + 8 f(h) - 8 f(-h) + f(-2h)) / (12 h)
    const Eigen::Matrix4cd f1 = rho_at(job.J + h), f2 = rho_at(job.J + 2.0 * h);
    const Eigen::Matrix4cd fm1 = rho_at(job.J - h), fm2 = rho_at(job.J - 2.0 * h);
    return ((-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h)).eval();
}

void push_row(std::vector<OracleRecord>& rows, const ScanSpec& spec, const OracleJob& job,
              std::optional<int> r, const std::string& quantity, double lib, double orc) {
    OracleRecord rec;
    rec.J = job.J;
    rec.gamma = spec.gamma;
    rec.D = spec.D;
    rec.r = r;
    rec.quantity = quantity;
    rec.library = lib;
    rec.oracle = orc;
    rec.abs_dev = std::abs(lib - orc);
    rec.rel_dev = rec.abs_dev / std::max(std::abs(orc), 1e-12);
    rec.N = job.N;
    rows.push_back(std::move(rec));
}

std::vector<OracleRecord> oracle_rows_for(const ScanSpec& spec, const OracleJob& job) {
    std::vector<OracleRecord> rows;
    const ChainParams p{job.J, spec.gamma, spec.D};
    oracle::FiniteChainSpec fs{job.N, p};
    const oracle::GroundState gs = oracle::ground_state(fs);

    const double m_lib = chain_model::magnetization(p, spec.cfg);
    const correlations::CorrelationSet c1_orc = oracle::oracle_correlators(gs, fs, 1);
    push_row(rows, spec, job, std::nullopt, "m", m_lib, c1_orc.m);

    for (int r = 1; r <= 3; ++r) {
        const auto lib = correlations::correlation_set(p, Separation::finite(r), spec.cfg);
        const auto orc = r == 1 ? c1_orc : oracle::oracle_correlators(gs, fs, r);
        push_row(rows, spec, job, r, "sxx", lib.sxx, orc.sxx);
        push_row(rows, spec, job, r, "syy", lib.syy, orc.syy);
        push_row(rows, spec, job, r, "szz", lib.szz, orc.szz);
    }

    // Reduced pair matrix entries at r = 1, in the X-state parametrization.
    {
        const states::XEntries lib = states::pair_state(p, Separation::finite(1), spec.cfg).entries();
        const states::XEntries orc = states::pair_state(c1_orc).entries();
        push_row(rows, spec, job, 1, "rho_a_plus", lib.a_plus, orc.a_plus);
        push_row(rows, spec, job, 1, "rho_a_minus", lib.a_minus, orc.a_minus);
        push_row(rows, spec, job, 1, "rho_b_plus", lib.b_plus, orc.b_plus);
        push_row(rows, spec, job, 1, "rho_b_minus", lib.b_minus, orc.b_minus);
        push_row(rows, spec, job, 1, "rho_c", lib.c, orc.c);
    }

    // QFI in J at r = 1: library closed form against the definitional
    // eigenbasis evaluation on finite-chain data with stencil derivatives.
    {
        const double qfi_lib = fisher::qfi_pair_closed_form(p, Separation::finite(1), Tag::J, spec.cfg);
        const Eigen::Matrix4cd rho =
            states::to_dense(states::pair_state(c1_orc).entries()).cast<std::complex<double>>();
        const Eigen::Matrix4cd drho = oracle_drho_dJ(spec, job, 1);
        push_row(rows, spec, job, 1, "qfi_J", qfi_lib, oracle::qfi_dense(rho, drho));

        // SLD consistency residual || d rho - (L rho + rho L)/2 ||_max
        // on each side; both should sit at rounding level.
        const Eigen::Matrix4cd L_orc = oracle::sld_dense(rho, drho);
        const double resid_orc =
            (drho - 0.5 * (L_orc * rho + rho * L_orc)).cwiseAbs().maxCoeff();

        const states::XState rho_lib = states::pair_state(p, Separation::finite(1), spec.cfg);
        const states::XEntries drho_lib = states::xstate_derivative(
            correlations::correlation_partials(p, Separation::finite(1), Tag::J, spec.cfg));
        const Eigen::Matrix4d L_lib =
            multiparam::to_dense(multiparam::sld_xstate(rho_lib, drho_lib, Tag::J));
        const Eigen::Matrix4d rho_d = states::to_dense(rho_lib.entries());
        const Eigen::Matrix4d drho_d = states::to_dense(drho_lib);
        const double resid_lib =
            (drho_d - 0.5 * (L_lib * rho_d + rho_d * L_lib)).cwiseAbs().maxCoeff();
        push_row(rows, spec, job, 1, "sld_residual", resid_lib, resid_orc);
    }
    return rows;
}

void run_oracle_check(const ScanSpec& spec, const GridPoints& grid, ScanResult& out) {
    std::vector<OracleJob> jobs;
    if (spec.custom_grid) {
        for (double J : grid.J) jobs.push_back({J, spec.oracle_N});
    } else {
        // Built-in suite: an N sweep at one gapped point plus two more
        // parameter points at the requested size.
        for (int N : {8, 10, 12}) jobs.push_back({0.5, N});
        jobs.push_back({1.3, spec.oracle_N});
        jobs.push_back({2.0, spec.oracle_N});
    }
    std::vector<std::vector<OracleRecord>> blocks(jobs.size());
    std::atomic<int> failures{0};
    parallel_for(jobs.size(), spec.threads, [&](std::size_t i) {
        try {
            blocks[i] = oracle_rows_for(spec, jobs[i]);
        } catch (const std::exception& e) {
            OracleRecord rec;
            rec.J = jobs[i].J;
            rec.gamma = spec.gamma;
            rec.D = spec.D;
            rec.quantity = std::string("error: ") + e.what();
            rec.N = jobs[i].N;
            blocks[i] = {rec};
            failures.fetch_add(1);
        }
    });
    for (auto& b : blocks)
        for (auto& r : b) out.oracle_records.push_back(std::move(r));
    out.failures += failures.load();
}

void run_decay(const ScanSpec& spec, const GridPoints& grid, ScanResult& out) {
    std::vector<DecayRecord> recs(grid.J.size());
    parallel_for(grid.J.size(), spec.threads, [&](std::size_t i) {
        DecayRecord& rec = recs[i];
        rec.J = grid.J[i];
        rec.gamma = spec.gamma;
        rec.D = spec.D;
        try {
            const ChainParams p{grid.J[i], spec.gamma, spec.D};
            const correlations::DecayFit fit =
                correlations::asymptotic_decay_check(p, spec.decay_r, spec.cfg);
            rec.slope = fit.slope;
            rec.max_asymmetry = fit.max_asymmetry;
        } catch (const std::exception& e) {
            rec.converged = false;
            rec.failure = e.what();
        }
    });
    out.decay_records = std::move(recs);
}

}  // namespace

// ---------------------------------------------------------------------
// public surface
// ---------------------------------------------------------------------

Mode mode_from_string(const std::string& s) {
    if (s == "single-heatmap") return Mode::SingleHeatmap;
    if (s == "pair-curves") return Mode::PairCurves;
    if (s == "multiparam") return Mode::Multiparam;
    if (s == "oracle-check") return Mode::OracleCheck;
    if (s == "asymptotic-decay") return Mode::AsymptoticDecay;
    throw std::invalid_argument("unknown scan mode: " + s);
}

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::SingleHeatmap: return "single-heatmap";
        case Mode::PairCurves: return "pair-curves";
        case Mode::Multiparam: return "multiparam";
        case Mode::OracleCheck: return "oracle-check";
        case Mode::AsymptoticDecay: return "asymptotic-decay";
    }
    throw std::logic_error("unreachable scan mode");
}

ScanSpec preset_spec(const std::string& name) {
    ScanSpec s;
    s.preset = name;
    auto pair_grid = [&](double j_min, double gamma, double D) {
        s.mode = Mode::PairCurves;
        s.grid = GridSpec{};
        s.grid.j_min = j_min;
        s.gamma = gamma;
        s.D = D;
    };
    if (name == "fig1") {
        s.mode = Mode::SingleHeatmap;
        s.grid = GridSpec{};
        s.grid.d_min = 0.0;
        s.grid.d_max = 0.5;
        s.grid.d_step = 0.01;
        s.gamma = 1.0;
    } else if (name == "fig2") {
        pair_grid(0.01, 1.0, 0.0);
    } else if (name == "fig3-4") {
        pair_grid(-2.0, 1.0, 0.3);
    } else if (name == "fig8") {
        pair_grid(0.01, 0.25, 0.0);
    } else if (name == "fig9-10") {
        pair_grid(-2.0, 0.25, 0.1);
    } else if (name == "fig5-7a" || name == "fig5-7b") {
        s.mode = Mode::Multiparam;
        s.grid = GridSpec{};
        s.gamma = 1.0;
        s.D = (name == "fig5-7b") ? 0.1 : 0.0;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return s;
}

std::vector<std::string> preset_names() {
    return {"fig1", "fig2", "fig3-4", "fig5-7a", "fig5-7b", "fig8", "fig9-10"};
}

GridPoints build_j_grid(const GridSpec& g, const QuadratureConfig& cfg) {
    if (!(g.j_min <= g.j_max)) throw std::invalid_argument("j_min must not exceed j_max");
    const long k_min = to_units(g.j_min, "j_min");
    const long k_max = to_units(g.j_max, "j_max");
    const long step_units = to_units(g.j_step, "j_step");
    if (step_units < 1) throw std::invalid_argument("j_step must be positive");

    GridPoints out;
    for (long k = k_min; k <= k_max; ++k) {
        const double J = static_cast<double>(k) * kGridUnit;
        const bool refined =
            g.refine && (std::abs(J - 1.0) < g.refine_window || std::abs(J + 1.0) < g.refine_window);
        if (!refined && (k - k_min) % step_units != 0) continue;
        if (k == 0 || std::abs(std::abs(J) - 1.0) < cfg.critical_guard) {
            out.excluded.push_back(J);
            continue;
        }
        out.J.push_back(J);
    }
    return out;
}

std::vector<double> build_d_grid(const GridSpec& g) {
    if (!(g.d_min <= g.d_max)) throw std::invalid_argument("d_min must not exceed d_max");
    if (g.d_max > g.d_min && g.d_step <= 0.0)
        throw std::invalid_argument("d_step must be positive");
    std::vector<double> out;
    if (g.d_max == g.d_min) {
        out.push_back(g.d_min);
        return out;
    }
    const long n = std::lround(std::floor((g.d_max - g.d_min) / g.d_step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(g.d_min + static_cast<double>(i) * g.d_step);
    return out;
}

ScanResult run_scan(const ScanSpec& spec) {
    spec.cfg.validate();
    ChainParams{1.0, spec.gamma, spec.D}.validate();  // range-check gamma
    ScanResult out;
    out.spec = spec;
    const GridPoints grid = build_j_grid(spec.grid, spec.cfg);
    // The oracle's built-in suite ignores the J grid entirely.
    if (spec.mode != Mode::OracleCheck || spec.custom_grid) out.excluded_J = grid.excluded;

    switch (spec.mode) {
        case Mode::SingleHeatmap: run_single_heatmap(spec, grid, out); break;
        case Mode::PairCurves: run_pair_curves(spec, grid, out); break;
        case Mode::Multiparam: run_multiparam(spec, grid, out); break;
        case Mode::OracleCheck: run_oracle_check(spec, grid, out); break;
        case Mode::AsymptoticDecay: run_decay(spec, grid, out); break;
    }
    for (const auto& r : out.records)
        if (!r.converged) ++out.failures;
    for (const auto& r : out.decay_records)
        if (!r.converged) ++out.failures;
    return out;
}

std::string to_csv(const ScanResult& result) {
    std::string s;
    s += "# schema_version=";
    s += std::to_string(kSchemaVersion);
    s += '\n';
    const Mode mode = result.spec.mode;
    if (mode == Mode::OracleCheck) {
        s += "J,gamma,D,r,quantity,library,oracle,abs_dev,rel_dev,N,source\n";
        for (const auto& r : result.oracle_records) {
            s += fmt(r.J) + ',' + fmt(r.gamma) + ',' + fmt(r.D) + ',';
            s += (r.r ? std::to_string(*r.r) : std::string()) + ',';
            s += r.quantity + ',' + fmt(r.library) + ',' + fmt(r.oracle) + ',';
            s += fmt(r.abs_dev) + ',' + fmt(r.rel_dev) + ',' + std::to_string(r.N) + ",oracle\n";
        }
        return s;
    }
    if (mode == Mode::AsymptoticDecay) {
        s += "J,gamma,D,slope,max_asymmetry,converged\n";
        for (const auto& r : result.decay_records) {
            s += fmt(r.J) + ',' + fmt(r.gamma) + ',' + fmt(r.D) + ',';
            s += fmt_opt(r.slope) + ',' + fmt_opt(r.max_asymmetry) + ',';
            s += bool_cell(r.converged);
            s += '\n';
        }
        return s;
    }
    s += "J,gamma,D,r,tag,qfi,fi,saturation,R_H,R_F,det_qfim,trace_inverse,"
         "hjj_fraction,uhlmann_max_abs,near_critical,converged\n";
    for (const auto& r : result.records) {
        s += fmt(r.J) + ',' + fmt(r.gamma) + ',' + fmt(r.D) + ',';
        s += r_cell(r.r) + ',' + tag_cell(r.tag) + ',';
        s += fmt_opt(r.qfi) + ',' + fmt_opt(r.fi) + ',' + fmt_opt(r.saturation) + ',';
        s += fmt_opt(r.R_H) + ',' + fmt_opt(r.R_F) + ',';
        s += fmt_opt(r.det_qfim) + ',' + fmt_opt(r.trace_inverse) + ',';
        s += fmt_opt(r.hjj_fraction) + ',' + fmt_opt(r.uhlmann_max_abs) + ',';
        s += bool_cell(r.near_critical);
        s += ',';
        s += bool_cell(r.converged);
        s += '\n';
    }
    return s;
}

std::string to_json(const ScanResult& result) {
    const ScanSpec& spec = result.spec;
    json root;
    root["schema_version"] = kSchemaVersion;
    root["library_version"] = kLibraryVersion;
    root["mode"] = mode_name(spec.mode);
    root["preset"] = spec.preset.empty() ? json(nullptr) : json(spec.preset);

    json cfg;
    cfg["gamma"] = spec.gamma;
    cfg["D"] = spec.D;
    cfg["grid"] = {{"j_min", spec.grid.j_min},
                   {"j_max", spec.grid.j_max},
                   {"j_step", spec.grid.j_step},
                   {"refine", spec.grid.refine},
                   {"refine_window", spec.grid.refine_window},
                   {"d_min", spec.grid.d_min},
                   {"d_max", spec.grid.d_max},
                   {"d_step", spec.grid.d_step}};
    json rl = json::array();
    for (const auto& r : effective_r_list(spec)) rl.push_back(r.str());
    cfg["r_list"] = rl;
    json tl = json::array();
    for (const auto& t : spec.tags) tl.push_back(tag_name(t));
    cfg["tags"] = tl;
    cfg["quadrature"] = {{"abs_tol", spec.cfg.abs_tol},
                         {"rel_tol", spec.cfg.rel_tol},
                         {"max_subdivisions", spec.cfg.max_subdivisions},
                         {"critical_guard", spec.cfg.critical_guard}};
    if (spec.mode == Mode::OracleCheck) cfg["oracle_N"] = spec.oracle_N;
    if (spec.mode == Mode::AsymptoticDecay) cfg["decay_r"] = spec.decay_r;
    root["config"] = std::move(cfg);

    json records = json::array();
    if (spec.mode == Mode::OracleCheck) {
        for (const auto& r : result.oracle_records) {
            json o;
            o["J"] = r.J;
            o["gamma"] = r.gamma;
            o["D"] = r.D;
            o["r"] = r.r ? json(*r.r) : json(nullptr);
            o["quantity"] = r.quantity;
            o["library"] = r.library;
            o["oracle"] = r.oracle;
            o["abs_dev"] = r.abs_dev;
            o["rel_dev"] = r.rel_dev;
            o["N"] = r.N;
            o["source"] = "oracle";
            records.push_back(std::move(o));
        }
    } else if (spec.mode == Mode::AsymptoticDecay) {
        for (const auto& r : result.decay_records) {
            json o;
            o["J"] = r.J;
            o["gamma"] = r.gamma;
            o["D"] = r.D;
            o["slope"] = opt_json(r.slope);
            o["max_asymmetry"] = opt_json(r.max_asymmetry);
            o["converged"] = r.converged;
            o["failure"] = r.failure.empty() ? json(nullptr) : json(r.failure);
            records.push_back(std::move(o));
        }
    } else {
        for (const auto& r : result.records) {
            json o;
            o["J"] = r.J;
            o["gamma"] = r.gamma;
            o["D"] = r.D;
            if (!r.r) {
                o["r"] = nullptr;
            } else if (r.r->is_infinite()) {
                o["r"] = "inf";
            } else {
                o["r"] = r.r->r();
            }
            o["tag"] = r.tag ? json(tag_name(*r.tag)) : json(nullptr);
            o["qfi"] = opt_json(r.qfi);
            o["fi"] = opt_json(r.fi);
            o["saturation"] = opt_json(r.saturation);
            o["R_H"] = opt_json(r.R_H);
            o["R_F"] = opt_json(r.R_F);
            o["det_qfim"] = opt_json(r.det_qfim);
            o["trace_inverse"] = opt_json(r.trace_inverse);
            o["hjj_fraction"] = opt_json(r.hjj_fraction);
            o["uhlmann_max_abs"] = opt_json(r.uhlmann_max_abs);
            o["near_critical"] = r.near_critical;
            o["converged"] = r.converged;
            o["failure"] = r.failure.empty() ? json(nullptr) : json(r.failure);
            records.push_back(std::move(o));
        }
    }
    root["records"] = std::move(records);

    json summary;
    summary["rows"] = root["records"].size();
    summary["excluded_J"] = result.excluded_J;
    summary["failures"] = result.failures;
    root["summary"] = std::move(summary);
    return root.dump(2) + "\n";
}

void write_output(const ScanResult& result, const std::string& path, const std::string& format) {
    std::string payload;
    if (format == "csv") {
        payload = to_csv(result);
    } else if (format == "json") {
        payload = to_json(result);
    } else {
        throw std::invalid_argument("unknown output format: " + format + " (want csv or json)");
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << payload;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace xychain::scan
