#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xychain/multiparam.hpp"
#include "xychain/oracle.hpp"

// =====================================================================
// Parameter-scan engine behind the CLI. Five modes:
//
//   single-heatmap   H_JJ of the single-spin state over a (J, D) grid
//   pair-curves      qfi/fi/saturation/R_H/R_F per (J, r, tag)
//   multiparam       det(QFIM), Tr[H^-1], H_JJ fraction, Uhlmann norm
//   oracle-check     side-by-side library vs finite-chain values
//   asymptotic-decay log-log decay slope of G_r per parameter point
//
// Determinism contract: output bytes depend only on the spec (not on
// thread count or completion order). Grid points are dispatched to a
// pool but results land in preallocated slots and are emitted in grid
// order; serialization uses fixed formatting and no timestamps.
//
// J grids are built on an integer lattice of 0.002 steps so refined and
// coarse points coincide exactly across runs: the base step must be a
// multiple of 0.002, and inside |J -+ 1| < 0.1 (when refinement is on)
// every 0.002 point is kept. J = 0 and |J -+ 1| < critical_guard are
// excluded and reported.
// =====================================================================

namespace xychain::scan {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class Mode { SingleHeatmap, PairCurves, Multiparam, OracleCheck, AsymptoticDecay };

Mode mode_from_string(const std::string& s);
const char* mode_name(Mode m);

struct GridSpec {
    double j_min = -2.0;
    double j_max = 2.0;
    double j_step = 0.01;
    bool refine = true;  // 0.002 steps inside |J -+ 1| < refine_window
    double refine_window = 0.1;
    // D axis, used by single-heatmap only.
    double d_min = 0.0;
    double d_max = 0.0;
    double d_step = 0.01;
};

struct ScanSpec {
    Mode mode = Mode::PairCurves;
    std::string preset;  // empty for hand-rolled grids
    GridSpec grid;
    double gamma = 1.0;
    double D = 0.0;
    std::vector<Separation> r_list;  // defaulted to {1..6, inf} when empty
    std::vector<Tag> tags = {Tag::J};
    QuadratureConfig cfg;
    int threads = 1;
    int oracle_N = 12;
    std::vector<int> decay_r = {8, 16, 32, 64};
    // Set when the caller hands an explicit --grid-J; oracle-check then
    // sweeps those J values at oracle_N instead of its built-in suite.
    bool custom_grid = false;
};

// Named parameter sets mirroring the figure-style studies shipped with
// the library; see README for extents.
ScanSpec preset_spec(const std::string& name);
std::vector<std::string> preset_names();

struct GridPoints {
    std::vector<double> J;
    std::vector<double> excluded;
};
GridPoints build_j_grid(const GridSpec& g, const QuadratureConfig& cfg);
std::vector<double> build_d_grid(const GridSpec& g);

// One row of scan output; optional = not applicable in this mode or
// not computable at this point (never NaN).
struct ScanRecord {
    double J = 0.0;
    double gamma = 1.0;
    double D = 0.0;
    std::optional<Separation> r;
    std::optional<Tag> tag;
    std::optional<double> qfi;
    std::optional<double> fi;
    std::optional<double> saturation;
    std::optional<double> R_H;
    std::optional<double> R_F;
    std::optional<double> det_qfim;
    std::optional<double> trace_inverse;
    std::optional<double> hjj_fraction;
    std::optional<double> uhlmann_max_abs;
    bool near_critical = false;
    bool converged = true;
    std::string failure;  // diagnostic for converged = false rows
};

struct OracleRecord {
    double J = 0.0;
    double gamma = 1.0;
    double D = 0.0;
    std::optional<int> r;
    std::string quantity;
    double library = 0.0;
    double oracle = 0.0;
    double abs_dev = 0.0;
    double rel_dev = 0.0;
    int N = 0;
};

struct DecayRecord {
    double J = 0.0;
    double gamma = 1.0;
    double D = 0.0;
    std::optional<double> slope;
    std::optional<double> max_asymmetry;
    bool converged = true;
    std::string failure;
};

struct ScanResult {
    ScanSpec spec;
    std::vector<ScanRecord> records;
    std::vector<OracleRecord> oracle_records;
    std::vector<DecayRecord> decay_records;
    std::vector<double> excluded_J;
    int failures = 0;
};

ScanResult run_scan(const ScanSpec& spec);

std::string to_csv(const ScanResult& result);
std::string to_json(const ScanResult& result);

// format: "csv" or "json"; writes atomically-ish (temp file + rename not
// needed here; plain ofstream) and throws on I/O failure.
void write_output(const ScanResult& result, const std::string& path, const std::string& format);

}  // namespace xychain::scan
