#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "xychain/scan.hpp"

using namespace xychain;
namespace scan = xychain::scan;

namespace {
scan::ScanSpec tiny_pair_spec() {
    scan::ScanSpec s;
    s.mode = scan::Mode::PairCurves;
    s.grid.j_min = 0.4;
    s.grid.j_max = 0.6;
    s.grid.j_step = 0.1;
    s.gamma = 1.0;
    s.D = 0.0;
    s.r_list = {Separation::finite(1), Separation::finite(2), Separation::infinite()};
    s.tags = {Tag::J};
    return s;
}
}  // namespace

TEST_CASE("grid construction on the 0.002 lattice") {
    QuadratureConfig cfg;
    scan::GridSpec g;
    g.j_min = 0.1;
    g.j_max = 0.5;
    g.j_step = 0.1;
    g.refine = false;
    auto pts = scan::build_j_grid(g, cfg);
    REQUIRE(pts.J.size() == 5);
    CHECK(pts.J.front() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(pts.J.back() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pts.excluded.empty());

    // refinement kicks in inside |J - 1| < 0.1 and J = 1 is excluded
    g.j_min = 0.8;
    g.j_max = 1.2;
    g.j_step = 0.01;
    g.refine = true;
    auto fine = scan::build_j_grid(g, cfg);
    CHECK(fine.J.size() == 120);
    REQUIRE(fine.excluded.size() == 1);
    CHECK(fine.excluded[0] == doctest::Approx(1.0));

    // J = 0 is never evaluated
    g.j_min = -0.05;
    g.j_max = 0.05;
    g.j_step = 0.01;
    auto zero = scan::build_j_grid(g, cfg);
    REQUIRE(zero.excluded.size() == 1);
    CHECK(zero.excluded[0] == 0.0);
    CHECK(zero.J.size() == 10);

    g.j_step = 0.0143;  // off the lattice
    CHECK_THROWS_AS(scan::build_j_grid(g, cfg), std::invalid_argument);
    g.j_step = 0.01;
    g.j_min = 2.0;
    g.j_max = 1.0;
    CHECK_THROWS_AS(scan::build_j_grid(g, cfg), std::invalid_argument);
}

TEST_CASE("mode names round-trip") {
    for (auto m : {scan::Mode::SingleHeatmap, scan::Mode::PairCurves, scan::Mode::Multiparam,
                   scan::Mode::OracleCheck, scan::Mode::AsymptoticDecay}) {
        CHECK(scan::mode_from_string(scan::mode_name(m)) == m);
    }
    CHECK_THROWS_AS(scan::mode_from_string("heatmap"), std::invalid_argument);
}

TEST_CASE("presets are well-formed") {
    const auto names = scan::preset_names();
    CHECK(names.size() == 7);
    for (const auto& n : names) {
        const auto s = scan::preset_spec(n);
        CHECK(s.preset == n);
        CHECK(std::abs(s.gamma) <= 1.0);
    }
    CHECK(scan::preset_spec("fig1").mode == scan::Mode::SingleHeatmap);
    CHECK(scan::preset_spec("fig2").grid.j_min == doctest::Approx(0.01));
    CHECK(scan::preset_spec("fig3-4").D == doctest::Approx(0.3));
    CHECK(scan::preset_spec("fig5-7b").mode == scan::Mode::Multiparam);
    CHECK(scan::preset_spec("fig9-10").gamma == doctest::Approx(0.25));
    CHECK_THROWS_AS(scan::preset_spec("fig99"), std::invalid_argument);
}

TEST_CASE("pair-curve records are ordered and complete") {
    const auto res = scan::run_scan(tiny_pair_spec());
    REQUIRE(res.records.size() == 9);  // 3 J x 1 tag x 3 r
    CHECK(res.failures == 0);
    for (std::size_t i = 0; i < res.records.size(); ++i) {
        const auto& rec = res.records[i];
        CHECK(rec.converged);
        CHECK(rec.qfi.has_value());
        CHECK(rec.fi.has_value());
        CHECK(*rec.fi <= *rec.qfi + 1e-9);
        CHECK(rec.saturation.has_value());
        CHECK_FALSE(rec.det_qfim.has_value());
        // r cycles fastest, J slowest
        const int jblock = static_cast<int>(i) / 3;
        CHECK(rec.J == doctest::Approx(0.4 + 0.1 * jblock));
    }
    // infinite rows close each block with unit ratios
    for (std::size_t i = 2; i < res.records.size(); i += 3) {
        REQUIRE(res.records[i].r.has_value());
        CHECK(res.records[i].r->is_infinite());
        CHECK(*res.records[i].R_H == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(*res.records[i].R_F == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("reruns and thread counts do not change the bytes") {
    auto spec1 = tiny_pair_spec();
    spec1.threads = 1;
    auto spec3 = tiny_pair_spec();
    spec3.threads = 3;
    const auto a = scan::run_scan(spec1);
    const auto b = scan::run_scan(spec3);
    const auto c = scan::run_scan(spec1);
    CHECK(scan::to_csv(a) == scan::to_csv(b));
    CHECK(scan::to_csv(a) == scan::to_csv(c));
    CHECK(scan::to_json(a) == scan::to_json(b));
}

TEST_CASE("csv carries the schema header") {
    const auto res = scan::run_scan(tiny_pair_spec());
    const std::string csv = scan::to_csv(res);
    CHECK(csv.rfind("# schema_version=1\n", 0) == 0);
    const auto second_line = csv.substr(csv.find('\n') + 1, csv.find('\n', csv.find('\n') + 1) -
                                                               csv.find('\n') - 1);
    CHECK(second_line ==
          "J,gamma,D,r,tag,qfi,fi,saturation,R_H,R_F,det_qfim,trace_inverse,hjj_fraction,"
          "uhlmann_max_abs,near_critical,converged");
    // no not-a-number leaks into the serialized table
    CHECK(csv.find("nan") == std::string::npos);
}

TEST_CASE("json payload parses and echoes the configuration") {
    auto spec = tiny_pair_spec();
    spec.preset = "";
    const auto res = scan::run_scan(spec);
    const auto doc = nlohmann::json::parse(scan::to_json(res));
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["mode"] == "pair-curves");
    CHECK(doc["preset"].is_null());
    CHECK(doc["config"]["gamma"] == 1.0);
    CHECK(doc["config"]["r_list"].size() == 3);
    CHECK(doc["records"].size() == 9);
    CHECK(doc["summary"]["rows"] == 9);
    CHECK(doc["summary"]["failures"] == 0);
    for (const auto& rec : doc["records"]) {
        CHECK(rec["det_qfim"].is_null());
        CHECK(rec["failure"].is_null());
    }
    CHECK(doc["records"][2]["r"] == "inf");
    CHECK(doc["records"][0]["r"] == 1);
}

TEST_CASE("single-heatmap mode sweeps both axes") {
    scan::ScanSpec s;
    s.mode = scan::Mode::SingleHeatmap;
    s.grid.j_min = 0.5;
    s.grid.j_max = 0.6;
    s.grid.j_step = 0.05;
    s.grid.d_min = 0.0;
    s.grid.d_max = 0.2;
    s.grid.d_step = 0.1;
    const auto res = scan::run_scan(s);
    REQUIRE(res.records.size() == 9);  // 3 J x 3 D
    for (const auto& rec : res.records) {
        CHECK(rec.converged);
        CHECK(*rec.qfi == *rec.fi);
        CHECK(*rec.saturation == 1.0);
        CHECK_FALSE(rec.r.has_value());
    }
    // D varies fastest
    CHECK(res.records[0].D == 0.0);
    CHECK(res.records[1].D == doctest::Approx(0.1));
    CHECK(res.records[3].J == doctest::Approx(0.55));
}

TEST_CASE("multiparam mode populates the matrix columns") {
    scan::ScanSpec s;
    s.mode = scan::Mode::Multiparam;
    s.grid.j_min = 0.5;
    s.grid.j_max = 0.5;
    s.grid.j_step = 0.01;
    s.r_list = {Separation::finite(2), Separation::infinite()};
    const auto res = scan::run_scan(s);
    REQUIRE(res.records.size() == 2);
    const auto& r2 = res.records[0];
    CHECK_FALSE(r2.tag.has_value());
    CHECK_FALSE(r2.qfi.has_value());
    REQUIRE(r2.det_qfim.has_value());
    CHECK(*r2.det_qfim > 0.0);
    REQUIRE(r2.trace_inverse.has_value());
    CHECK(*r2.trace_inverse == doctest::Approx(861.73).epsilon(1e-3));
    CHECK(*r2.hjj_fraction > 0.0);
    CHECK(*r2.hjj_fraction < 1.0);
    CHECK(*r2.uhlmann_max_abs < 1e-12);
    // the factorized end of the chain has a singular matrix: no bound
    const auto& rinf = res.records[1];
    CHECK_FALSE(rinf.trace_inverse.has_value());
    CHECK(std::abs(*rinf.det_qfim) < 1e-12);
}

TEST_CASE("oracle-check suite stays within finite-size envelopes") {
    scan::ScanSpec s;
    s.mode = scan::Mode::OracleCheck;
    s.grid.j_min = 2.0;
    s.grid.j_max = 2.0;
    s.grid.j_step = 0.01;
    s.custom_grid = true;
    s.oracle_N = 8;
    const auto res = scan::run_scan(s);
    CHECK(res.failures == 0);
    REQUIRE(!res.oracle_records.empty());
    for (const auto& rec : res.oracle_records) {
        CHECK(rec.N == 8);
        CHECK(std::isfinite(rec.library));
        CHECK(std::isfinite(rec.oracle));
        if (rec.quantity == "m") CHECK(rec.abs_dev < 1e-2);
        if (rec.quantity == "sld_residual") CHECK(rec.library < 1e-10);
    }
    const std::string csv = scan::to_csv(res);
    CHECK(csv.find("J,gamma,D,r,quantity,library,oracle,abs_dev,rel_dev,N,source") !=
          std::string::npos);
    CHECK(csv.find(",oracle\n") != std::string::npos);
}

TEST_CASE("decay mode emits slopes near the critical line") {
    scan::ScanSpec s;
    s.mode = scan::Mode::AsymptoticDecay;
    s.grid.j_min = 0.994;
    s.grid.j_max = 0.996;
    s.grid.j_step = 0.002;
    s.grid.refine = false;
    const auto res = scan::run_scan(s);
    REQUIRE(res.decay_records.size() == 2);
    for (const auto& rec : res.decay_records) {
        CHECK(rec.converged);
        REQUIRE(rec.slope.has_value());
        CHECK(*rec.slope < -0.5);
        CHECK(*rec.slope > -1.5);
    }
    const std::string csv = scan::to_csv(res);
    CHECK(csv.find("J,gamma,D,slope,max_asymmetry,converged") != std::string::npos);
}

TEST_CASE("per-point failures are recorded without aborting the run") {
    // deep in the gapped phase the decay fit rejects underflowing tails;
    // the row must come back converged = false with a reason attached
    scan::ScanSpec s;
    s.mode = scan::Mode::AsymptoticDecay;
    s.grid.j_min = 0.5;
    s.grid.j_max = 0.5;
    s.grid.j_step = 0.01;
    const auto res = scan::run_scan(s);
    REQUIRE(res.decay_records.size() == 1);
    CHECK_FALSE(res.decay_records[0].converged);
    CHECK_FALSE(res.decay_records[0].failure.empty());
    CHECK(res.failures == 1);
    const std::string csv = scan::to_csv(res);
    CHECK(csv.find(",false\n") != std::string::npos);
}
