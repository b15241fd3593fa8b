#include <doctest.h>

#include <algorithm>

#include "noma/config.hpp"
#include "noma/rng.hpp"
#include "noma/simulation.hpp"

using namespace noma;

namespace {

// Small, fast scenario: short blocks, few users, high SNR floor lowered by
// tx power when noise should matter.
Scenario small_scenario(int n_users, double tx_power_dbm) {
    Scenario sc;
    sc.n_users = n_users;
    sc.tx_power_dbm = tx_power_dbm;
    sc.symbol_budget = 60;
    return sc;
}

}  // namespace

TEST_CASE("noiseless single-user sweep reaches full coverage") {
    SweepConfig cfg;
    cfg.scenario = small_scenario(1, 150.0);  // link budget makes noise negligible
    cfg.mcs_list = {0};
    cfg.alpha_list = {0.5};
    cfg.frames_per_user = 100;
    const CoverageReport report = run_sweep(cfg);
    REQUIRE(report.cells.size() == 1);
    CHECK(report.cells[0].coverage_bc == doctest::Approx(100.0));
    CHECK(report.cells[0].coverage_mc == doctest::Approx(100.0));
    CHECK(report.cells[0].joint == doctest::Approx(100.0));
    CHECK(report.cells[0].n_users == 1);
    CHECK_FALSE(report.deviations.empty());
}

TEST_CASE("sweep is deterministic across runs and parallelism") {
    SweepConfig cfg;
    cfg.scenario = small_scenario(6, 105.0);
    cfg.scenario.seed = 33;
    cfg.mcs_list = {0};
    cfg.alpha_list = {0.3, 0.7};
    cfg.frames_per_user = 100;
    cfg.parallelism = 1;
    const std::string serial = report_to_json(run_sweep(cfg));
    cfg.parallelism = 4;
    const std::string parallel = report_to_json(run_sweep(cfg));
    CHECK(serial == parallel);
    const std::string again = report_to_json(run_sweep(cfg));
    CHECK(parallel == again);

    cfg.scenario.seed = 34;
    CHECK(report_to_json(run_sweep(cfg)) != serial);
}

TEST_CASE("report structure invariants") {
    SweepConfig cfg;
    cfg.scenario = small_scenario(12, 103.0);
    cfg.mcs_list = {0, 3};
    cfg.alpha_list = {0.5};
    cfg.frames_per_user = 100;
    const CoverageReport report = run_sweep(cfg);
    REQUIRE(report.records.size() == 2);  // one per grid cell
    for (const CoverageCell& c : report.cells) {
        CHECK(c.joint <= std::min(c.coverage_bc, c.coverage_mc) + 1e-12);
        CHECK(c.coverage_bc >= 0.0);
        CHECK(c.coverage_bc <= 100.0);
        CHECK(c.n_frames == cfg.frames_per_user);
    }
    // group sizes partition the drop set, identically in every grid cell
    for (int cell_idx = 0; cell_idx < 2; ++cell_idx) {
        int users_in_cells = 0;
        for (const CoverageCell& c : report.cells) {
            if (c.mcs == cfg.mcs_list[cell_idx]) users_in_cells += c.n_users;
        }
        CHECK(users_in_cells == cfg.scenario.n_users);
    }
    for (const auto& records : report.records) {
        CHECK(static_cast<int>(records.size()) == cfg.scenario.n_users);
        for (const TrialRecord& r : records) {
            CHECK(r.bc_errors <= r.frames);
            CHECK(r.mc_errors <= r.frames);
        }
    }
}

TEST_CASE("run_sweep validates its grid") {
    SweepConfig cfg;
    cfg.scenario = small_scenario(1, 120.0);
    cfg.mcs_list = {};
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
    cfg.mcs_list = {0};
    cfg.alpha_list = {};
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
}

TEST_CASE("snr study reproduces the scenario's link budget") {
    Scenario sc;  // reference defaults
    const SnrHistogram h = run_snr_study(sc, 5);
    CHECK(h.mean_db > 8.0);
    CHECK(h.mean_db < 12.0);
    CHECK(h.min_db >= 2.0);
    CHECK(h.max_db <= 35.0);
    CHECK(h.cdf.back() == doctest::Approx(1.0));
    CHECK_THROWS_AS(run_snr_study(sc, 0), ConfigError);
}

TEST_CASE("run_cell respects drop geometry") {
    Scenario sc = small_scenario(5, 110.0);
    const auto beams = sc.build_beams();
    auto rng = substream(sc.seed, 0xD0);
    const auto drops = drop_users(sc, beams, rng);
    ReceiverConfig rx;
    const auto records = run_cell(sc, beams, drops, rx, 0, 0.5, 50, 2);
    REQUIRE(records.size() == drops.size());
    for (size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].user_id == drops[i].user_id);
        CHECK(records[i].group_k == drops[i].group_k);
        CHECK(records[i].snr_db == doctest::Approx(drops[i].snr_db));
        CHECK(records[i].frames == 50);
    }
}
