#pragma once

#include <string>
#include <vector>

#include "noma/metrics.hpp"
#include "noma/receivers.hpp"

namespace noma {

struct SweepConfig {
    Scenario scenario;
    ReceiverConfig receiver;
    std::vector<int> mcs_list = {0};
    std::vector<double> alpha_list = {0.5};
    int frames_per_user = 300;
    int parallelism = 0;  // 0 = all available cores
    int snr_drops = 50;   // drop repetitions for the SNR study
    bool seed_explicit = false;  // config file carried its own seed
};

struct CoverageCell {
    int group = 0;  // beam index, 0-based
    int mcs = 0;
    double alpha = 0.0;
    double coverage_bc = 0.0;
    double coverage_mc = 0.0;
    double joint = 0.0;
    int n_users = 0;
    int n_frames = 0;
};

struct CoverageReport {
    Scenario scenario;
    ReceiverConfig receiver;
    uint64_t seed = 0;
    std::vector<CoverageCell> cells;
    std::vector<std::vector<TrialRecord>> records;  // per (mcs, alpha) grid cell
    std::vector<std::string> deviations;
};

// Full Monte Carlo sweep over the (mcs, alpha) grid. One drop set is shared
// by all grid cells and groups; per-user PER is measured over
// frames_per_user independent fading/noise realizations. Deterministic for a
// fixed seed, independent of parallelism.
CoverageReport run_sweep(const SweepConfig& config);

// Per-user tallies of one grid cell (used by run_sweep and the single-point
// command).
std::vector<TrialRecord> run_cell(const Scenario& sc, const BeamformingMatrix& beams,
                                  const std::vector<UserDrop>& drops,
                                  const ReceiverConfig& receiver, int mcs_index, double alpha,
                                  int frames_per_user, int parallelism);

// SNR study: n_drops independent drop sets of n_users each.
SnrHistogram run_snr_study(const Scenario& sc, int n_drops);

// Substance deviations from the reference system, echoed into every report.
const std::vector<std::string>& standard_deviations_note();

}  // namespace noma
