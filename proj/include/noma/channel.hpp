#pragma once

#include <random>
#include <string>
#include <vector>

#include "noma/beamforming.hpp"
#include "noma/linalg.hpp"

namespace noma {

enum class AntennaCorrelation { Low, Medium, High };

double correlation_rho(AntennaCorrelation c);
AntennaCorrelation correlation_from_string(const std::string& s);
std::string to_string(AntennaCorrelation c);

// Scenario parameters; defaults reproduce the common radio parameter set
// (macro urban cell, 4x4, 5 MHz, 50 dBm, 100 users).
struct Scenario {
    int n_t = 4;
    int n_r = 4;
    double cell_radius_m = 500.0;
    double bs_height_m = 15.0;
    double tx_power_dbm = 50.0;
    double carrier_hz = 1.9e9;
    double bandwidth_hz = 5e6;
    double noise_density_dbm_hz = -174.0;
    double noise_figure_db = 7.0;
    int n_users = 100;
    AntennaCorrelation correlation = AntennaCorrelation::Low;
    double outage_per_threshold = 0.01;
    uint64_t seed = 1;

    int resource_blocks = 25;      // 12 subcarriers each
    int symbol_budget = 300;       // modulated symbols per stream block
    double min_distance_m = 70.0;  // keeps the link budget inside the model's validity range

    std::string beamformer = "dft";  // "dft" | "steered"
    std::vector<double> angles_deg;  // used by the steered builder

    int subcarriers() const { return 12 * resource_blocks; }
    BeamformingMatrix build_beams() const;
    void validate() const;
};

struct UserDrop {
    int user_id = 0;
    double distance_m = 0.0;
    double azimuth_deg = 0.0;
    int group_k = 0;  // beam index, 0-based
    double path_loss_db = 0.0;
    double snr_db = 0.0;
};

// TS 36.942 macro cell urban area: 128.1 + 37.6 log10(d_km), distance
// clamped below 10 m.
double path_loss_db(double distance_m);

// Thermal noise over the full bandwidth plus receiver noise figure (dBm).
double noise_power_dbm(const Scenario& sc);

// Per-stream transmit power at one resource element: the total power is
// divided across the occupied subcarriers and the n_t beams.
double effective_tx_power_dbm(const Scenario& sc);

double snr_db_at(const Scenario& sc, double distance_m);

// Uniform-in-area user positions; group = nearest beam pointing angle.
std::vector<UserDrop> drop_users(const Scenario& sc, const BeamformingMatrix& beams,
                                 std::mt19937_64& rng);

// Kronecker-correlated Rayleigh channel H = Rr^{1/2} G Rt^{1/2} with
// exponential correlation rho^{|i-j|} and unit average entry power.
CMat draw_channel(int n_r, int n_t, double rho, std::mt19937_64& rng);

// y[n] = H s[n] + w[n], w circular complex Gaussian with per-entry
// variance sigma2.
CMat apply_channel(const CMat& H, const CMat& tx, double sigma2, std::mt19937_64& rng);

}  // namespace noma
