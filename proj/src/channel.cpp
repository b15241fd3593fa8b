#include "noma/channel.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>

namespace noma {

namespace {
constexpr double kPi = std::numbers::pi;
}

double correlation_rho(AntennaCorrelation c) {
    switch (c) {
        case AntennaCorrelation::Low: return 0.1;
        case AntennaCorrelation::Medium: return 0.5;
        case AntennaCorrelation::High: return 0.9;
    }
    throw Error("unknown correlation level");
}

AntennaCorrelation correlation_from_string(const std::string& s) {
    if (s == "low") return AntennaCorrelation::Low;
    if (s == "medium") return AntennaCorrelation::Medium;
    if (s == "high") return AntennaCorrelation::High;
    throw ConfigError("correlation must be low|medium|high, got '" + s + "'");
}

std::string to_string(AntennaCorrelation c) {
    switch (c) {
        case AntennaCorrelation::Low: return "low";
        case AntennaCorrelation::Medium: return "medium";
        case AntennaCorrelation::High: return "high";
    }
    return "?";
}

BeamformingMatrix Scenario::build_beams() const {
    if (beamformer == "dft") return BeamformingMatrix::dft(n_t);
    if (beamformer == "steered") {
        if (static_cast<int>(angles_deg.size()) != n_t) {
            throw ConfigError("steered beamformer needs exactly n_t angles_deg");
        }
        return BeamformingMatrix::steered(angles_deg);
    }
    throw ConfigError("beamformer must be dft|steered, got '" + beamformer + "'");
}

void Scenario::validate() const {
    if (n_t < 1 || n_r < 1) throw ConfigError("n_t and n_r must be >= 1");
    if (cell_radius_m <= 0) throw ConfigError("cell_radius_m must be positive");
    if (bandwidth_hz <= 0) throw ConfigError("bandwidth_hz must be positive");
    if (n_users < 1) throw ConfigError("n_users must be >= 1");
    if (!(outage_per_threshold > 0 && outage_per_threshold < 1)) {
        throw ConfigError("outage_per_threshold must be in (0,1)");
    }
    if (min_distance_m <= 0 || min_distance_m >= cell_radius_m) {
        throw ConfigError("min_distance_m must be in (0, cell_radius_m)");
    }
    if (symbol_budget < 32) throw ConfigError("symbol_budget must be >= 32");
    build_beams();
}

double path_loss_db(double distance_m) {
    const double d_km = std::max(distance_m, 10.0) / 1000.0;
    return 128.1 + 37.6 * std::log10(d_km);
}

double noise_power_dbm(const Scenario& sc) {
    return sc.noise_density_dbm_hz + 10.0 * std::log10(sc.bandwidth_hz) + sc.noise_figure_db;
}

double effective_tx_power_dbm(const Scenario& sc) {
    return sc.tx_power_dbm - 10.0 * std::log10(static_cast<double>(sc.subcarriers())) -
           10.0 * std::log10(static_cast<double>(sc.n_t));
}

double snr_db_at(const Scenario& sc, double distance_m) {
    return effective_tx_power_dbm(sc) - path_loss_db(distance_m) - noise_power_dbm(sc);
}

std::vector<UserDrop> drop_users(const Scenario& sc, const BeamformingMatrix& beams,
                                 std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const std::vector<double>& angles = beams.beam_angles_deg();
    std::vector<UserDrop> drops;
    drops.reserve(sc.n_users);
    const double r0sq = sc.min_distance_m * sc.min_distance_m;
    const double r1sq = sc.cell_radius_m * sc.cell_radius_m;
    for (int u = 0; u < sc.n_users; ++u) {
        UserDrop d;
        d.user_id = u;
        d.distance_m = std::sqrt(r0sq + (r1sq - r0sq) * uni(rng));
        d.azimuth_deg = -180.0 + 360.0 * uni(rng);
        int best = 0;
        double best_diff = std::abs(d.azimuth_deg - angles[0]);
        for (int k = 1; k < static_cast<int>(angles.size()); ++k) {
            const double diff = std::abs(d.azimuth_deg - angles[k]);
            if (diff < best_diff) {
                best_diff = diff;
                best = k;
            }
        }
        d.group_k = best;
        d.path_loss_db = path_loss_db(d.distance_m);
        d.snr_db = snr_db_at(sc, d.distance_m);
        drops.push_back(d);
    }
    return drops;
}

namespace {

CMat exp_correlation_sqrt(int n, double rho) {
    if (rho == 0.0 || n == 1) return CMat::Identity(n, n);
    CMat r(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) r(i, j) = std::pow(rho, std::abs(i - j));
    }
    Eigen::LLT<CMat> llt(r);
    if (llt.info() != Eigen::Success) throw Error("correlation matrix not PSD");
    return llt.matrixL();
}

}  // namespace

CMat draw_channel(int n_r, int n_t, double rho, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    CMat g(n_r, n_t);
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_t; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
    }
    if (rho == 0.0) return g;
    static thread_local struct {
        int n_r = -1, n_t = -1;
        double rho = -1;
        CMat lr, lt;
    } cache;
    if (cache.n_r != n_r || cache.n_t != n_t || cache.rho != rho) {
        cache = {n_r, n_t, rho, exp_correlation_sqrt(n_r, rho),
                 exp_correlation_sqrt(n_t, rho).adjoint()};
    }
    return cache.lr * g * cache.lt;
}

CMat apply_channel(const CMat& H, const CMat& tx, double sigma2, std::mt19937_64& rng) {
    if (H.cols() != tx.rows()) throw Error("apply_channel: dimension mismatch");
    CMat y = H * tx;
    if (sigma2 > 0.0) {
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * sigma2));
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            for (Eigen::Index i = 0; i < y.rows(); ++i) {
                y(i, j) += cplx(gauss(rng), gauss(rng));
            }
        }
    }
    return y;
}

}  // namespace noma
