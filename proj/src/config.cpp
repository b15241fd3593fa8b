#include "noma/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace noma {

namespace {

using nlohmann::json;

Strategy strategy_from_string(const std::string& s) {
    if (s == "sic") return Strategy::Sic;
    if (s == "jd") return Strategy::Jd;
    throw ConfigError("strategy must be sic|jd, got '" + s + "'");
}

Knowledge knowledge_from_string(const std::string& s) {
    if (s == "full_b") return Knowledge::FullB;
    if (s == "beam_only") return Knowledge::BeamOnly;
    throw ConfigError("knowledge must be full_b|beam_only, got '" + s + "'");
}

std::string to_string(Strategy s) { return s == Strategy::Sic ? "sic" : "jd"; }
std::string to_string(Knowledge k) { return k == Knowledge::FullB ? "full_b" : "beam_only"; }

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void check_known_keys(const json& j, const std::set<std::string>& known,
                      const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.contains(it.key())) {
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
        }
    }
}

}  // namespace

SweepConfig parse_config(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    check_known_keys(j, {"scenario", "receiver", "mcs_list", "alpha_list", "frames_per_user",
                         "parallelism", "snr_drops"},
                     origin);
    SweepConfig cfg;
    try {
        if (j.contains("scenario")) {
            const json& s = j["scenario"];
            check_known_keys(
                s,
                {"n_t", "n_r", "cell_radius_m", "bs_height_m", "tx_power_dbm", "carrier_hz",
                 "bandwidth_hz", "noise_density_dbm_hz", "noise_figure_db", "n_users",
                 "correlation", "outage_per_threshold", "seed", "resource_blocks",
                 "symbol_budget", "min_distance_m", "beamformer", "angles_deg"},
                origin + ": scenario");
            Scenario& sc = cfg.scenario;
            read(s, "n_t", sc.n_t);
            read(s, "n_r", sc.n_r);
            read(s, "cell_radius_m", sc.cell_radius_m);
            read(s, "bs_height_m", sc.bs_height_m);
            read(s, "tx_power_dbm", sc.tx_power_dbm);
            read(s, "carrier_hz", sc.carrier_hz);
            read(s, "bandwidth_hz", sc.bandwidth_hz);
            read(s, "noise_density_dbm_hz", sc.noise_density_dbm_hz);
            read(s, "noise_figure_db", sc.noise_figure_db);
            read(s, "n_users", sc.n_users);
            read(s, "outage_per_threshold", sc.outage_per_threshold);
            if (s.contains("seed")) {
                sc.seed = s["seed"].get<uint64_t>();
                cfg.seed_explicit = true;
            }
            read(s, "resource_blocks", sc.resource_blocks);
            read(s, "symbol_budget", sc.symbol_budget);
            read(s, "min_distance_m", sc.min_distance_m);
            read(s, "beamformer", sc.beamformer);
            read(s, "angles_deg", sc.angles_deg);
            if (s.contains("correlation")) {
                sc.correlation = correlation_from_string(s["correlation"].get<std::string>());
            }
        }
        if (j.contains("receiver")) {
            const json& r = j["receiver"];
            check_known_keys(r, {"strategy", "knowledge", "feedback", "preeq"},
                             origin + ": receiver");
            if (r.contains("strategy")) {
                cfg.receiver.strategy = strategy_from_string(r["strategy"].get<std::string>());
            }
            if (r.contains("knowledge")) {
                cfg.receiver.knowledge = knowledge_from_string(r["knowledge"].get<std::string>());
            }
            read(r, "feedback", cfg.receiver.feedback_correction);
            read(r, "preeq", cfg.receiver.pre_equalized);
        }
        read(j, "mcs_list", cfg.mcs_list);
        read(j, "alpha_list", cfg.alpha_list);
        read(j, "frames_per_user", cfg.frames_per_user);
        read(j, "parallelism", cfg.parallelism);
        read(j, "snr_drops", cfg.snr_drops);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    for (int m : cfg.mcs_list) {
        if (m < 0 || m >= static_cast<int>(mcs_table().size())) {
            throw ConfigError(origin + ": mcs index out of range: " + std::to_string(m));
        }
    }
    for (double a : cfg.alpha_list) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw ConfigError(origin + ": alpha out of [0,1]");
        }
    }
    cfg.scenario.validate();
    cfg.receiver.validate();
    return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

namespace {

json scenario_to_json(const Scenario& sc) {
    return json{{"n_t", sc.n_t},
                {"n_r", sc.n_r},
                {"cell_radius_m", sc.cell_radius_m},
                {"bs_height_m", sc.bs_height_m},
                {"tx_power_dbm", sc.tx_power_dbm},
                {"carrier_hz", sc.carrier_hz},
                {"bandwidth_hz", sc.bandwidth_hz},
                {"noise_density_dbm_hz", sc.noise_density_dbm_hz},
                {"noise_figure_db", sc.noise_figure_db},
                {"n_users", sc.n_users},
                {"correlation", to_string(sc.correlation)},
                {"outage_per_threshold", sc.outage_per_threshold},
                {"seed", sc.seed},
                {"resource_blocks", sc.resource_blocks},
                {"symbol_budget", sc.symbol_budget},
                {"min_distance_m", sc.min_distance_m},
                {"beamformer", sc.beamformer},
                {"angles_deg", sc.angles_deg}};
}

}  // namespace

std::string report_to_json(const CoverageReport& report) {
    json cells = json::array();
    for (const CoverageCell& c : report.cells) {
        cells.push_back({{"group", c.group + 1},
                         {"mcs", c.mcs},
                         {"alpha", c.alpha},
                         {"coverage_bc", c.coverage_bc},
                         {"coverage_mc", c.coverage_mc},
                         {"joint_coverage", c.joint},
                         {"n_users", c.n_users},
                         {"n_frames", c.n_frames}});
    }
    json users = json::array();
    for (const auto& cell_records : report.records) {
        json rec = json::array();
        for (const TrialRecord& r : cell_records) {
            rec.push_back({{"user_id", r.user_id},
                           {"group", r.group_k + 1},
                           {"mcs", r.mcs_index},
                           {"alpha", r.alpha},
                           {"frames", r.frames},
                           {"bc_errors", r.bc_errors},
                           {"mc_errors", r.mc_errors},
                           {"snr_db", r.snr_db}});
        }
        users.push_back(std::move(rec));
    }
    json j{{"scenario", scenario_to_json(report.scenario)},
           {"receiver",
            {{"strategy", to_string(report.receiver.strategy)},
             {"knowledge", to_string(report.receiver.knowledge)},
             {"feedback", report.receiver.feedback_correction},
             {"preeq", report.receiver.pre_equalized}}},
           {"seed", report.seed},
           {"deviations", report.deviations},
           {"cells", cells},
           {"records", users}};
    return j.dump(2) + "\n";
}

std::string coverage_to_csv(const CoverageReport& report) {
    std::ostringstream out;
    out << "group,mcs,alpha,coverage_bc,coverage_mc,joint_coverage,n_users,n_frames\n";
    for (const CoverageCell& c : report.cells) {
        out << (c.group + 1) << ',' << c.mcs << ',' << c.alpha << ',' << c.coverage_bc << ','
            << c.coverage_mc << ',' << c.joint << ',' << c.n_users << ',' << c.n_frames << '\n';
    }
    return out.str();
}

std::string snr_to_csv(const SnrHistogram& hist) {
    std::ostringstream out;
    out << "bin_db,pdf,cdf\n";
    for (size_t i = 0; i < hist.bin_db.size(); ++i) {
        out << hist.bin_db[i] << ',' << hist.pdf[i] << ',' << hist.cdf[i] << '\n';
    }
    return out.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace noma
