// Batch front end: coverage sweeps, single-point runs, SNR distribution,
// and a fast self-check suite. Outputs are static CSV/JSON files.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>

#include "noma/config.hpp"
#include "noma/testing/filter_models.hpp"
#include "noma/testing/reference_mmse.hpp"

namespace fs = std::filesystem;
using namespace noma;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    uint64_t seed = 0;
    bool seed_set = false;
    int parallelism = 0;
    int frames = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
    auto* c = cmd->add_option("--config", args.config_path, "scenario + sweep config (JSON)");
    if (config_required) c->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "seed override")->each([&](const std::string&) {
        args.seed_set = true;
    });
    cmd->add_option("--parallelism", args.parallelism, "worker cap (default: all cores)");
    cmd->add_option("--frames", args.frames, "frames per user override");
}

SweepConfig load_with_overrides(const CommonArgs& args) {
    SweepConfig cfg = load_config(args.config_path);
    if (args.seed_set) {
        cfg.scenario.seed = args.seed;
    } else if (!cfg.seed_explicit) {
        if (const char* env = std::getenv("NOMA_SIM_SEED")) {
            cfg.scenario.seed = std::strtoull(env, nullptr, 10);
        }
    }
    if (args.parallelism > 0) cfg.parallelism = args.parallelism;
    if (args.frames > 0) cfg.frames_per_user = args.frames;
    return cfg;
}

void print_grid_summary(const CoverageReport& report) {
    std::cout << "group  mcs  alpha  coverage_bc  coverage_mc  joint\n";
    for (const CoverageCell& c : report.cells) {
        std::cout << std::setw(5) << (c.group + 1) << std::setw(5) << c.mcs << std::setw(7)
                  << c.alpha << std::setw(13) << c.coverage_bc << std::setw(13) << c.coverage_mc
                  << std::setw(13) << c.joint << '\n';
    }
}

int cmd_sweep(const CommonArgs& args) {
    const SweepConfig cfg = load_with_overrides(args);
    const CoverageReport report = run_sweep(cfg);
    fs::create_directories(args.out_dir);
    atomic_write(fs::path(args.out_dir) / "report.json", report_to_json(report));
    atomic_write(fs::path(args.out_dir) / "coverage.csv", coverage_to_csv(report));
    print_grid_summary(report);
    return kExitOk;
}

int cmd_simulate(const CommonArgs& args) {
    SweepConfig cfg = load_with_overrides(args);
    // Single operating point: the first grid entry.
    cfg.mcs_list.resize(1);
    cfg.alpha_list.resize(1);
    const CoverageReport report = run_sweep(cfg);
    fs::create_directories(args.out_dir);
    atomic_write(fs::path(args.out_dir) / "report.json", report_to_json(report));
    atomic_write(fs::path(args.out_dir) / "coverage.csv", coverage_to_csv(report));
    std::cout << "mcs=" << cfg.mcs_list[0] << " alpha=" << cfg.alpha_list[0] << " receiver="
              << (cfg.receiver.strategy == Strategy::Sic ? "sic" : "jd") << '\n';
    print_grid_summary(report);
    return kExitOk;
}

int cmd_snr(const CommonArgs& args) {
    const SweepConfig cfg = load_with_overrides(args);
    const SnrHistogram hist = run_snr_study(cfg.scenario, cfg.snr_drops);
    fs::create_directories(args.out_dir);
    atomic_write(fs::path(args.out_dir) / "snr.csv", snr_to_csv(hist));
    std::cout << "SNR mean " << hist.mean_db << " dB, min " << hist.min_db << " dB, max "
              << hist.max_db << " dB over " << cfg.snr_drops << " drops x "
              << cfg.scenario.n_users << " users\n";
    return kExitOk;
}

// --- validate: fast invariant suite ----------------------------------------

using testing::FilterVariant;

bool check_filter_oracle() {
    auto rng = substream(7, 100);
    for (FilterVariant v : testing::all_filter_variants()) {
        for (int i = 0; i < 10; ++i) {
            const testing::FilterInstance inst = testing::random_instance(rng);
            const LinearObservationModel model = testing::model_for(v, inst);
            const auto to_z = [](const CMat& m) {
                testing::zmat z = testing::zzeros(m.rows(), m.cols());
                for (Eigen::Index r = 0; r < m.rows(); ++r) {
                    for (Eigen::Index c = 0; c < m.cols(); ++c) z[r][c] = m(r, c);
                }
                return z;
            };
            const testing::zmat ref =
                testing::reference_mmse_filter(to_z(model.A), to_z(model.Cxx), to_z(model.Czz));
            const CMat w = testing::production_filter(v, inst);
            double num = 0.0, den = 0.0;
            for (Eigen::Index r = 0; r < w.rows(); ++r) {
                for (Eigen::Index c = 0; c < w.cols(); ++c) {
                    num += std::norm(w(r, c) - ref[r][c]);
                    den += std::norm(ref[r][c]);
                }
            }
            if (!(std::sqrt(num / den) < 1e-9)) return false;
        }
    }
    return true;
}

bool check_beam_unitarity() {
    for (int n : {1, 2, 4, 8}) {
        const BeamformingMatrix b = BeamformingMatrix::dft(n);
        if ((b.matrix().adjoint() * b.matrix() - CMat::Identity(n, n)).norm() > 1e-10) {
            return false;
        }
    }
    const BeamformingMatrix s = BeamformingMatrix::steered({-45.0, -15.0, 15.0, 45.0});
    return (s.matrix().adjoint() * s.matrix() - CMat::Identity(4, 4)).norm() < 1e-10;
}

bool check_codec_roundtrip(bool corrupt_mcs_table) {
    auto rng = substream(7, 200);
    for (const Mcs& mcs : mcs_table()) {
        const int bits = payload_bits_for(mcs, 300);
        Payload p;
        std::uniform_int_distribution<int> coin(0, 1);
        p.bits.resize(bits);
        for (auto& b : p.bits) b = static_cast<uint8_t>(coin(rng));
        const CodedBlock block = encode(p, mcs);
        Mcs decode_mcs = mcs;
        if (corrupt_mcs_table) {
            // fault-injection fixture: decode against the wrong code rate
            decode_mcs.rate_num = mcs.rate_num == 1 ? 2 : 1;
            decode_mcs.rate_den = 3;
        }
        try {
            const Payload back = decode(block.symbols, decode_mcs, 1e-4, bits);
            if (back.crc_ok != Payload::Crc::Pass || back.bits != p.bits) return false;
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

bool check_constellation_energy() {
    for (Constellation c :
         {Constellation::Qpsk, Constellation::Qam16, Constellation::Qam64}) {
        double e = 0.0;
        for (cplx p : constellation_points(c)) e += std::norm(p);
        if (std::abs(e / constellation_points(c).size() - 1.0) > 1e-12) return false;
    }
    return true;
}

bool check_filter_collapse() {
    auto rng = substream(7, 300);
    for (int i = 0; i < 20; ++i) {
        const testing::FilterInstance in = testing::random_instance(rng);
        const int n_t = in.B.size();
        const CMat bg = in.B.without_column(in.k) * in.B.without_column(in.k).adjoint();
        const CVec bk = in.B.column(in.k);
        // multicast full-B: expanded vs collapsed inner matrix
        const CMat expanded =
            (in.sigma2 * CMat::Identity(n_t, n_t) +
             (in.alpha / n_t) * (in.H * (bg + bk * bk.adjoint()) * in.H.adjoint()));
        const CMat collapsed = in.sigma2 * CMat::Identity(n_t, n_t) +
                               (in.alpha / n_t) * (in.H * in.H.adjoint());
        if ((expanded - collapsed).norm() > 1e-10 * collapsed.norm()) return false;
        // beam-only broadcast: alpha + (1-alpha) merge
        const CVec hb = in.H * bk;
        const CMat f1 = in.sigma2 * CMat::Identity(n_t, n_t) +
                        in.alpha * (hb * hb.adjoint()) + (1 - in.alpha) * (hb * hb.adjoint());
        const CMat f2 = in.sigma2 * CMat::Identity(n_t, n_t) + hb * hb.adjoint();
        if ((f1 - f2).norm() > 1e-10 * f2.norm()) return false;
    }
    return true;
}

bool check_preeq_limit() {
    auto rng = substream(7, 400);
    const CMat h = testing::random_complex(4, 4, rng) + 2.0 * CMat::Identity(4, 4);
    const CVec y = testing::random_complex(4, 1, rng);
    const PreEqualizedSignal pe = pre_equalize(h, 1e-10, y);
    const CVec direct = h.partialPivLu().solve(y);
    return (pe.y_bar - direct).norm() / direct.norm() < 1e-4;
}

bool check_metric_bound() {
    std::vector<TrialRecord> recs;
    for (int u = 0; u < 10; ++u) {
        TrialRecord r;
        r.user_id = u;
        r.frames = 100;
        r.bc_errors = (u == 0) ? 5 : 0;
        r.mc_errors = (u == 1) ? 5 : 0;
        recs.push_back(r);
    }
    const double cb = coverage(recs, StreamSel::Broadcast, 0.01);
    const double cm = coverage(recs, StreamSel::Multicast, 0.01);
    const double j = joint_coverage(recs, 0.01);
    return cb == 90.0 && cm == 90.0 && j == 80.0 && j <= std::min(cb, cm);
}

int cmd_validate(const std::string& inject_fault) {
    struct Property {
        const char* name;
        bool pass;
    };
    const bool corrupt = inject_fault == "mcs-table";
    const std::vector<Property> props = {
        {"mmse-filter-oracle", check_filter_oracle()},
        {"beam-unitarity", check_beam_unitarity()},
        {"codec-roundtrip", check_codec_roundtrip(corrupt)},
        {"constellation-energy", check_constellation_energy()},
        {"mmse-collapse", check_filter_collapse()},
        {"preeq-zero-noise-limit", check_preeq_limit()},
        {"metric-joint-bound", check_metric_bound()},
    };
    bool all = true;
    for (const Property& p : props) {
        std::cout << (p.pass ? "PASS " : "FAIL ") << p.name << '\n';
        all = all && p.pass;
    }
    return all ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NOMA joint broadcast/multicast link-level simulator"};
    app.require_subcommand(1);

    CommonArgs sweep_args, sim_args, snr_args;
    std::string inject_fault;

    auto* sweep = app.add_subcommand("sweep", "coverage sweep over the (mcs, alpha) grid");
    add_common(sweep, sweep_args);
    auto* simulate = app.add_subcommand("simulate", "single-point simulation");
    add_common(simulate, sim_args);
    auto* snr = app.add_subcommand("snr", "SNR distribution of the scenario's user drops");
    add_common(snr, snr_args);
    auto* validate = app.add_subcommand("validate", "run the fast invariant suite");
    validate->add_option("--inject-fault", inject_fault, "test fixture fault")
        ->check(CLI::IsMember({"mcs-table"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (simulate->parsed()) return cmd_simulate(sim_args);
        if (snr->parsed()) return cmd_snr(snr_args);
        if (validate->parsed()) return cmd_validate(inject_fault);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
