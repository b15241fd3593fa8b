#include "noma/simulation.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <thread>

#include "noma/rng.hpp"
#include "noma/transmitter.hpp"

namespace noma {

namespace {

// Substream purposes, kept stable so results never depend on call order.
enum RngPurpose : uint64_t { kDropPurpose = 0xD0, kPayload = 1, kChannel = 2, kNoise = 3 };

std::vector<uint8_t> random_bits(int n, std::mt19937_64& rng) {
    std::vector<uint8_t> bits(n);
    std::uniform_int_distribution<int> coin(0, 1);
    for (auto& b : bits) b = static_cast<uint8_t>(coin(rng));
    return bits;
}

// Interfering multicast streams are never decoded; uniform constellation
// symbols are statistically equivalent to coded blocks.
CVec random_symbols(int n, Constellation c, std::mt19937_64& rng) {
    const auto& pts = constellation_points(c);
    std::uniform_int_distribution<size_t> pick(0, pts.size() - 1);
    CVec out(n);
    for (int i = 0; i < n; ++i) out(i) = pts[pick(rng)];
    return out;
}

struct CellContext {
    const Scenario* sc;
    const BeamformingMatrix* beams;
    const ReceiverConfig* receiver;
    StreamFormat fmt;
    double alpha;
    double rho;
};

// One (user, frame) trial; returns (bc_error, mc_error).
std::pair<bool, bool> run_frame(const CellContext& ctx, const UserDrop& user, int frame) {
    const Scenario& sc = *ctx.sc;
    const int n_sym = sc.symbol_budget;
    const double sigma2 = std::pow(10.0, -user.snr_db / 10.0);

    auto payload_rng = substream(sc.seed, user.user_id, frame, kPayload);
    Payload u_bc{random_bits(ctx.fmt.payload_bits, payload_rng)};
    Payload u_mc{random_bits(ctx.fmt.payload_bits, payload_rng)};

    std::vector<CodedBlock> multicast(sc.n_t);
    for (int j = 0; j < sc.n_t; ++j) {
        if (j == user.group_k) {
            multicast[j] = {pad_cyclic(encode(u_mc, ctx.fmt.mcs).symbols, n_sym),
                            ctx.fmt.mcs.index};
        } else {
            multicast[j] = {random_symbols(n_sym, ctx.fmt.mcs.constellation, payload_rng),
                            ctx.fmt.mcs.index};
        }
    }
    CodedBlock bc{pad_cyclic(encode(u_bc, ctx.fmt.mcs).symbols, n_sym), ctx.fmt.mcs.index};

    const CMat tx = transmit(superpose(multicast, bc, ctx.alpha), *ctx.beams);

    auto channel_rng = substream(sc.seed, user.user_id, frame, kChannel);
    const CMat h = draw_channel(sc.n_r, sc.n_t, ctx.rho, channel_rng);
    auto noise_rng = substream(sc.seed, user.user_id, frame, kNoise);
    const CMat y = apply_channel(h, tx, sigma2, noise_rng);

    const DecodedStreams decoded = receive(y, h, *ctx.beams, user.group_k, ctx.alpha, sigma2,
                                           ctx.fmt, ctx.fmt, *ctx.receiver);
    // A block is in error unless the CRC passes and the bits actually match.
    const bool bc_err =
        decoded.broadcast.crc_ok != Payload::Crc::Pass || decoded.broadcast.bits != u_bc.bits;
    const bool mc_err =
        decoded.multicast.crc_ok != Payload::Crc::Pass || decoded.multicast.bits != u_mc.bits;
    return {bc_err, mc_err};
}

int resolve_parallelism(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

std::vector<TrialRecord> run_cell(const Scenario& sc, const BeamformingMatrix& beams,
                                  const std::vector<UserDrop>& drops,
                                  const ReceiverConfig& receiver, int mcs_index, double alpha,
                                  int frames_per_user, int parallelism) {
    receiver.validate();
    const Mcs& mcs = mcs_table().at(mcs_index);
    CellContext ctx{&sc,   &beams,
                    &receiver, StreamFormat{mcs, payload_bits_for(mcs, sc.symbol_budget)},
                    alpha, correlation_rho(sc.correlation)};

    std::vector<TrialRecord> records(drops.size());
    for (size_t u = 0; u < drops.size(); ++u) {
        records[u] = TrialRecord{drops[u].user_id, drops[u].group_k, mcs_index, alpha,
                                 frames_per_user,  0,               0,         drops[u].snr_db};
    }

    // Users are independent work items; per-user accumulation keeps the
    // reduction order-free.
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t u = next.fetch_add(1); u < drops.size(); u = next.fetch_add(1)) {
            int bc = 0, mc = 0;
            for (int f = 0; f < frames_per_user; ++f) {
                auto [bc_err, mc_err] = run_frame(ctx, drops[u], f);
                bc += bc_err;
                mc += mc_err;
            }
            records[u].bc_errors = bc;
            records[u].mc_errors = mc;
        }
    };
    const int n_threads = std::min<int>(resolve_parallelism(parallelism),
                                        static_cast<int>(drops.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

const std::vector<std::string>& standard_deviations_note() {
    static const std::vector<std::string> notes = {
        "codec: convolutional K=7 (133/171/165) + CRC-16 instead of LTE turbo coding",
        "channel: block-flat correlated Rayleigh per frame instead of ITU Pedestrian B",
        "mcs: local 8-entry table; absolute MCS indices are not comparable to LTE",
        "beams: builder-defined B (dft or steered); the reference gives no construction",
    };
    return notes;
}

CoverageReport run_sweep(const SweepConfig& config) {
    const Scenario& sc = config.scenario;
    sc.validate();
    config.receiver.validate();
    if (config.mcs_list.empty() || config.alpha_list.empty()) {
        throw ConfigError("run_sweep: empty mcs or alpha grid");
    }
    if (config.frames_per_user < 100) {
        std::cerr << "warning: frames_per_user=" << config.frames_per_user
                  << " is low for resolving PER at the outage threshold\n";
    }

    const BeamformingMatrix beams = sc.build_beams();
    auto drop_rng = substream(sc.seed, kDropPurpose);
    const std::vector<UserDrop> drops = drop_users(sc, beams, drop_rng);

    CoverageReport report;
    report.scenario = sc;
    report.receiver = config.receiver;
    report.seed = sc.seed;
    report.deviations = standard_deviations_note();

    for (int mcs : config.mcs_list) {
        for (double alpha : config.alpha_list) {
            std::vector<TrialRecord> records =
                run_cell(sc, beams, drops, config.receiver, mcs, alpha, config.frames_per_user,
                         config.parallelism);
            // Group-wise metrics over the shared drop geometry.
            for (int k = 0; k < sc.n_t; ++k) {
                std::vector<TrialRecord> group;
                for (const TrialRecord& r : records) {
                    if (r.group_k == k) group.push_back(r);
                }
                if (group.empty()) continue;
                CoverageCell cell;
                cell.group = k;
                cell.mcs = mcs;
                cell.alpha = alpha;
                cell.coverage_bc =
                    coverage(group, StreamSel::Broadcast, sc.outage_per_threshold);
                cell.coverage_mc =
                    coverage(group, StreamSel::Multicast, sc.outage_per_threshold);
                cell.joint = joint_coverage(group, sc.outage_per_threshold);
                cell.n_users = static_cast<int>(group.size());
                cell.n_frames = config.frames_per_user;
                report.cells.push_back(cell);
            }
            report.records.push_back(std::move(records));
        }
    }
    return report;
}

SnrHistogram run_snr_study(const Scenario& sc, int n_drops) {
    sc.validate();
    if (n_drops < 1) throw ConfigError("run_snr_study: n_drops must be >= 1");
    const BeamformingMatrix beams = sc.build_beams();
    std::vector<UserDrop> all;
    all.reserve(static_cast<size_t>(n_drops) * sc.n_users);
    for (int d = 0; d < n_drops; ++d) {
        auto rng = substream(sc.seed, kDropPurpose, d);
        const std::vector<UserDrop> drops = drop_users(sc, beams, rng);
        all.insert(all.end(), drops.begin(), drops.end());
    }
    return snr_distribution(all);
}

}  // namespace noma
