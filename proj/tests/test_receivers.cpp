#include <doctest.h>

#include <random>

#include "noma/channel.hpp"
#include "noma/receivers.hpp"
#include "noma/rng.hpp"
#include "noma/testing/filter_models.hpp"
#include "noma/testing/reference_mmse.hpp"
#include "noma/transmitter.hpp"

using namespace noma;

namespace {

testing::zmat to_z(const CMat& m) {
    testing::zmat z = testing::zzeros(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) z[r][c] = m(r, c);
    }
    return z;
}

double rel_err(const CMat& got, const testing::zmat& want) {
    double num = 0.0, den = 0.0;
    for (Eigen::Index r = 0; r < got.rows(); ++r) {
        for (Eigen::Index c = 0; c < got.cols(); ++c) {
            num += std::norm(got(r, c) - want[r][c]);
            den += std::norm(want[r][c]);
        }
    }
    return std::sqrt(num / den);
}

std::vector<uint8_t> random_bits(int n, std::mt19937_64& rng) {
    std::vector<uint8_t> bits(n);
    for (auto& b : bits) b = static_cast<uint8_t>(rng() & 1);
    return bits;
}

struct TestFrame {
    CMat tx;                     // n_t x n transmitted matrix
    Payload bc;
    std::vector<Payload> mc;     // one per beam
    StreamFormat fmt;
};

TestFrame make_frame(const BeamformingMatrix& B, double alpha, std::mt19937_64& rng,
                     int mcs_index = 0, int budget = 300) {
    TestFrame f;
    f.fmt.mcs = mcs_table()[mcs_index];
    f.fmt.payload_bits = payload_bits_for(f.fmt.mcs, budget);
    f.bc.bits = random_bits(f.fmt.payload_bits, rng);
    const CodedBlock bc_blk = encode(f.bc, f.fmt.mcs);
    std::vector<CodedBlock> mc_blks;
    for (int k = 0; k < B.size(); ++k) {
        Payload p;
        p.bits = random_bits(f.fmt.payload_bits, rng);
        f.mc.push_back(p);
        mc_blks.push_back(encode(p, f.fmt.mcs));
    }
    f.tx = transmit(superpose(mc_blks, bc_blk, alpha), B);
    return f;
}

}  // namespace

TEST_CASE("receiver config validation") {
    ReceiverConfig c;
    c.strategy = Strategy::Jd;
    c.feedback_correction = true;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.feedback_correction = false;
    c.knowledge = Knowledge::BeamOnly;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.knowledge = Knowledge::FullB;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("broadcast filter degenerate scalar case") {
    const auto B = BeamformingMatrix::dft(1);
    const CMat H = CMat::Ones(1, 1);
    const CMat w = broadcast_filter(H, B, 0, 0.0, 0.0, Knowledge::FullB, false);
    CHECK(std::abs(w(0, 0) - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("beam-only broadcast filter hand evaluation") {
    const auto B = BeamformingMatrix::from_unitary(CMat::Identity(4, 4));
    const CMat H = CMat::Identity(4, 4);
    const CMat w = broadcast_filter(H, B, 0, 0.5, 1.0, Knowledge::BeamOnly, false);
    // sqrt(0.5) e1^H (I + e1 e1^H)^{-1} = (sqrt(0.5)/2) e1^H
    CHECK(std::abs(w(0, 0) - cplx(std::sqrt(0.5) / 2.0, 0.0)) < 1e-12);
    for (int j = 1; j < 4; ++j) CHECK(std::abs(w(0, j)) < 1e-12);
}

TEST_CASE("multicast filter single-stream collapse at alpha=1") {
    auto rng = substream(61, 1);
    const auto B = BeamformingMatrix::dft(1);
    const CMat H = testing::random_complex(3, 1, rng);
    const CMat w = multicast_filter(H, B, 0, 1.0, 0.4, Knowledge::FullB, false);
    const CMat inner = 0.4 * CMat::Identity(3, 3) + H * H.adjoint();
    const CMat want = (inner.partialPivLu().solve(CMat(H))).adjoint();
    CHECK((w - want).norm() / want.norm() < 1e-10);
}

TEST_CASE("every filter variant matches the generic-MMSE oracle") {
    auto rng = substream(61, 2);
    for (testing::FilterVariant v : testing::all_filter_variants()) {
        for (int i = 0; i < 100; ++i) {
            const auto inst = testing::random_instance(rng);
            const auto model = testing::model_for(v, inst);
            const CMat got = testing::production_filter(v, inst);
            const auto want = testing::reference_mmse_filter(to_z(model.A), to_z(model.Cxx),
                                                             to_z(model.Czz));
            INFO("variant ", testing::name(v), " instance ", i);
            CHECK(rel_err(got, want) < 1e-9);
        }
    }
}

TEST_CASE("expanded and collapsed multicast inner matrices agree on unitary B") {
    auto rng = substream(61, 3);
    for (int i = 0; i < 50; ++i) {
        const auto inst = testing::random_instance(rng);
        const CVec bk = inst.B.column(inst.k);
        const CMat br = inst.B.without_column(inst.k);
        const double c = inst.alpha / inst.B.size();
        const CMat expanded =
            c * (inst.H * (br * br.adjoint() + bk * bk.adjoint()) * inst.H.adjoint());
        const CMat collapsed = c * (inst.H * inst.H.adjoint());
        CHECK((expanded - collapsed).norm() / collapsed.norm() < 1e-10);
    }
}

TEST_CASE("joint filter endpoints") {
    auto rng = substream(61, 4);
    auto inst = testing::random_instance(rng);

    SUBCASE("alpha=1 zeroes the broadcast row") {
        inst.alpha = 1.0;
        const CMat w = joint_filter(inst.H, inst.B, inst.k, 1.0, inst.sigma2, false);
        CHECK(w.row(1).norm() < 1e-12);
        // first row solves the multicast-only model with the same (no 1/n_t)
        // convention the joint filter uses
        const CVec a = inst.H * inst.B.column(inst.k);
        const CMat bg = inst.B.without_column(inst.k) * inst.B.without_column(inst.k).adjoint();
        const CMat inner = inst.sigma2 * CMat::Identity(4, 4) +
                           inst.H * bg * inst.H.adjoint() + a * a.adjoint();
        const CMat want = inner.partialPivLu().solve(CMat(a)).adjoint();
        CHECK((w.row(0) - want).norm() / want.norm() < 1e-9);
    }

    SUBCASE("n_t=1 has no inter-beam term") {
        auto rng1 = substream(61, 5);
        const CMat h = testing::random_complex(3, 1, rng1);
        const auto b1 = BeamformingMatrix::dft(1);
        const double alpha = 0.3, s2 = 0.2;
        const CMat w = joint_filter(h, b1, 0, alpha, s2, false);
        CMat a(3, 2);
        a.col(0) = std::sqrt(alpha) * h;
        a.col(1) = std::sqrt(1.0 - alpha) * h;
        const CMat inner = s2 * CMat::Identity(3, 3) + a * a.adjoint();
        const CMat want = inner.partialPivLu().solve(a).adjoint();
        CHECK((w - want).norm() / want.norm() < 1e-9);
    }
}

TEST_CASE("noiseless end-to-end SIC and JD recover both payloads") {
    auto rng = substream(61, 6);
    const auto B = BeamformingMatrix::dft(4);
    const double alpha = 0.5, sigma2 = 1e-12;
    const CMat H = CMat::Identity(4, 4);
    const TestFrame f = make_frame(B, alpha, rng);
    const CMat y = apply_channel(H, f.tx, sigma2, rng);
    const int k = 2;

    for (bool preeq : {false, true}) {
        for (bool feedback : {false, true}) {
            ReceiverConfig cfg;
            cfg.strategy = Strategy::Sic;
            cfg.pre_equalized = preeq;
            cfg.feedback_correction = feedback;
            const DecodedStreams out =
                sic_receive(y, H, B, k, alpha, sigma2, f.fmt, f.fmt, cfg);
            CHECK(out.broadcast.crc_ok == Payload::Crc::Pass);
            CHECK(out.broadcast.bits == f.bc.bits);
            CHECK(out.multicast.crc_ok == Payload::Crc::Pass);
            CHECK(out.multicast.bits == f.mc[k].bits);
        }
        ReceiverConfig jd;
        jd.strategy = Strategy::Jd;
        jd.pre_equalized = preeq;
        const DecodedStreams out = jd_receive(y, H, B, k, alpha, sigma2, f.fmt, f.fmt, jd);
        CHECK(out.broadcast.crc_ok == Payload::Crc::Pass);
        CHECK(out.broadcast.bits == f.bc.bits);
        CHECK(out.multicast.crc_ok == Payload::Crc::Pass);
        CHECK(out.multicast.bits == f.mc[k].bits);
    }
}

TEST_CASE("alpha=0 kills the multicast stream but not the broadcast") {
    auto rng = substream(61, 7);
    const auto B = BeamformingMatrix::dft(4);
    const CMat H = CMat::Identity(4, 4);
    const TestFrame f = make_frame(B, 0.0, rng);
    const CMat y = apply_channel(H, f.tx, 1e-10, rng);
    ReceiverConfig cfg;
    const DecodedStreams out = sic_receive(y, H, B, 1, 0.0, 1e-10, f.fmt, f.fmt, cfg);
    CHECK(out.broadcast.crc_ok == Payload::Crc::Pass);
    CHECK(out.broadcast.bits == f.bc.bits);
    CHECK(out.multicast.crc_ok == Payload::Crc::Fail);
}

TEST_CASE("alpha=1 SIC multicast path equals the plain multicast receiver") {
    auto rng = substream(61, 8);
    const auto B = BeamformingMatrix::dft(4);
    const CMat H = draw_channel(4, 4, 0.1, rng);
    const TestFrame f = make_frame(B, 1.0, rng);
    const double sigma2 = 0.05;
    const CMat y = apply_channel(H, f.tx, sigma2, rng);
    ReceiverConfig cfg;
    const DecodedStreams out = sic_receive(y, H, B, 0, 1.0, sigma2, f.fmt, f.fmt, cfg);
    const CMat w_mc = multicast_filter(H, B, 0, 1.0, sigma2, Knowledge::FullB, false);
    const CVec plain = (w_mc * y).transpose();
    CHECK((out.t_mc_raw - plain).norm() / plain.norm() < 1e-9);
}

TEST_CASE("JD degenerate coincidence with the broadcast filter at n_t=1, alpha=0") {
    auto rng = substream(61, 9);
    const auto B = BeamformingMatrix::dft(1);
    const CMat H = testing::random_complex(2, 1, rng);
    const double sigma2 = 0.3;
    const CMat y = testing::random_complex(2, 40, rng);
    const CMat w_j = joint_filter(H, B, 0, 0.0, sigma2, false);
    const CMat w_bc = broadcast_filter(H, B, 0, 0.0, sigma2, Knowledge::FullB, false);
    const CVec est_j = (w_j.row(1) * y).transpose();
    const CVec est_bc = (w_bc * y).transpose();
    CHECK((est_j - est_bc).norm() / est_bc.norm() < 1e-6);
}

TEST_CASE("beam-only and full-B broadcast estimates agree on a beam-matched channel") {
    auto rng = substream(61, 10);
    const auto B = BeamformingMatrix::dft(4);
    const int k = 1;
    const CVec g = testing::random_complex(4, 1, rng);
    const CMat H = g * B.column(k).adjoint();  // rank-1, matched to b_k
    const double alpha = 0.6, sigma2 = 0.2;
    const CMat y = testing::random_complex(4, 64, rng);
    const CVec a_bc = std::sqrt((1.0 - alpha) / 4.0) * (H * B.broadcast_beam());

    const CMat w_full = broadcast_filter(H, B, k, alpha, sigma2, Knowledge::FullB, false);
    const CMat w_beam = broadcast_filter(H, B, k, alpha, sigma2, Knowledge::BeamOnly, false);
    const CVec est_full = (w_full * y).transpose() / (w_full * a_bc)(0, 0);
    const CVec est_beam = (w_beam * y).transpose() / (w_beam * a_bc)(0, 0);
    CHECK((est_full - est_beam).norm() / est_full.norm() < 1e-6);
}

TEST_CASE("wrong broadcast re-encoding raises the multicast symbol MSE") {
    auto rng = substream(61, 11);
    const auto B = BeamformingMatrix::dft(4);
    const int k = 0;
    const double alpha = 0.5, sigma2 = 0.1;
    double mse_good = 0.0, mse_bad = 0.0;
    for (int frame = 0; frame < 100; ++frame) {
        const CMat H = draw_channel(4, 4, 0.1, rng);
        TestFrame f = make_frame(B, alpha, rng);
        const CMat y = apply_channel(H, f.tx, sigma2, rng);

        const CVec a_sub = std::sqrt((1.0 - alpha) / 4.0) * (H * B.broadcast_beam());
        const CMat w_mc = multicast_filter(H, B, k, alpha, sigma2, Knowledge::FullB, false);
        const CVec a_mc = std::sqrt(alpha / 4.0) * (H * B.column(k));
        const cplx g_mc = (w_mc * a_mc)(0, 0);
        const CVec t_true = encode(f.mc[k], f.fmt.mcs).symbols;

        const CVec t_bar_good = encode(f.bc, f.fmt.mcs).symbols;
        Payload flipped = f.bc;
        for (auto& b : flipped.bits) b ^= 1;
        const CVec t_bar_bad = encode(flipped, f.fmt.mcs).symbols;

        const CVec est_good =
            (w_mc * (y - a_sub * t_bar_good.transpose())).transpose() / g_mc;
        const CVec est_bad = (w_mc * (y - a_sub * t_bar_bad.transpose())).transpose() / g_mc;
        mse_good += (est_good - t_true).squaredNorm();
        mse_bad += (est_bad - t_true).squaredNorm();
    }
    CHECK(mse_bad > mse_good);
}

TEST_CASE("feedback correction does not hurt the multicast PER") {
    auto rng = substream(61, 12);
    const auto B = BeamformingMatrix::dft(4);
    const int k = 0;
    const double alpha = 0.5;
    const double sigma2 = std::pow(10.0, -1.0);  // 10 dB
    int err_plain = 0, err_fb = 0;
    const int frames = 200;
    ReceiverConfig plain;
    ReceiverConfig fb;
    fb.feedback_correction = true;
    for (int frame = 0; frame < frames; ++frame) {
        const CMat H = draw_channel(4, 4, 0.1, rng);
        const TestFrame f = make_frame(B, alpha, rng);
        const CMat y = apply_channel(H, f.tx, sigma2, rng);
        const auto a = sic_receive(y, H, B, k, alpha, sigma2, f.fmt, f.fmt, plain);
        const auto b = sic_receive(y, H, B, k, alpha, sigma2, f.fmt, f.fmt, fb);
        if (a.multicast.crc_ok != Payload::Crc::Pass || a.multicast.bits != f.mc[k].bits) {
            ++err_plain;
        }
        if (b.multicast.crc_ok != Payload::Crc::Pass || b.multicast.bits != f.mc[k].bits) {
            ++err_fb;
        }
    }
    // paired comparison with 2-standard-error slack
    const double p = static_cast<double>(err_plain) / frames;
    const double se = std::sqrt(std::max(p * (1.0 - p), 1.0 / frames) / frames);
    CHECK(static_cast<double>(err_fb) / frames <= p + 2.0 * se);
}

TEST_CASE("receivers are deterministic on identical inputs") {
    auto rng = substream(61, 13);
    const auto B = BeamformingMatrix::dft(4);
    const CMat H = draw_channel(4, 4, 0.1, rng);
    const TestFrame f = make_frame(B, 0.5, rng);
    const CMat y = apply_channel(H, f.tx, 0.2, rng);
    for (Strategy s : {Strategy::Sic, Strategy::Jd}) {
        ReceiverConfig cfg;
        cfg.strategy = s;
        const auto a = receive(y, H, B, 1, 0.5, 0.2, f.fmt, f.fmt, cfg);
        const auto b = receive(y, H, B, 1, 0.5, 0.2, f.fmt, f.fmt, cfg);
        CHECK(a.broadcast.bits == b.broadcast.bits);
        CHECK(a.multicast.bits == b.multicast.bits);
        CHECK((a.t_bc_raw - b.t_bc_raw).norm() == doctest::Approx(0.0));
        CHECK((a.t_mc_raw - b.t_mc_raw).norm() == doctest::Approx(0.0));
    }
}
