#include "noma/codec.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

namespace noma {

namespace {

// Mother code generators, octal 133/171/165, constraint length 7.
// Windows hold the last 7 input bits, newest in the LSB.
constexpr std::array<uint32_t, 3> kGenerators = {0133, 0171, 0165};
constexpr int kStates = 64;

// Per-step puncturing patterns over the 3 mother outputs (g0,g1,g2).
// Period 1 for 1/2, 2 for 2/3, 3 for 3/4.
struct PunctureScheme {
    int period;
    std::array<std::array<uint8_t, 3>, 3> keep;
};

const PunctureScheme& scheme_for(const Mcs& mcs) {
    static const PunctureScheme r13{1, {{{1, 1, 1}, {}, {}}}};
    static const PunctureScheme r12{1, {{{1, 1, 0}, {}, {}}}};
    static const PunctureScheme r23{2, {{{1, 1, 0}, {1, 0, 0}, {}}}};
    static const PunctureScheme r34{3, {{{1, 1, 0}, {1, 0, 0}, {0, 1, 0}}}};
    if (mcs.rate_num == 1 && mcs.rate_den == 3) return r13;
    if (mcs.rate_num == 1 && mcs.rate_den == 2) return r12;
    if (mcs.rate_num == 2 && mcs.rate_den == 3) return r23;
    if (mcs.rate_num == 3 && mcs.rate_den == 4) return r34;
    throw Error("unsupported code rate");
}

int kept_bits(const PunctureScheme& s, int n_steps) {
    int per_period = 0;
    for (int i = 0; i < s.period; ++i) {
        per_period += s.keep[i][0] + s.keep[i][1] + s.keep[i][2];
    }
    int n = (n_steps / s.period) * per_period;
    for (int i = 0; i < n_steps % s.period; ++i) {
        n += s.keep[i][0] + s.keep[i][1] + s.keep[i][2];
    }
    return n;
}

// Output bits (3-bit mask) for each 7-bit encoder window.
const std::array<uint8_t, 128>& output_table() {
    static const std::array<uint8_t, 128> table = [] {
        std::array<uint8_t, 128> t{};
        for (uint32_t w = 0; w < 128; ++w) {
            uint8_t mask = 0;
            for (int i = 0; i < 3; ++i) {
                mask |= static_cast<uint8_t>(std::popcount(w & kGenerators[i]) & 1) << i;
            }
            t[w] = mask;
        }
        return t;
    }();
    return table;
}

}  // namespace

int bits_per_symbol(Constellation c) {
    switch (c) {
        case Constellation::Qpsk: return 2;
        case Constellation::Qam16: return 4;
        case Constellation::Qam64: return 6;
    }
    throw Error("unknown constellation");
}

const std::vector<Mcs>& mcs_table() {
    static const std::vector<Mcs> table = {
        {0, Constellation::Qpsk, 1, 3},  {1, Constellation::Qpsk, 1, 2},
        {2, Constellation::Qpsk, 2, 3},  {3, Constellation::Qam16, 1, 2},
        {4, Constellation::Qam16, 2, 3}, {5, Constellation::Qam16, 3, 4},
        {6, Constellation::Qam64, 2, 3}, {7, Constellation::Qam64, 3, 4},
    };
    return table;
}

int coded_bits_for(const Mcs& mcs, int payload_bits) {
    return kept_bits(scheme_for(mcs), payload_bits + kCrcBits + kTailBits);
}

int symbol_count_for(const Mcs& mcs, int payload_bits) {
    const int m = bits_per_symbol(mcs.constellation);
    return (coded_bits_for(mcs, payload_bits) + m - 1) / m;
}

int payload_bits_for(const Mcs& mcs, int symbol_budget) {
    const int m = bits_per_symbol(mcs.constellation);
    // Start from the rate-based estimate and settle by direct evaluation.
    int payload = static_cast<int>(symbol_budget * m * mcs.rate()) - kCrcBits - kTailBits;
    payload = std::max(payload, 1);
    while (payload > 1 && symbol_count_for(mcs, payload) > symbol_budget) --payload;
    while (symbol_count_for(mcs, payload + 1) <= symbol_budget) ++payload;
    return payload;
}

std::vector<uint8_t> crc16(const std::vector<uint8_t>& bits) {
    uint16_t reg = 0xFFFF;
    for (uint8_t b : bits) {
        const uint16_t fb = ((reg >> 15) ^ b) & 1;
        reg = static_cast<uint16_t>(reg << 1);
        if (fb) reg ^= 0x1021;
    }
    std::vector<uint8_t> crc(kCrcBits);
    for (int i = 0; i < kCrcBits; ++i) {
        crc[i] = (reg >> (15 - i)) & 1;  // MSB first
    }
    return crc;
}

std::vector<uint8_t> conv_encode(const std::vector<uint8_t>& bits) {
    std::vector<uint8_t> out;
    out.reserve(3 * (bits.size() + kTailBits));
    uint32_t sr = 0;
    auto step = [&](uint8_t b) {
        sr = ((sr << 1) | b) & 0x7F;
        const uint8_t mask = output_table()[sr];
        out.push_back(mask & 1);
        out.push_back((mask >> 1) & 1);
        out.push_back((mask >> 2) & 1);
    };
    for (uint8_t b : bits) step(b);
    for (int i = 0; i < kTailBits; ++i) step(0);
    return out;
}

std::vector<uint8_t> puncture(const std::vector<uint8_t>& coded, const Mcs& mcs) {
    const PunctureScheme& s = scheme_for(mcs);
    std::vector<uint8_t> out;
    out.reserve(coded.size());
    const int n_steps = static_cast<int>(coded.size()) / 3;
    for (int t = 0; t < n_steps; ++t) {
        const auto& keep = s.keep[t % s.period];
        for (int i = 0; i < 3; ++i) {
            if (keep[i]) out.push_back(coded[3 * t + i]);
        }
    }
    return out;
}

std::vector<double> depuncture(const std::vector<double>& llrs, const Mcs& mcs, int n_steps) {
    const PunctureScheme& s = scheme_for(mcs);
    std::vector<double> out(3 * static_cast<size_t>(n_steps), 0.0);
    size_t pos = 0;
    for (int t = 0; t < n_steps; ++t) {
        const auto& keep = s.keep[t % s.period];
        for (int i = 0; i < 3; ++i) {
            if (keep[i] && pos < llrs.size()) out[3 * t + i] = llrs[pos++];
        }
    }
    return out;
}

std::vector<uint8_t> viterbi_decode(const std::vector<double>& llrs, int n_info) {
    const int n_steps = n_info + kTailBits;
    if (static_cast<int>(llrs.size()) < 3 * n_steps) {
        throw BlockSizeError("viterbi_decode: LLR stream shorter than trellis");
    }
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<double> metric(kStates, kNegInf), next(kStates);
    metric[0] = 0.0;
    std::vector<uint8_t> decision(static_cast<size_t>(n_steps) * kStates);
    const auto& outs = output_table();

    std::array<double, 128> bm{};
    for (int t = 0; t < n_steps; ++t) {
        const double l0 = llrs[3 * t], l1 = llrs[3 * t + 1], l2 = llrs[3 * t + 2];
        for (int w = 0; w < 128; ++w) {
            const uint8_t m = outs[w];
            // correlation metric: +llr/2 for bit 0, -llr/2 for bit 1
            bm[w] = 0.5 * (((m & 1) ? -l0 : l0) + ((m & 2) ? -l1 : l1) + ((m & 4) ? -l2 : l2));
        }
        for (int n = 0; n < kStates; ++n) {
            const int prev0 = n >> 1;
            const int prev1 = prev0 | 0x20;
            const double m0 = metric[prev0] + bm[n];
            const double m1 = metric[prev1] + bm[n | 0x40];
            if (m1 > m0) {
                next[n] = m1;
                decision[static_cast<size_t>(t) * kStates + n] = 1;
            } else {
                next[n] = m0;
                decision[static_cast<size_t>(t) * kStates + n] = 0;
            }
        }
        metric.swap(next);
    }

    // Zero-tail termination: trace back from state 0.
    std::vector<uint8_t> bits(n_steps);
    int state = 0;
    for (int t = n_steps - 1; t >= 0; --t) {
        bits[t] = state & 1;
        const uint8_t d = decision[static_cast<size_t>(t) * kStates + state];
        state = (state >> 1) | (d << 5);
    }
    bits.resize(n_info);
    return bits;
}

const std::vector<cplx>& constellation_points(Constellation c) {
    static const auto build = [](Constellation cc) {
        const int m = bits_per_symbol(cc);
        std::vector<cplx> pts(1u << m);
        std::vector<uint8_t> bits(m);
        for (size_t idx = 0; idx < pts.size(); ++idx) {
            for (int i = 0; i < m; ++i) bits[i] = (idx >> (m - 1 - i)) & 1;
            pts[idx] = modulate(bits, cc)(0);
        }
        return pts;
    };
    static const std::vector<cplx> qpsk = build(Constellation::Qpsk);
    static const std::vector<cplx> qam16 = build(Constellation::Qam16);
    static const std::vector<cplx> qam64 = build(Constellation::Qam64);
    switch (c) {
        case Constellation::Qpsk: return qpsk;
        case Constellation::Qam16: return qam16;
        case Constellation::Qam64: return qam64;
    }
    throw Error("unknown constellation");
}

namespace {

// Gray-coded PAM level from axis bits; b0 selects the sign half.
double pam_level(const uint8_t* b, int n) {
    if (n == 1) return 1.0 - 2.0 * b[0];
    if (n == 2) return (1.0 - 2.0 * b[0]) * (2.0 - (1.0 - 2.0 * b[1]));
    return (1.0 - 2.0 * b[0]) * (4.0 - (1.0 - 2.0 * b[1]) * (2.0 - (1.0 - 2.0 * b[2])));
}

}  // namespace

CVec modulate(const std::vector<uint8_t>& bits, Constellation c) {
    const int m = bits_per_symbol(c);
    const int half = m / 2;
    const int n_sym = static_cast<int>((bits.size() + m - 1) / m);
    const double scale = c == Constellation::Qpsk   ? 1.0 / std::sqrt(2.0)
                         : c == Constellation::Qam16 ? 1.0 / std::sqrt(10.0)
                                                     : 1.0 / std::sqrt(42.0);
    std::vector<uint8_t> padded(bits);
    padded.resize(static_cast<size_t>(n_sym) * m, 0);
    CVec out(n_sym);
    for (int s = 0; s < n_sym; ++s) {
        const uint8_t* p = padded.data() + static_cast<size_t>(s) * m;
        out(s) = scale * cplx(pam_level(p, half), pam_level(p + half, half));
    }
    return out;
}

std::vector<double> demap(const CVec& symbols, double noise_var, Constellation c) {
    const int m = bits_per_symbol(c);
    const auto& pts = constellation_points(c);
    const double inv_nv = 1.0 / std::max(noise_var, 1e-30);
    std::vector<double> llrs(static_cast<size_t>(symbols.size()) * m);
    std::vector<double> d2(pts.size());
    for (Eigen::Index s = 0; s < symbols.size(); ++s) {
        for (size_t i = 0; i < pts.size(); ++i) d2[i] = std::norm(symbols(s) - pts[i]);
        for (int b = 0; b < m; ++b) {
            double min0 = std::numeric_limits<double>::infinity();
            double min1 = min0;
            const size_t bitmask = 1u << (m - 1 - b);
            for (size_t i = 0; i < pts.size(); ++i) {
                if (i & bitmask) {
                    min1 = std::min(min1, d2[i]);
                } else {
                    min0 = std::min(min0, d2[i]);
                }
            }
            llrs[static_cast<size_t>(s) * m + b] = (min1 - min0) * inv_nv;
        }
    }
    return llrs;
}

CodedBlock encode(const Payload& payload, const Mcs& mcs) {
    if (payload.bits.empty()) throw BlockSizeError("encode: empty payload");
    std::vector<uint8_t> bits = payload.bits;
    const std::vector<uint8_t> crc = crc16(payload.bits);
    bits.insert(bits.end(), crc.begin(), crc.end());
    const std::vector<uint8_t> coded = puncture(conv_encode(bits), mcs);
    return CodedBlock{modulate(coded, mcs.constellation), mcs.index};
}

Payload decode(const CVec& symbols, const Mcs& mcs, double noise_var, int payload_bits) {
    const int n_info = payload_bits + kCrcBits;
    const int n_sym = symbol_count_for(mcs, payload_bits);
    if (symbols.size() < n_sym) {
        throw BlockSizeError("decode: symbol count inconsistent with MCS block size");
    }
    const int n_coded = coded_bits_for(mcs, payload_bits);
    std::vector<double> llrs = demap(symbols.head(n_sym), noise_var, mcs.constellation);
    llrs.resize(n_coded);  // drop modulation padding bits
    const std::vector<double> full = depuncture(llrs, mcs, n_info + kTailBits);
    std::vector<uint8_t> bits = viterbi_decode(full, n_info);

    Payload out;
    out.bits.assign(bits.begin(), bits.begin() + payload_bits);
    const std::vector<uint8_t> expect = crc16(out.bits);
    out.crc_ok = std::equal(expect.begin(), expect.end(), bits.begin() + payload_bits)
                     ? Payload::Crc::Pass
                     : Payload::Crc::Fail;
    return out;
}

CodedBlock reencode(const Payload& decoded, const Mcs& mcs) { return encode(decoded, mcs); }

CVec pad_cyclic(const CVec& symbols, int n) {
    if (symbols.size() == 0) throw BlockSizeError("pad_cyclic: empty block");
    if (symbols.size() >= n) return symbols.head(n);
    CVec out(n);
    for (int i = 0; i < n; ++i) out(i) = symbols(i % symbols.size());
    return out;
}

}  // namespace noma
