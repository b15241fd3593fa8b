#pragma once

#include <cstdint>
#include <vector>

#include "noma/linalg.hpp"

namespace noma {

enum class Constellation { Qpsk, Qam16, Qam64 };

int bits_per_symbol(Constellation c);

// Modulation and coding scheme. The code is a rate-1/3 mother convolutional
// code (K=7, generators 133/171/165 octal, zero-tail terminated) punctured
// to the listed rate.
struct Mcs {
    int index = 0;
    Constellation constellation = Constellation::Qpsk;
    int rate_num = 1;
    int rate_den = 3;

    double rate() const { return static_cast<double>(rate_num) / rate_den; }
};

// Fixed 8-entry MCS table, ordered by decreasing robustness.
const std::vector<Mcs>& mcs_table();

struct Payload {
    enum class Crc { Unknown, Pass, Fail };
    std::vector<uint8_t> bits;       // information bits, CRC excluded
    Crc crc_ok = Crc::Unknown;
};

// One modulated stream block (unit average symbol energy).
struct CodedBlock {
    CVec symbols;
    int mcs_index = 0;
};

// --- transport block sizing -------------------------------------------------

inline constexpr int kCrcBits = 16;
inline constexpr int kTailBits = 6;  // zero-tail flush of the K=7 encoder

// Number of coded (punctured) bits produced by payload_bits information bits.
int coded_bits_for(const Mcs& mcs, int payload_bits);

// Modulated symbol count for a given payload size.
int symbol_count_for(const Mcs& mcs, int payload_bits);

// Largest payload size whose encoded block fits in symbol_budget symbols.
int payload_bits_for(const Mcs& mcs, int symbol_budget);

// --- pipeline ---------------------------------------------------------------

// CRC-16-CCITT (poly 0x1021, init 0xFFFF), appended MSB-first.
std::vector<uint8_t> crc16(const std::vector<uint8_t>& bits);

// Rate-1/3 mother code output for bits + 6 zero tail bits (3 outputs per step).
std::vector<uint8_t> conv_encode(const std::vector<uint8_t>& bits);

// Soft Viterbi decode of per-bit LLRs (positive = bit 0); returns n_info bits.
// LLR positions removed by puncturing must be present as 0.
std::vector<uint8_t> viterbi_decode(const std::vector<double>& llrs, int n_info);

std::vector<uint8_t> puncture(const std::vector<uint8_t>& coded, const Mcs& mcs);
std::vector<double> depuncture(const std::vector<double>& llrs, const Mcs& mcs, int n_steps);

CVec modulate(const std::vector<uint8_t>& bits, Constellation c);

// Constellation points in bit-index order (Gray mapped, unit average energy).
const std::vector<cplx>& constellation_points(Constellation c);

// CRC append -> FEC -> puncture -> Gray map. Throws BlockSizeError on an
// empty payload.
CodedBlock encode(const Payload& payload, const Mcs& mcs);

// Max-log per-bit LLRs; sign of the LLR equals the hard decision (positive =
// bit 0).
std::vector<double> demap(const CVec& symbols, double noise_var, Constellation c);

// Demap -> depuncture -> Viterbi -> CRC check. payload_bits selects the
// transport block size; crc_ok reports the outcome.
Payload decode(const CVec& symbols, const Mcs& mcs, double noise_var, int payload_bits);

// Same as encode; named step of the decode/re-encode/subtract refinement.
CodedBlock reencode(const Payload& decoded, const Mcs& mcs);

// Cyclic extension to n symbols, used to bring blocks of different MCS to a
// common frame length. Decoders only read the leading block.
CVec pad_cyclic(const CVec& symbols, int n);

}  // namespace noma
