#pragma once

#include "noma/beamforming.hpp"
#include "noma/codec.hpp"
#include "noma/mmse.hpp"

namespace noma {

enum class Strategy { Sic, Jd };
enum class Knowledge { FullB, BeamOnly };

struct ReceiverConfig {
    Strategy strategy = Strategy::Sic;
    Knowledge knowledge = Knowledge::FullB;
    bool feedback_correction = false;
    bool pre_equalized = false;

    // JD is defined without recursion and needs the full beam matrix.
    void validate() const;
};

// Transport format of one stream: MCS plus the transport block size in use.
struct StreamFormat {
    Mcs mcs;
    int payload_bits = 0;
};

struct DecodedStreams {
    Payload broadcast;
    Payload multicast;
    CVec t_bc_raw;  // unnormalized filter outputs per symbol instant
    CVec t_mc_raw;
};

// --- closed-form MMSE filters ----------------------------------------------
// Each returns the row filter of the selected variant. The multicast power
// convention is alpha/n_t per stream (unit-energy symbols, global 1/sqrt(n_t)
// at the transmitter); the broadcast stream enters through the effective beam
// B*1. Rw is required iff pre_equalized.

CMat broadcast_filter(const CMat& H, const BeamformingMatrix& B, int k, double alpha,
                      double sigma2, Knowledge knowledge, bool pre_equalized,
                      const CMat* Rw = nullptr);

CMat multicast_filter(const CMat& H, const BeamformingMatrix& B, int k, double alpha,
                      double sigma2, Knowledge knowledge, bool pre_equalized,
                      const CMat* Rw = nullptr);

// 2-row joint filter: row 0 estimates t_k, row 1 estimates t_bc.
// Full-B knowledge only.
CMat joint_filter(const CMat& H, const BeamformingMatrix& B, int k, double alpha, double sigma2,
                  bool pre_equalized, const CMat* Rw = nullptr);

// --- frame pipelines --------------------------------------------------------
// y_frames: received N_r x N matrix for one block-fading frame. The filters
// are computed once per frame and reused across symbols. Demapping is
// gain-normalized: each stream's post-filter amplitude and residual variance
// are computed from the transmit convention, and the LLRs use the normalized
// estimates.

DecodedStreams sic_receive(const CMat& y_frames, const CMat& H, const BeamformingMatrix& B, int k,
                           double alpha, double sigma2, const StreamFormat& fmt_bc,
                           const StreamFormat& fmt_mc, const ReceiverConfig& config);

DecodedStreams jd_receive(const CMat& y_frames, const CMat& H, const BeamformingMatrix& B, int k,
                          double alpha, double sigma2, const StreamFormat& fmt_bc,
                          const StreamFormat& fmt_mc, const ReceiverConfig& config);

DecodedStreams receive(const CMat& y_frames, const CMat& H, const BeamformingMatrix& B, int k,
                       double alpha, double sigma2, const StreamFormat& fmt_bc,
                       const StreamFormat& fmt_mc, const ReceiverConfig& config);

}  // namespace noma
