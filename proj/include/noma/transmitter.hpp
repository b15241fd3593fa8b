#pragma once

#include <vector>

#include "noma/beamforming.hpp"
#include "noma/codec.hpp"

namespace noma {

// Per-beam superposed streams over one frame. Row k holds
// x_k[n] = power_scale * (sqrt(alpha) t_k[n] + sqrt(1-alpha) t_bc[n]).
struct SuperposedFrame {
    CMat X;              // n_t x n_symbols
    double alpha = 0.0;
    double power_scale = 1.0;  // 1/sqrt(n_t)
};

// Superposition of the n_t multicast blocks with the common broadcast block.
// All blocks must have the same symbol length; alpha in [0,1].
SuperposedFrame superpose(const std::vector<CodedBlock>& multicast_blocks,
                          const CodedBlock& broadcast_block, double alpha);

// Beamformed transmit matrix: column n = B * x[n].
CMat transmit(const SuperposedFrame& frame, const BeamformingMatrix& B);

}  // namespace noma
