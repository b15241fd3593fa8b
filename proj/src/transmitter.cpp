#include "noma/transmitter.hpp"

#include <cmath>

namespace noma {

SuperposedFrame superpose(const std::vector<CodedBlock>& multicast_blocks,
                          const CodedBlock& broadcast_block, double alpha) {
    const int n_t = static_cast<int>(multicast_blocks.size());
    if (n_t < 1) throw FrameAssemblyError("superpose: need at least one multicast block");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw FrameAssemblyError("superpose: alpha not in [0,1]");
    const Eigen::Index n_sym = broadcast_block.symbols.size();
    for (const CodedBlock& b : multicast_blocks) {
        if (b.symbols.size() != n_sym) {
            throw FrameAssemblyError("superpose: block symbol lengths differ");
        }
    }
    SuperposedFrame frame;
    frame.alpha = alpha;
    frame.power_scale = 1.0 / std::sqrt(static_cast<double>(n_t));
    frame.X.resize(n_t, n_sym);
    const double a = std::sqrt(alpha);
    const double b = std::sqrt(1.0 - alpha);
    for (int k = 0; k < n_t; ++k) {
        frame.X.row(k) =
            frame.power_scale *
            (a * multicast_blocks[k].symbols.transpose() + b * broadcast_block.symbols.transpose());
    }
    return frame;
}

CMat transmit(const SuperposedFrame& frame, const BeamformingMatrix& B) {
    if (B.size() != frame.X.rows()) throw FrameAssemblyError("transmit: dimension mismatch");
    return B.matrix() * frame.X;
}

}  // namespace noma
