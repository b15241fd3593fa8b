#include "noma/receivers.hpp"

#include <cmath>

namespace noma {

namespace {

// Minimum effective gain magnitude before the demapper falls back to the
// unnormalized estimate (a stream transmitted at zero power).
constexpr double kGainFloor = 1e-12;

CMat identity_like(const CMat& m) { return CMat::Identity(m.rows(), m.rows()); }

// B_k-removed interference Gram matrix, zero for n_t = 1.
CMat breve_gram(const BeamformingMatrix& B, int k) {
    const int n = B.size();
    if (n == 1) return CMat::Zero(n, n);
    const CMat br = B.without_column(k);
    return br * br.adjoint();
}

void require_rw(bool pre_equalized, const CMat* rw) {
    if (pre_equalized && rw == nullptr) {
        throw Error("pre-equalized filter variant requires Rw");
    }
}

// Row filter A^H inner^{-1} for a scalar stream (Cxx = 1).
CMat scalar_mmse_row(const CVec& a, const CMat& inner) {
    return solve_guarded(hermitize(inner), a).adjoint();
}

}  // namespace

void ReceiverConfig::validate() const {
    if (strategy == Strategy::Jd && feedback_correction) {
        throw ConfigError("JD has no feedback stage: feedback_correction is invalid");
    }
    if (strategy == Strategy::Jd && knowledge == Knowledge::BeamOnly) {
        throw ConfigError("JD requires full knowledge of B");
    }
}

CMat broadcast_filter(const CMat& H, const BeamformingMatrix& B, int k, double alpha,
                      double sigma2, Knowledge knowledge, bool pre_equalized, const CMat* Rw) {
    require_rw(pre_equalized, Rw);
    const int n_t = B.size();
    const double sb = std::sqrt(1.0 - alpha);
    if (knowledge == Knowledge::FullB) {
        const CVec b1 = B.broadcast_beam();
        if (!pre_equalized) {
            const CVec a = sb * H * b1;
            const CMat inner = sigma2 * identity_like(H) +
                               (alpha / n_t) * (H * H.adjoint()) + a * a.adjoint();
            return scalar_mmse_row(a, inner);
        }
        const CVec a = sb * b1;
        const CMat inner =
            (alpha / n_t) * CMat::Identity(n_t, n_t) + *Rw + a * a.adjoint();
        return scalar_mmse_row(a, inner);
    }
    // Beam-only knowledge: the channel is assumed matched to b_k and the
    // broadcast beam collapses onto it.
    const CVec bk = B.column(k);
    if (!pre_equalized) {
        const CVec hb = H * bk;
        const CMat inner = sigma2 * identity_like(H) + hb * hb.adjoint();
        return scalar_mmse_row(CVec(sb * hb), inner);
    }
    const CMat inner = *Rw + bk * bk.adjoint();
    return scalar_mmse_row(CVec(sb * bk), inner);
}

CMat multicast_filter(const CMat& H, const BeamformingMatrix& B, int k, double alpha,
                      double sigma2, Knowledge knowledge, bool pre_equalized, const CMat* Rw) {
    require_rw(pre_equalized, Rw);
    const int n_t = B.size();
    const CVec bk = B.column(k);
    if (knowledge == Knowledge::FullB) {
        const double sa = std::sqrt(alpha / n_t);
        if (!pre_equalized) {
            // Collapsed form: the inter-beam and own-beam terms merge into
            // (alpha/n_t) H H^H through B_breve B_breve^H + b_k b_k^H = I.
            const CMat inner =
                sigma2 * identity_like(H) + (alpha / n_t) * (H * H.adjoint());
            return scalar_mmse_row(CVec(sa * H * bk), inner);
        }
        const CMat inner = *Rw + (alpha / n_t) * CMat::Identity(n_t, n_t);
        return scalar_mmse_row(CVec(sa * bk), inner);
    }
    const double sa = std::sqrt(alpha);
    if (!pre_equalized) {
        const CVec hb = H * bk;
        const CMat inner = sigma2 * identity_like(H) + alpha * (hb * hb.adjoint());
        return scalar_mmse_row(CVec(sa * hb), inner);
    }
    const CMat inner = *Rw + alpha * (bk * bk.adjoint());
    return scalar_mmse_row(CVec(sa * bk), inner);
}

CMat joint_filter(const CMat& H, const BeamformingMatrix& B, int k, double alpha, double sigma2,
                  bool pre_equalized, const CMat* Rw) {
    require_rw(pre_equalized, Rw);
    const int n_t = B.size();
    CMat bjoint(n_t, 2);  // (b_k, B*1)
    bjoint.col(0) = B.column(k);
    bjoint.col(1) = B.broadcast_beam();
    CMat delta = CMat::Zero(2, 2);
    delta(0, 0) = std::sqrt(alpha);
    delta(1, 1) = std::sqrt(1.0 - alpha);
    const CMat bg = breve_gram(B, k);
    if (!pre_equalized) {
        const CMat a = H * bjoint * delta;
        const CMat inner = sigma2 * identity_like(H) + alpha * (H * bg * H.adjoint()) +
                           a * a.adjoint();
        return solve_guarded(hermitize(inner), a).adjoint();
    }
    const CMat a = bjoint * delta;
    const CMat inner = *Rw + alpha * bg + a * a.adjoint();
    return solve_guarded(hermitize(inner), a).adjoint();
}

namespace {

// Per-frame quantities shared by the pipelines: true signal columns (with the
// transmitter's 1/sqrt(n_t) scaling) and stage interference covariances,
// mapped through the pre-equalizer when one is used.
struct FrameModel {
    CMat Y;        // observation domain (raw or pre-equalized)
    CVec a_bc;     // true broadcast column in that domain
    CVec a_mc;     // true multicast column
    CMat c_bc;     // interference+noise covariance seen by the broadcast stage
    CMat c_mc;     // same for the multicast stage, assuming perfect cancellation
    CMat rw;       // valid iff pre-equalized
    bool pre_equalized = false;
};

FrameModel build_frame_model(const CMat& y_frames, const CMat& H, const BeamformingMatrix& B,
                             int k, double alpha, double sigma2, bool pre_equalized) {
    const int n_t = B.size();
    const double inv_nt = 1.0 / n_t;
    FrameModel fm;
    fm.pre_equalized = pre_equalized;
    const CVec a_bc = std::sqrt((1.0 - alpha) * inv_nt) * (H * B.broadcast_beam());
    const CVec a_mc = std::sqrt(alpha * inv_nt) * (H * B.column(k));
    const CMat mc_all = (alpha * inv_nt) * (H * H.adjoint());
    const CMat mc_other = (alpha * inv_nt) * (H * breve_gram(B, k) * H.adjoint());
    const CMat noise = sigma2 * CMat::Identity(H.rows(), H.rows());
    if (!pre_equalized) {
        fm.Y = y_frames;
        fm.a_bc = a_bc;
        fm.a_mc = a_mc;
        fm.c_bc = mc_all + noise;
        fm.c_mc = mc_other + noise;
        return fm;
    }
    const PreEqualizer eq = PreEqualizer::make(H, sigma2);
    fm.Y = eq.apply(y_frames);
    fm.a_bc = eq.F * a_bc;
    fm.a_mc = eq.F * a_mc;
    fm.c_bc = eq.F * mc_all * eq.F.adjoint() + eq.Rw;
    fm.c_mc = eq.F * mc_other * eq.F.adjoint() + eq.Rw;
    fm.rw = eq.Rw;
    return fm;
}

// Gain-normalized decode of one stream: est = g t + residual with
// Var(residual) = nu.
Payload decode_normalized(const CVec& raw, cplx g, double nu, const StreamFormat& fmt) {
    if (std::abs(g) < kGainFloor) {
        return decode(raw, fmt.mcs, 1.0, fmt.payload_bits);
    }
    const CVec normalized = raw / g;
    const double noise_var = std::max(nu / std::norm(g), 1e-30);
    return decode(normalized, fmt.mcs, noise_var, fmt.payload_bits);
}

double residual_variance(const CMat& w, const CMat& c) {
    return std::real((w * c * w.adjoint())(0, 0));
}

}  // namespace

DecodedStreams sic_receive(const CMat& y_frames, const CMat& H, const BeamformingMatrix& B, int k,
                           double alpha, double sigma2, const StreamFormat& fmt_bc,
                           const StreamFormat& fmt_mc, const ReceiverConfig& config) {
    config.validate();
    if (config.strategy != Strategy::Sic) throw ConfigError("sic_receive: strategy must be SIC");
    const FrameModel fm =
        build_frame_model(y_frames, H, B, k, alpha, sigma2, config.pre_equalized);
    const CMat* rw = config.pre_equalized ? &fm.rw : nullptr;
    const Eigen::Index n_sym = y_frames.cols();

    DecodedStreams out;

    // Stage 1: broadcast estimate (multicast treated as interference).
    const CMat w_bc = broadcast_filter(H, B, k, alpha, sigma2, config.knowledge,
                                       config.pre_equalized, rw);
    out.t_bc_raw = (w_bc * fm.Y).transpose();
    const cplx g_bc = (w_bc * fm.a_bc)(0, 0);
    const double nu_bc = residual_variance(w_bc, fm.c_bc);
    out.broadcast = decode_normalized(out.t_bc_raw, g_bc, nu_bc, fmt_bc);

    // Broadcast reconstruction for the subtraction. Beam-only receivers
    // reconstruct over their own beam (the matched-channel approximation).
    CVec a_sub = fm.a_bc;
    if (config.knowledge == Knowledge::BeamOnly) {
        a_sub = std::sqrt((1.0 - alpha) / B.size()) * (H * B.column(k));
        if (config.pre_equalized) {
            a_sub = PreEqualizer::make(H, sigma2).F * a_sub;
        }
    }
    CVec t_bar;
    if (config.feedback_correction) {
        t_bar = pad_cyclic(reencode(out.broadcast, fmt_bc.mcs).symbols,
                           static_cast<int>(n_sym));
    } else if (std::abs(g_bc) >= kGainFloor) {
        t_bar = out.t_bc_raw / g_bc;
    } else {
        t_bar = CVec::Zero(n_sym);
    }
    const CMat y_sub = fm.Y - a_sub * t_bar.transpose();

    // Stage 2: multicast estimate on the cancelled signal.
    const CMat w_mc = multicast_filter(H, B, k, alpha, sigma2, config.knowledge,
                                       config.pre_equalized, rw);
    out.t_mc_raw = (w_mc * y_sub).transpose();
    const cplx g_mc = (w_mc * fm.a_mc)(0, 0);
    const double nu_mc = residual_variance(w_mc, fm.c_mc);
    out.multicast = decode_normalized(out.t_mc_raw, g_mc, nu_mc, fmt_mc);
    return out;
}

DecodedStreams jd_receive(const CMat& y_frames, const CMat& H, const BeamformingMatrix& B, int k,
                          double alpha, double sigma2, const StreamFormat& fmt_bc,
                          const StreamFormat& fmt_mc, const ReceiverConfig& config) {
    config.validate();
    if (config.strategy != Strategy::Jd) throw ConfigError("jd_receive: strategy must be JD");
    const FrameModel fm =
        build_frame_model(y_frames, H, B, k, alpha, sigma2, config.pre_equalized);
    const CMat* rw = config.pre_equalized ? &fm.rw : nullptr;

    const CMat w = joint_filter(H, B, k, alpha, sigma2, config.pre_equalized, rw);
    const CMat est = w * fm.Y;  // row 0: t_k, row 1: t_bc

    CMat a_true(fm.a_mc.rows(), 2);
    a_true.col(0) = fm.a_mc;
    a_true.col(1) = fm.a_bc;
    const CMat g2 = w * a_true;
    const CMat cw = w * fm.c_mc * w.adjoint();  // shared interference+noise part

    DecodedStreams out;
    out.t_mc_raw = est.row(0).transpose();
    out.t_bc_raw = est.row(1).transpose();
    const double nu_mc = std::real(cw(0, 0)) + std::norm(g2(0, 1));
    const double nu_bc = std::real(cw(1, 1)) + std::norm(g2(1, 0));
    out.multicast = decode_normalized(out.t_mc_raw, g2(0, 0), nu_mc, fmt_mc);
    out.broadcast = decode_normalized(out.t_bc_raw, g2(1, 1), nu_bc, fmt_bc);
    return out;
}

DecodedStreams receive(const CMat& y_frames, const CMat& H, const BeamformingMatrix& B, int k,
                       double alpha, double sigma2, const StreamFormat& fmt_bc,
                       const StreamFormat& fmt_mc, const ReceiverConfig& config) {
    return config.strategy == Strategy::Sic
               ? sic_receive(y_frames, H, B, k, alpha, sigma2, fmt_bc, fmt_mc, config)
               : jd_receive(y_frames, H, B, k, alpha, sigma2, fmt_bc, fmt_mc, config);
}

}  // namespace noma
