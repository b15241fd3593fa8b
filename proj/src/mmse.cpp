#include "noma/mmse.hpp"

namespace noma {

namespace {
constexpr double kHermitianTol = 1e-12;
}

LinearObservationModel::LinearObservationModel(CMat a, CMat cxx, CMat czz)
    : A(std::move(a)), Cxx(hermitize(cxx)), Czz(hermitize(czz)) {
    if (!is_hermitian(cxx, kHermitianTol)) {
        throw Error("Cxx is not Hermitian");
    }
    if (!is_hermitian(czz, kHermitianTol)) {
        throw Error("Czz is not Hermitian");
    }
    if (A.cols() != Cxx.rows() || A.rows() != Czz.rows()) {
        throw Error("LinearObservationModel: incompatible dimensions");
    }
}

CMat mmse_filter(const LinearObservationModel& model) {
    const CMat inner = hermitize(model.Czz + model.A * model.Cxx * model.A.adjoint());
    // W = Cxx A^H inner^{-1}; inner is Hermitian, so W = (inner^{-1} A Cxx^H)^H.
    return solve_guarded(inner, model.A * model.Cxx.adjoint()).adjoint();
}

PreEqualizer PreEqualizer::make(const CMat& H, double sigma2) {
    const Eigen::Index nt = H.cols();
    const CMat gram = hermitize(H.adjoint() * H);
    const CMat inner = sigma2 * CMat::Identity(nt, nt) + gram;
    PreEqualizer eq;
    eq.F = solve_guarded(inner, H.adjoint());
    // Rw = sigma^2 H^H H (sigma^2 I + H^H H)^{-2}
    eq.Rw = hermitize(sigma2 * solve_guarded(inner, solve_guarded(inner, gram)));
    return eq;
}

PreEqualizedSignal pre_equalize(const CMat& H, double sigma2, const CVec& y) {
    if (H.rows() != y.rows()) {
        throw Error("pre_equalize: rows(H) != dim(y)");
    }
    const PreEqualizer eq = PreEqualizer::make(H, sigma2);
    return PreEqualizedSignal{eq.apply(y), eq.Rw};
}

}  // namespace noma
