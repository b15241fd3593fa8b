#pragma once

#include "noma/linalg.hpp"

namespace noma {

// Linear observation y = A x + z with known second-order statistics.
// Cxx and Czz are forced Hermitian on construction and validated.
struct LinearObservationModel {
    CMat A;
    CMat Cxx;
    CMat Czz;

    LinearObservationModel(CMat a, CMat cxx, CMat czz);
};

// W = Cxx A^H (Czz + A Cxx A^H)^{-1}.
// Rows of W = dim(x), columns = dim(y). Throws SingularModel if the inner
// matrix is numerically singular.
CMat mmse_filter(const LinearObservationModel& model);

// Output of the MMSE pre-equalization stage.
struct PreEqualizedSignal {
    CVec y_bar;  // (sigma^2 I + H^H H)^{-1} H^H y
    CMat Rw;     // colored-noise autocovariance sigma^2 H^H H (sigma^2 I + H^H H)^{-2}
};

// Reusable pre-equalizer for one channel realization (filter computed once
// per frame, applied to every symbol instant).
struct PreEqualizer {
    CMat F;   // (sigma^2 I + H^H H)^{-1} H^H
    CMat Rw;

    static PreEqualizer make(const CMat& H, double sigma2);
    CVec apply(const CVec& y) const { return F * y; }
    CMat apply(const CMat& Y) const { return F * Y; }
};

PreEqualizedSignal pre_equalize(const CMat& H, double sigma2, const CVec& y);

}  // namespace noma
