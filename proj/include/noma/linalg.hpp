#pragma once

#include <Eigen/Dense>
#include <complex>

#include "noma/errors.hpp"

namespace noma {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

// Forces exact Hermitian symmetry: M <- (M + M^H)/2.
inline CMat hermitize(const CMat& m) { return 0.5 * (m + m.adjoint()); }

inline bool is_hermitian(const CMat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Condition-number guard for the inner matrices of the MMSE filters.
inline constexpr double kConditionLimit = 1e12;

// Solves M * X = rhs by LU factorization with a reciprocal-condition guard.
// Throws SingularModel if M is numerically singular (cond > kConditionLimit).
inline CMat solve_guarded(const CMat& m, const CMat& rhs) {
    Eigen::PartialPivLU<CMat> lu(m);
    // rcond() alone can report 1 on exactly singular inputs; the pivot ratio
    // of U catches those.
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double pivot_min = pivots.minCoeff();
    const double pivot_max = pivots.maxCoeff();
    const double rcond =
        pivot_max > 0.0 ? std::min(lu.rcond(), pivot_min / pivot_max) : 0.0;
    if (!(rcond > 1.0 / kConditionLimit)) {
        throw SingularModel("singular inner matrix (rcond=" + std::to_string(rcond) + ")",
                            rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity());
    }
    return lu.solve(rhs);
}

}  // namespace noma
