#include "noma/beamforming.hpp"

#include <cmath>
#include <numbers>

namespace noma {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kGramSchmidtBreakdown = 1e-8;
}  // namespace

BeamformingMatrix BeamformingMatrix::dft(int n_t) {
    if (n_t < 1) throw Error("dft_beams: n_t must be >= 1");
    CMat b(n_t, n_t);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
    for (int m = 0; m < n_t; ++m) {
        for (int k = 0; k < n_t; ++k) {
            const double phase = -2.0 * kPi * m * k / n_t;
            b(m, k) = scale * cplx(std::cos(phase), std::sin(phase));
        }
    }
    // DFT beam k steers the array direction sin(theta) = 2k/n_t, wrapped.
    std::vector<double> angles(n_t);
    for (int k = 0; k < n_t; ++k) {
        double f = 2.0 * k / n_t;
        if (f >= 1.0) f -= 2.0;
        angles[k] = std::asin(f) * 180.0 / kPi;
    }
    return BeamformingMatrix(std::move(b), BeamBuilder::Dft, std::move(angles));
}

CVec BeamformingMatrix::steering_vector(double angle_deg, int n_t) {
    CVec a(n_t);
    const double s = std::sin(angle_deg * kPi / 180.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
    for (int m = 0; m < n_t; ++m) {
        const double phase = kPi * m * s;
        a(m) = scale * cplx(std::cos(phase), std::sin(phase));
    }
    return a;
}

BeamformingMatrix BeamformingMatrix::steered(const std::vector<double>& angles_deg) {
    const int n_t = static_cast<int>(angles_deg.size());
    if (n_t < 1) throw Error("steering_beams: need at least one angle");
    for (double a : angles_deg) {
        if (!(std::abs(a) < 90.0)) throw Error("steering_beams: |angle| must be < 90 deg");
    }
    CMat b(n_t, n_t);
    // Modified Gram-Schmidt in the configured order.
    for (int k = 0; k < n_t; ++k) {
        CVec v = steering_vector(angles_deg[k], n_t);
        for (int j = 0; j < k; ++j) {
            v -= (b.col(j).adjoint() * v)(0) * b.col(j);
        }
        const double norm = v.norm();
        if (norm < kGramSchmidtBreakdown) {
            throw DegenerateBeams("steering_beams: near-collinear steering vectors at angle index " +
                                  std::to_string(k));
        }
        b.col(k) = v / norm;
    }
    return BeamformingMatrix(std::move(b), BeamBuilder::Steered, angles_deg);
}

BeamformingMatrix BeamformingMatrix::from_unitary(CMat b) {
    if (b.rows() != b.cols()) throw Error("from_unitary: matrix must be square");
    const CMat gram = b.adjoint() * b;
    if ((gram - CMat::Identity(b.rows(), b.cols())).norm() > 1e-10) {
        throw Error("from_unitary: matrix is not unitary");
    }
    return BeamformingMatrix(std::move(b), BeamBuilder::Custom, {});
}

CMat BeamformingMatrix::without_column(int k) const {
    const int n = size();
    CMat out(n, n - 1);
    int c = 0;
    for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        out.col(c++) = B_.col(j);
    }
    return out;
}

}  // namespace noma
