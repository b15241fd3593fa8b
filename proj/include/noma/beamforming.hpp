#pragma once

#include <vector>

#include "noma/linalg.hpp"

namespace noma {

enum class BeamBuilder { Dft, Steered, Custom };

// Orthonormal beamforming matrix B; column k is beam b_k.
// Immutable after construction.
class BeamformingMatrix {
  public:
    // B[m,k] = exp(-j 2 pi m k / n_t) / sqrt(n_t).
    static BeamformingMatrix dft(int n_t);

    // Half-wavelength ULA steering vectors at the given angles (degrees,
    // |angle| < 90, distinct), orthonormalized by modified Gram-Schmidt in
    // the given order. Throws DegenerateBeams on near-collinear inputs.
    static BeamformingMatrix steered(const std::vector<double>& angles_deg);

    // Normalized ULA steering vector a[m] = exp(j pi m sin(theta)) / sqrt(n_t).
    static CVec steering_vector(double angle_deg, int n_t);

    // Wraps an externally supplied unitary matrix (no pointing angles).
    static BeamformingMatrix from_unitary(CMat b);

    const CMat& matrix() const { return B_; }
    int size() const { return static_cast<int>(B_.cols()); }
    CVec column(int k) const { return B_.col(k); }

    // B with column k removed (the interference view of the other beams).
    CMat without_column(int k) const;

    // B * 1 (sum of columns) -- the effective broadcast beam.
    CVec broadcast_beam() const { return B_.rowwise().sum(); }

    BeamBuilder builder() const { return tag_; }

    // Pointing angle (degrees) of each beam, used for nearest-beam group
    // assignment. For the steered builder these are the configured angles;
    // for DFT beams the array direction sin(theta_k) = 2k/n_t wrapped to [-1,1).
    const std::vector<double>& beam_angles_deg() const { return angles_deg_; }

  private:
    BeamformingMatrix(CMat b, BeamBuilder tag, std::vector<double> angles)
        : B_(std::move(b)), tag_(tag), angles_deg_(std::move(angles)) {}

    CMat B_;
    BeamBuilder tag_;
    std::vector<double> angles_deg_;
};

}  // namespace noma
