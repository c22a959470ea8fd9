#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qtrack/quat.hpp"

// Synthetic body-frame vector measurements and attitude reconstruction.
// A measurement of inertial reference r is b = R(Q)^T r + n with iid
// Gaussian n per axis; pairs are stored unit-normalized. Reconstruction
// solves the equal-weight Wahba problem by the Davenport q-method.

namespace qtrack {

struct VectorPair {
    Vec3 r; // inertial direction, unit
    Vec3 b; // body direction, unit
};

/// Seeded Gaussian stream. Samples are produced by the Box-Muller transform
/// over 53-bit uniforms drawn from mt19937_64, so a given (seed, stddev)
/// yields the same bits on any conforming platform.
class NoiseModel {
  public:
    NoiseModel(double stddev, std::uint64_t seed);

    double stddev() const { return stddev_; }
    double sample();
    Vec3 sample_vec3();

  private:
    double stddev_;
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Measures each inertial reference in the body frame of q_true, corrupting
/// the raw vector before normalization. Requires at least two references;
/// throws std::invalid_argument if the first two are collinear
/// (|r1.r2| > 1 - 1e-6 after normalization).
std::vector<VectorPair> synthesize(const UnitQuaternion& q_true,
                                   const std::vector<Vec3>& inertial_refs,
                                   NoiseModel& noise);

/// Appends the cross-product pair (r1 x r2, b1 x b2), renormalized, making
/// the stacked reference/measurement matrices rank 3.
std::vector<VectorPair> augment_third(const std::vector<VectorPair>& pairs);

/// Attitude from >= 3 pairs spanning rank 3: the unit quaternion minimizing
/// sum |b_i - R(Q)^T r_i|^2 (largest-eigenvalue eigenvector of the Davenport
/// K matrix), returned with nonnegative scalar part.
/// Throws std::invalid_argument on rank deficiency and std::runtime_error if
/// the eigensolver fails.
UnitQuaternion reconstruct(const std::vector<VectorPair>& pairs);

} // namespace qtrack
