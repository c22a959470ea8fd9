#pragma once

#include <Eigen/Dense>

// Unit-quaternion and small-matrix algebra used throughout the toolkit.
//
// Convention (used everywhere, serialized scalar-first):
//   Q = [w, x, y, z] with scalar part w and vector part v = [x, y, z].
//   Hamilton product:  a * b = [aw*bw - av.bv,  aw*bv + bw*av + av x bv]
//   Rotation map:      R(Q) = (w^2 - |v|^2) I + 2 v v^T + 2 w [v]x
// With these definitions Q * [0, w]^T == Gamma(w) * Q holds identically;
// verify_kinematics_convention() checks this numerically at startup.

namespace qtrack {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

struct UnitQuaternion {
    double w = 1.0;
    Vec3 v = Vec3::Zero();

    UnitQuaternion() = default;
    UnitQuaternion(double w_, const Vec3& v_) : w(w_), v(v_) {}
    UnitQuaternion(double w_, double x, double y, double z) : w(w_), v(x, y, z) {}

    static UnitQuaternion identity() { return {}; }

    /// Builds a quaternion from raw components and normalizes it.
    /// Throws std::invalid_argument if the norm is numerically zero.
    static UnitQuaternion from_components(double w_, double x, double y, double z);

    double norm() const { return std::sqrt(w * w + v.squaredNorm()); }
    UnitQuaternion normalized() const;

    Vec4 as_vec4() const { return Vec4(w, v.x(), v.y(), v.z()); }
    static UnitQuaternion from_vec4_normalized(const Vec4& q);

    UnitQuaternion operator-() const { return {-w, -v}; }

    bool is_finite() const { return std::isfinite(w) && v.allFinite(); }
};

/// Hamilton product; result is renormalized.
UnitQuaternion quat_product(const UnitQuaternion& a, const UnitQuaternion& b);

/// Inverse of a unit quaternion, [w, -v].
UnitQuaternion quat_inverse(const UnitQuaternion& q);

/// Rotation matrix of a unit quaternion: (w^2 - |v|^2) I + 2 v v^T + 2 w [v]x.
Mat3 quat_to_rotation(const UnitQuaternion& q);

/// Skew-symmetric cross-product matrix, skew(v) * y == v x y.
Mat3 skew(const Vec3& v);

/// 4x4 quaternion-rate matrix: Gamma(w) Q == Q * [0, w]^T.
Mat4 gamma_matrix(const Vec3& omega);

/// Advances Q by the closed-form exponential exp(Gamma(omega) dt / 2) Q,
/// i.e. a body-frame rotation increment of angle |omega| dt. Small angles
/// (|omega| dt < 1e-8) use a series branch. Result is renormalized.
UnitQuaternion quat_exp_step(const Vec3& omega, double dt, const UnitQuaternion& q);

/// Vector part of Q^-1 * [0, v]^T * Q, which equals R(Q)^T v.
Vec3 rotate_vector(const UnitQuaternion& q, const Vec3& v);

/// The representative of {Q, -Q} with nonnegative scalar part. Both describe
/// the same rotation; this one is within a quarter turn of identity on S^3.
inline UnitQuaternion shorter_cover(const UnitQuaternion& q) {
    return q.w < 0.0 ? -q : q;
}

/// Rotation angle between the attitudes of two unit quaternions, in [0, pi].
/// Uses atan2 so sub-1e-8 rad separations are resolved.
double geodesic_angle(const UnitQuaternion& a, const UnitQuaternion& b);

/// Rotation angle of R1^T R2.
double geodesic_angle(const Mat3& r1, const Mat3& r2);

/// Max deviation of Q * [0, w]^T vs Gamma(w) Q over a deterministic sample
/// set. Call once at startup; anything above ~1e-12 means the product and
/// Gamma conventions disagree.
double verify_kinematics_convention();

} // namespace qtrack
