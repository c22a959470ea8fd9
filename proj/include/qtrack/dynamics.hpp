#pragma once

#include <cmath>

#include "qtrack/quat.hpp"

// Ground-truth rigid-body propagation and the sinusoidal reference
// trajectory. Truth uses RK4 for the angular velocity and a multiplicative
// exponential step for the attitude; the reference angular velocity comes
// from the closed-form antiderivative of its acceleration profile, never
// from numeric integration.

namespace qtrack {

/// Symmetric positive-definite inertia with its inverse cached.
class InertiaMatrix {
  public:
    /// Throws std::invalid_argument unless J is symmetric (entrywise within
    /// 1e-12) and positive definite.
    explicit InertiaMatrix(const Mat3& j);

    static InertiaMatrix diagonal(double jx, double jy, double jz);

    const Mat3& matrix() const { return j_; }
    const Mat3& inverse() const { return j_inv_; }

  private:
    Mat3 j_;
    Mat3 j_inv_;
};

struct BodyState {
    UnitQuaternion q;
    Vec3 omega = Vec3::Zero(); // rad/s, body frame
};

/// Advances truth by one step under constant torque tau: omega by classic
/// RK4 over the Euler equations J w' = [J w]x w + tau, attitude by an
/// exponential step at the midpoint angular velocity.
BodyState true_step(const BodyState& state, const InertiaMatrix& j, const Vec3& tau, double dt);

/// S(w) = [J w]x - J [w]x - [w]x J; skew-symmetric for any w (diagnostic).
Mat3 coriolis_s(const Vec3& omega, const InertiaMatrix& j);

struct DesiredState {
    UnitQuaternion q_d;
    Vec3 omega_d = Vec3::Zero();     // rad/s
    Vec3 omega_d_dot = Vec3::Zero(); // rad/s^2
};

/// Reference angular acceleration a_i sin(f_i t + p_i) per axis, with the
/// angular velocity given exactly by the antiderivative
///   w_i(t) = w0_i + (a_i / f_i) (cos p_i - cos(f_i t + p_i)).
class DesiredTrajectory {
  public:
    struct Params {
        Vec3 amplitude{0.03, 0.05, 0.02}; // rad/s^2
        Vec3 frequency{0.3, 0.4, 0.2};    // rad/s
        Vec3 phase{M_PI / 4.0, M_PI / 3.0, M_PI / 2.0};
        Vec3 omega0 = Vec3::Zero();       // rad/s at t = 0
    };

    DesiredTrajectory() = default;
    explicit DesiredTrajectory(const Params& p) : p_(p) {}

    Vec3 omega_dot(double t) const;
    Vec3 omega(double t) const;

    /// Bound used by the boundedness check: sup over t of max(|w_d|, |w_d'|).
    double sup_norm_bound() const;

    /// Advances q_d from t to t + dt with the midpoint angular velocity and
    /// refreshes omega_d / omega_d_dot from the closed forms at t + dt.
    DesiredState step(const DesiredState& state, double t, double dt) const;

    /// State at t = 0 for a given initial attitude.
    DesiredState initial(const UnitQuaternion& qd0) const;

    const Params& params() const { return p_; }

  private:
    Params p_;
};

} // namespace qtrack
