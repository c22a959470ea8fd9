#include "qtrack/dynamics.hpp"

#include <stdexcept>

namespace qtrack {

InertiaMatrix::InertiaMatrix(const Mat3& j) : j_(j) {
    if (((j - j.transpose()).cwiseAbs().maxCoeff()) > 1e-12) {
        throw std::invalid_argument("inertia matrix is not symmetric");
    }
    Eigen::LLT<Mat3> llt(j);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("inertia matrix is not positive definite");
    }
    j_inv_ = j.inverse();
}

InertiaMatrix InertiaMatrix::diagonal(double jx, double jy, double jz) {
    return InertiaMatrix(Vec3(jx, jy, jz).asDiagonal());
}

BodyState true_step(const BodyState& state, const InertiaMatrix& j, const Vec3& tau, double dt) {
    const auto deriv = [&](const Vec3& w) -> Vec3 {
        return j.inverse() * (skew(j.matrix() * w) * w + tau);
    };

    const Vec3 k1 = deriv(state.omega);
    const Vec3 k2 = deriv(state.omega + 0.5 * dt * k1);
    const Vec3 k3 = deriv(state.omega + 0.5 * dt * k2);
    const Vec3 k4 = deriv(state.omega + dt * k3);

    BodyState next;
    next.omega = state.omega + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next.q = quat_exp_step(0.5 * (state.omega + next.omega), dt, state.q);
    return next;
}

Mat3 coriolis_s(const Vec3& omega, const InertiaMatrix& j) {
    return skew(j.matrix() * omega) - j.matrix() * skew(omega) - skew(omega) * j.matrix();
}

Vec3 DesiredTrajectory::omega_dot(double t) const {
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        out(i) = p_.amplitude(i) * std::sin(p_.frequency(i) * t + p_.phase(i));
    }
    return out;
}

Vec3 DesiredTrajectory::omega(double t) const {
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        if (p_.frequency(i) == 0.0) {
            // Constant acceleration axis: integral is a*t*sin(phase).
            out(i) = p_.omega0(i) + p_.amplitude(i) * std::sin(p_.phase(i)) * t;
        } else {
            out(i) = p_.omega0(i) + (p_.amplitude(i) / p_.frequency(i)) *
                         (std::cos(p_.phase(i)) - std::cos(p_.frequency(i) * t + p_.phase(i)));
        }
    }
    return out;
}

double DesiredTrajectory::sup_norm_bound() const {
    const double accel = p_.amplitude.norm();
    Vec3 dev;
    for (int i = 0; i < 3; ++i) {
        const double f = p_.frequency(i);
        dev(i) = (f == 0.0) ? 0.0
                            : (p_.amplitude(i) / f) * (1.0 + std::abs(std::cos(p_.phase(i))));
    }
    const double vel = p_.omega0.norm() + dev.norm();
    return std::max(accel, vel);
}

DesiredState DesiredTrajectory::step(const DesiredState& state, double t, double dt) const {
    DesiredState next;
    next.q_d = quat_exp_step(omega(t + 0.5 * dt), dt, state.q_d);
    next.omega_d = omega(t + dt);
    next.omega_d_dot = omega_dot(t + dt);
    return next;
}

DesiredState DesiredTrajectory::initial(const UnitQuaternion& qd0) const {
    return {qd0, omega(0.0), omega_dot(0.0)};
}

} // namespace qtrack
