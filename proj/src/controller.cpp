#include "qtrack/controller.hpp"

namespace qtrack {

ControlErrors control_errors(const UnitQuaternion& q_hat, const UnitQuaternion& q_a,
                             const UnitQuaternion& q_d) {
    const UnitQuaternion q_tilde_c = quat_product(quat_inverse(q_d), q_hat);
    const UnitQuaternion q_tilde_a = quat_product(quat_inverse(q_a), q_tilde_c);
    return {q_tilde_c, q_tilde_a};
}

Vec3 auxiliary_rate(const UnitQuaternion& q_tilde_a, double e_transformed, double delta,
                    const ControllerGains& gains) {
    const UnitQuaternion aligned = shorter_cover(q_tilde_a);
    return gains.k_beta * (e_transformed * delta + 1.0) *
           (quat_to_rotation(aligned).transpose() * aligned.v);
}

AuxiliaryStepResult auxiliary_step(const ControllerState& state,
                                   const UnitQuaternion& q_tilde_a, double e_transformed,
                                   double delta, const ControllerGains& gains, double dt) {
    const Vec3 beta_a = auxiliary_rate(q_tilde_a, e_transformed, delta, gains);
    ControllerState next = state;
    next.q_a = quat_exp_step(beta_a, dt, state.q_a);
    return {next, beta_a};
}

TorqueCommand control_torque(const UnitQuaternion& q_tilde_o, const UnitQuaternion& q_tilde_c,
                             const UnitQuaternion& q_tilde_a, double e_transformed,
                             double delta, const Vec3& omega_hat, const Vec3& omega_d,
                             const Vec3& omega_d_dot, const InertiaMatrix& j,
                             const ControllerGains& gains) {
    const Mat3 rot_o_t = quat_to_rotation(q_tilde_o).transpose();
    const Mat3 rot_c_t = quat_to_rotation(q_tilde_c).transpose();
    const Vec3 omega_d_c = rot_c_t * omega_d;

    TorqueCommand cmd;
    cmd.w_c = gains.k_w * (e_transformed * delta * shorter_cover(q_tilde_a).v +
                           shorter_cover(q_tilde_c).v);
    cmd.correction_term = -cmd.w_c;
    cmd.velocity_term = -gains.k_c * (rot_o_t * omega_hat - omega_d_c);
    cmd.gyroscopic_term = skew(omega_d_c) * (j.matrix() * omega_d_c);
    cmd.feedforward_term = j.matrix() * (rot_c_t * omega_d_dot);
    cmd.tau = cmd.correction_term + cmd.velocity_term + cmd.gyroscopic_term +
              cmd.feedforward_term;
    return cmd;
}

double lyapunov_lc(double e_transformed, double q_tilde_c0, const Vec3& omega_tilde_c,
                   const InertiaMatrix& j, double k_w) {
    return e_transformed * e_transformed + 2.0 * (1.0 - q_tilde_c0) +
           omega_tilde_c.dot(j.matrix() * omega_tilde_c) / (2.0 * k_w);
}

} // namespace qtrack
