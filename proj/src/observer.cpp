#include "qtrack/observer.hpp"

#include <stdexcept>
#include <string>

namespace qtrack {

AttitudeError observation_errors(const UnitQuaternion& q_hat, const UnitQuaternion& q_y) {
    const UnitQuaternion q = quat_product(quat_inverse(q_hat), q_y);
    return {q, quat_to_rotation(q)};
}

CorrectionTerms correction_terms(const AttitudeError& err, double e_transformed,
                                 double delta, const ObserverGains& gains) {
    const UnitQuaternion aligned = shorter_cover(err.q);
    const Vec3 base = (e_transformed * delta + 1.0) * (err.rot * aligned.v);
    return {gains.k_o * base, gains.gamma_o * base};
}

ObserverStepResult observer_step(const ObserverState& state, const UnitQuaternion& q_y,
                                 const Vec3& tau, const InertiaMatrix& j,
                                 const ObserverGains& gains, double t, double dt,
                                 double epsilon_clamp) {
    const AttitudeError err = observation_errors(state.q_hat, q_y);

    ObserverState next = state;
    next.channel.params = gains.ppf;
    next.channel.update(t, err.q.w, epsilon_clamp);

    const CorrectionTerms w = correction_terms(err, next.channel.E, next.channel.Delta, gains);

    const Vec3 tau_obs = err.rot * tau;
    const Mat3 j_obs = err.rot * j.matrix() * err.rot.transpose();

    next.q_hat = quat_exp_step(state.omega_hat + w.w_omega, dt, state.q_hat);
    next.omega_hat = state.omega_hat +
                     dt * (j_obs.inverse() *
                           (skew(j_obs * state.omega_hat) * state.omega_hat + tau_obs +
                            j_obs * skew(state.omega_hat) * w.w_omega + w.w_tau));

    if (!next.q_hat.is_finite() || !next.omega_hat.allFinite()) {
        throw std::runtime_error("observer state became non-finite at t=" + std::to_string(t));
    }
    return {next, err, w};
}

double lyapunov_vo(const UnitQuaternion& q_tilde_o, const Vec3& omega_tilde_o,
                   double e_transformed, const InertiaMatrix& j, double gamma_omega) {
    return e_transformed * e_transformed + (1.0 - q_tilde_o.w) +
           omega_tilde_o.dot(j.matrix() * omega_tilde_o) / (2.0 * gamma_omega);
}

} // namespace qtrack
