#pragma once

#include "qtrack/dynamics.hpp"
#include "qtrack/ppf.hpp"
#include "qtrack/quat.hpp"

// Full-state observer on S^3 x R^3. It sees only the reconstructed attitude
// Q_y and the applied torque; angular velocity is never measured. The
// correction factors are scaled by the prescribed-performance quantities of
// the observation error channel.

namespace qtrack {

struct ObserverGains {
    double k_o = 10.0;        // attitude correction gain
    double gamma_o = 0.1;     // velocity correction gain
    double gamma_omega = 1.0; // Lyapunov weight (diagnostic only)
    PpfParams ppf;            // observation error channel
};

struct ObserverState {
    UnitQuaternion q_hat;
    Vec3 omega_hat = Vec3::Zero();
    PpfChannel channel;
};

struct AttitudeError {
    UnitQuaternion q;
    Mat3 rot;
};

/// Observation error Q_hat^-1 * Q_y and its rotation matrix.
AttitudeError observation_errors(const UnitQuaternion& q_hat, const UnitQuaternion& q_y);

struct CorrectionTerms {
    Vec3 w_omega; // kinematic correction, k_o (E D + 1) R(Qe) qe
    Vec3 w_tau;   // dynamic correction, same direction scaled gamma_o / k_o
};

/// Correction factors from the observation error. The error quaternion is
/// taken on its shorter cover, so the induced rotation of the estimate
/// reduces the disambiguated error 1 - |qe0| regardless of which pole the
/// error currently sits near.
CorrectionTerms correction_terms(const AttitudeError& err, double e_transformed,
                                 double delta, const ObserverGains& gains);

struct ObserverStepResult {
    ObserverState next;        // advanced state; next.channel holds e, xi, E, Delta
    AttitudeError error;       // raw observation error (scalar part not flipped)
    CorrectionTerms correction;
};

/// One discrete observer update: PPF channel at time t from the scalar of
/// Q_hat^-1 * Q_y (sign-disambiguated, clamped), correction factors from the
/// shorter-cover error quaternion, exponential attitude step with
/// omega_hat + W_Omega, and a forward-Euler velocity step with the inertia
/// and torque expressed in the observer frame.
/// Throws std::runtime_error if the updated state is not finite.
ObserverStepResult observer_step(const ObserverState& state, const UnitQuaternion& q_y,
                                 const Vec3& tau, const InertiaMatrix& j,
                                 const ObserverGains& gains, double t, double dt,
                                 double epsilon_clamp);

/// V_o = E_o^2 + (1 - qe0) + Omega_err^T J Omega_err / (2 gamma_omega).
double lyapunov_vo(const UnitQuaternion& q_tilde_o, const Vec3& omega_tilde_o,
                   double e_transformed, const InertiaMatrix& j, double gamma_omega);

} // namespace qtrack
