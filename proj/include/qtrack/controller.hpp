#pragma once

#include "qtrack/dynamics.hpp"
#include "qtrack/observer.hpp"
#include "qtrack/ppf.hpp"
#include "qtrack/quat.hpp"

// Observer-based tracking controller. The tracking error is formed from the
// attitude estimate (never the true attitude); an auxiliary quaternion with
// its own exponential dynamics shapes the prescribed-performance channel.

namespace qtrack {

struct ControllerGains {
    double k_w = 1.0;    // correction factor gain
    double k_c = 0.1;    // velocity feedback gain
    double k_beta = 0.1; // auxiliary dynamics gain
    PpfParams ppf;       // auxiliary error channel
};

struct ControllerState {
    UnitQuaternion q_a; // auxiliary quaternion
    PpfChannel channel;
};

struct ControlErrors {
    UnitQuaternion q_tilde_c; // Q_d^-1 * Q_hat, estimate-based tracking error
    UnitQuaternion q_tilde_a; // Q_a^-1 * q_tilde_c
};

ControlErrors control_errors(const UnitQuaternion& q_hat, const UnitQuaternion& q_a,
                             const UnitQuaternion& q_d);

/// Auxiliary rate k_beta (E D + 1) R(Qa_err)^T qa_err, with the error taken
/// on its shorter cover so Q_a chases the tracking error the short way.
Vec3 auxiliary_rate(const UnitQuaternion& q_tilde_a, double e_transformed, double delta,
                    const ControllerGains& gains);

struct AuxiliaryStepResult {
    ControllerState next;
    Vec3 beta_a;
};

/// Advances Q_a by an exponential step with the auxiliary rate.
AuxiliaryStepResult auxiliary_step(const ControllerState& state,
                                   const UnitQuaternion& q_tilde_a, double e_transformed,
                                   double delta, const ControllerGains& gains, double dt);

struct TorqueCommand {
    Vec3 tau;
    Vec3 w_c;              // k_w (E D qa_err + qc_err), shorter-cover errors
    Vec3 correction_term;  // -W_c
    Vec3 velocity_term;    // -k_c (R(Qo_err)^T omega_hat - R(Qc_err)^T omega_d)
    Vec3 gyroscopic_term;  // [R^T w_d]x J R^T w_d
    Vec3 feedforward_term; // J R^T w_d_dot
};

/// Control torque; the four summands are returned individually. Both error
/// quaternions feeding the correction factor are taken on their shorter
/// cover so the torque regulates toward the nearer of the two equilibria.
TorqueCommand control_torque(const UnitQuaternion& q_tilde_o, const UnitQuaternion& q_tilde_c,
                             const UnitQuaternion& q_tilde_a, double e_transformed,
                             double delta, const Vec3& omega_hat, const Vec3& omega_d,
                             const Vec3& omega_d_dot, const InertiaMatrix& j,
                             const ControllerGains& gains);

/// L_c = E_a^2 + 2 (1 - qc0) + Omega_err^T J Omega_err / (2 k_w).
double lyapunov_lc(double e_transformed, double q_tilde_c0, const Vec3& omega_tilde_c,
                   const InertiaMatrix& j, double k_w);

} // namespace qtrack
