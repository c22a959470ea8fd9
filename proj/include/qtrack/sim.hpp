#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qtrack/config.hpp"

// Discrete closed-loop driver. Each control period: synthesize vector
// measurements from truth, reconstruct Q_y, run the observer and controller
// updates, then advance the true plant under the just-computed torque
// (zero-order hold). The observer/controller side sees only Q_y and tau;
// true Q and Omega appear in the log purely as diagnostics.

namespace qtrack {

/// One control period of every quantity the loop touches. Quaternions are
/// scalar-first; *_raw scalars are taken before sign disambiguation.
struct SimLogRecord {
    std::int64_t k = 0;
    double t = 0.0;
    UnitQuaternion q;      // truth
    Vec3 omega;            // truth, rad/s
    UnitQuaternion q_d;
    Vec3 omega_d;
    UnitQuaternion q_y;    // reconstructed measurement
    UnitQuaternion q_hat;  // observer attitude estimate
    Vec3 omega_hat;
    UnitQuaternion q_a;    // auxiliary quaternion
    double q_tilde_o0 = 0.0, q_tilde_o_norm = 0.0;
    double q_tilde_c0 = 0.0, q_tilde_c_norm = 0.0;
    double q_tilde_a0 = 0.0, q_tilde_a_norm = 0.0;
    double e_o = 0.0, xi_o = 0.0, E_o = 0.0, Delta_o = 0.0;
    double e_a = 0.0, xi_a = 0.0, E_a = 0.0, Delta_a = 0.0;
    Vec3 w_omega;   // observer kinematic correction
    Vec3 w_tau;     // observer dynamic correction
    Vec3 beta_a;    // auxiliary rate
    Vec3 w_c;       // controller correction factor
    Vec3 tau;       // applied torque
    double omega_tilde_o_norm = 0.0; // |Omega - R(Qo_err)^T omega_hat|, truth-referenced
    double omega_tilde_c_norm = 0.0; // |Omega - R(Qc_err)^T omega_d|, truth-referenced
    double v_o = 0.0;                // observer Lyapunov diagnostic
    double l_c = 0.0;                // controller Lyapunov diagnostic
    bool clamp_active_o = false;
    bool clamp_active_a = false;
};

struct NumericalAbort : std::runtime_error {
    std::size_t last_good_step;
    NumericalAbort(const std::string& what, std::size_t step)
        : std::runtime_error(what), last_good_step(step) {}
};

/// Runs the closed loop for ceil(duration/dt) steps. Throws
/// std::invalid_argument if validate(cfg) reports errors and NumericalAbort
/// if the state stops being finite.
///
/// When qy_override is given, measurement synthesis and reconstruction are
/// bypassed and Q_y[k] is read from it instead; everything driven by truth
/// alone (the override source aside) still evolves. Used to demonstrate that
/// the torque sequence depends on truth only through Q_y.
std::vector<SimLogRecord> run(const SimConfig& cfg,
                              const std::vector<UnitQuaternion>* qy_override = nullptr);

/// Number of records run(cfg) produces.
std::size_t step_count(const SimConfig& cfg);

} // namespace qtrack
