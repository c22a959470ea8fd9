#include "qtrack/sim.hpp"

#include <cmath>
#include <iostream>

#include "qtrack/sensing.hpp"

namespace qtrack {

std::size_t step_count(const SimConfig& cfg) {
    return static_cast<std::size_t>(std::ceil(cfg.duration / cfg.dt));
}

std::vector<SimLogRecord> run(const SimConfig& cfg,
                              const std::vector<UnitQuaternion>* qy_override) {
    const ValidationReport rep = validate(cfg);
    if (!rep.ok()) {
        throw std::invalid_argument("invalid configuration:\n" + rep.to_string());
    }

    const InertiaMatrix inertia = cfg.inertia();
    const ObserverGains obs_gains = cfg.observer_gains();
    const ControllerGains ctrl_gains = cfg.controller_gains();
    const DesiredTrajectory trajectory(cfg.trajectory_params());

    BodyState truth{cfg.Q0.normalized(), cfg.Omega0};
    DesiredState desired = trajectory.initial(cfg.Qd0.normalized());
    ObserverState obs{cfg.Qhat0.normalized(), cfg.Omega_hat0, PpfChannel{obs_gains.ppf}};
    ControllerState ctrl{cfg.Qa0.normalized(), PpfChannel{ctrl_gains.ppf}};

    NoiseModel noise(cfg.noise_std, cfg.seed);
    Vec3 tau_prev = Vec3::Zero();

    const std::size_t n = step_count(cfg);
    if (qy_override != nullptr && qy_override->size() < n) {
        throw std::invalid_argument("qy_override shorter than the run");
    }

    std::vector<SimLogRecord> log;
    log.reserve(n);
    bool warned_c_d = false;

    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        SimLogRecord rec;
        rec.k = static_cast<std::int64_t>(k);
        rec.t = t;
        rec.q = truth.q;
        rec.omega = truth.omega;
        rec.q_d = desired.q_d;
        rec.omega_d = desired.omega_d;
        rec.q_hat = obs.q_hat;
        rec.omega_hat = obs.omega_hat;
        rec.q_a = ctrl.q_a;

        if (!warned_c_d &&
            (desired.omega_d.norm() > cfg.c_d || desired.omega_d_dot.norm() > cfg.c_d)) {
            warned_c_d = true;
            std::cerr << "warning: reference trajectory exceeded c_d = " << cfg.c_d
                      << " at t = " << t << "\n";
        }

        // Measurement and reconstruction.
        UnitQuaternion q_y;
        if (qy_override != nullptr) {
            q_y = (*qy_override)[k];
        } else {
            auto pairs = synthesize(truth.q, cfg.inertial_refs, noise);
            if (pairs.size() == 2) {
                pairs = augment_third(pairs);
            }
            q_y = reconstruct(pairs);
        }
        rec.q_y = q_y;

        // Observer update; its channel holds e_o, xi_o, E_o, Delta_o.
        ObserverStepResult ostep;
        try {
            ostep = observer_step(obs, q_y, tau_prev, inertia, obs_gains, t, cfg.dt,
                                  cfg.epsilon_clamp);
        } catch (const std::exception& e) {
            throw NumericalAbort(std::string(e.what()) + " (last good step " +
                                     std::to_string(k == 0 ? 0 : k - 1) + ")",
                                 k == 0 ? 0 : k - 1);
        }
        const PpfChannel& ch_o = ostep.next.channel;
        rec.q_tilde_o0 = ostep.error.q.w;
        rec.q_tilde_o_norm = ostep.error.q.v.norm();
        rec.e_o = ch_o.e;
        rec.xi_o = ch_o.xi;
        rec.E_o = ch_o.E;
        rec.Delta_o = ch_o.Delta;
        rec.clamp_active_o = ch_o.clamped;
        rec.w_omega = ostep.correction.w_omega;
        rec.w_tau = ostep.correction.w_tau;

        // Controller: errors from the estimate, auxiliary channel, torque.
        const ControlErrors errs = control_errors(obs.q_hat, ctrl.q_a, desired.q_d);
        rec.q_tilde_c0 = errs.q_tilde_c.w;
        rec.q_tilde_c_norm = errs.q_tilde_c.v.norm();
        rec.q_tilde_a0 = errs.q_tilde_a.w;
        rec.q_tilde_a_norm = errs.q_tilde_a.v.norm();

        ctrl.channel.update(t, errs.q_tilde_a.w, cfg.epsilon_clamp);
        rec.e_a = ctrl.channel.e;
        rec.xi_a = ctrl.channel.xi;
        rec.E_a = ctrl.channel.E;
        rec.Delta_a = ctrl.channel.Delta;
        rec.clamp_active_a = ctrl.channel.clamped;

        const AuxiliaryStepResult astep = auxiliary_step(
            ctrl, errs.q_tilde_a, ctrl.channel.E, ctrl.channel.Delta, ctrl_gains, cfg.dt);
        rec.beta_a = astep.beta_a;

        TorqueCommand cmd = control_torque(ostep.error.q, errs.q_tilde_c, errs.q_tilde_a,
                                           ctrl.channel.E, ctrl.channel.Delta, obs.omega_hat,
                                           desired.omega_d, desired.omega_d_dot, inertia,
                                           ctrl_gains);
        if (cfg.tau_limit > 0.0 && cmd.tau.norm() > cfg.tau_limit) {
            cmd.tau *= cfg.tau_limit / cmd.tau.norm();
        }
        rec.w_c = cmd.w_c;
        rec.tau = cmd.tau;

        // Truth-referenced diagnostics; estimates never see these.
        const UnitQuaternion q_tilde_o_truth = quat_product(quat_inverse(obs.q_hat), truth.q);
        const UnitQuaternion q_tilde_c_truth = quat_product(quat_inverse(desired.q_d), truth.q);
        const Vec3 omega_tilde_o =
            truth.omega - quat_to_rotation(q_tilde_o_truth).transpose() * obs.omega_hat;
        const Vec3 omega_tilde_c =
            truth.omega - quat_to_rotation(q_tilde_c_truth).transpose() * desired.omega_d;
        rec.omega_tilde_o_norm = omega_tilde_o.norm();
        rec.omega_tilde_c_norm = omega_tilde_c.norm();
        // Diagnostics use the disambiguated scalars so both double-cover
        // equilibria count as converged.
        rec.v_o = lyapunov_vo(shorter_cover(ostep.error.q), omega_tilde_o, ch_o.E, inertia,
                              obs_gains.gamma_omega);
        rec.l_c = lyapunov_lc(ctrl.channel.E, shorter_cover(errs.q_tilde_c).w, omega_tilde_c,
                              inertia, ctrl_gains.k_w);

        if (!rec.tau.allFinite() || !truth.q.is_finite() || !truth.omega.allFinite()) {
            throw NumericalAbort("simulation state became non-finite (last good step " +
                                     std::to_string(k == 0 ? 0 : k - 1) + ")",
                                 k == 0 ? 0 : k - 1);
        }
        log.push_back(rec);

        // Plant and reference advance; torque held for the whole period.
        const double sub_dt = cfg.dt / cfg.substeps;
        for (int s = 0; s < cfg.substeps; ++s) {
            truth = true_step(truth, inertia, cmd.tau, sub_dt);
        }
        desired = trajectory.step(desired, t, cfg.dt);
        obs = ostep.next;
        ctrl = astep.next;
        tau_prev = cmd.tau;
    }
    return log;
}

} // namespace qtrack
