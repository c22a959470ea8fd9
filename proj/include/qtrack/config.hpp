#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qtrack/controller.hpp"
#include "qtrack/dynamics.hpp"
#include "qtrack/observer.hpp"
#include "qtrack/quat.hpp"

namespace qtrack {

inline constexpr std::string_view kToolVersion = "qtrack 0.1.0";

/// Full simulation configuration. Defaults reproduce the reference
/// experiment: 200 Hz, 30 s, two noisy vector measurements, a tumbling
/// initial state far from the identity-initialized estimator and reference.
struct SimConfig {
    double dt = 0.005;      // s
    double duration = 30.0; // s
    std::uint64_t seed = 42;
    double noise_std = 0.08;

    std::vector<Vec3> inertial_refs{Vec3(1.0, 1.2, 1.3), Vec3(0.0, 0.0, 1.0)};
    Mat3 J = Vec3(0.016, 0.015, 0.03).asDiagonal();

    UnitQuaternion Q0{0.0087, 0.3906, 0.1302, 0.9113}; // normalized on use
    UnitQuaternion Qd0;
    UnitQuaternion Qa0;
    UnitQuaternion Qhat0;
    Vec3 Omega0{0.2, 0.3, 0.3};
    Vec3 Omega_hat0 = Vec3::Zero();
    Vec3 Omega_d0 = Vec3::Zero();

    double k_o = 10.0;
    double gamma_o = 0.1;
    double gamma_Omega = 1.0;
    double k_w = 1.0;
    double k_c = 0.1;
    double k_beta = 0.1;

    double xi0_o = 1.7;
    double xi_inf_o = 0.05;
    double ell_o = 1.0;
    double delta_o = 1.7;
    double xi0_a = 1.7;
    double xi_inf_a = 0.05;
    double ell_a = 1.0;
    double delta_a = 1.7;

    double epsilon_clamp = 1e-3;
    int substeps = 1;        // truth RK4 substeps per control period
    double tau_limit = 0.0;  // 0 disables the experimental torque clamp
    double c_d = 0.3;        // reference-trajectory boundedness threshold

    Vec3 traj_amplitude{0.03, 0.05, 0.02};
    Vec3 traj_frequency{0.3, 0.4, 0.2};
    Vec3 traj_phase{M_PI / 4.0, M_PI / 3.0, M_PI / 2.0};

    ObserverGains observer_gains() const;
    ControllerGains controller_gains() const;
    DesiredTrajectory::Params trajectory_params() const;
    InertiaMatrix inertia() const { return InertiaMatrix(J); }
};

/// Parses the flat key-value config format: one `key = value` per line,
/// `#` comments, scalars, `[..]` vectors, and `[[..],..]` vector lists.
/// Unknown keys and malformed values raise std::invalid_argument. Keys not
/// present keep their defaults.
SimConfig parse_config_file(const std::string& path);
SimConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical text form of a config (parseable by parse_config_text); key
/// order is fixed and floats use shortest round-trip formatting, so equal
/// configs serialize identically.
std::string canonical_config_text(const SimConfig& cfg);

/// FNV-1a 64 over the canonical text.
std::uint64_t config_hash(const SimConfig& cfg);

struct ValidationReport {
    std::vector<std::string> errors;   // config is unusable
    std::vector<std::string> warnings; // stated design conditions not met
    bool ok() const { return errors.empty(); }
    std::string to_string() const;
};

/// Checks positivity of every gain, the envelope/saturation conditions
/// against the actual initial errors, reference-vector rank, inertia
/// validity, and step sizing. Gain inequalities that come from the
/// convergence analysis rather than the design itself are warnings.
ValidationReport validate(const SimConfig& cfg);

} // namespace qtrack
