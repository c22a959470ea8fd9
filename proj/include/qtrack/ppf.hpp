#pragma once

#include <stdexcept>

// Prescribed performance machinery: decaying envelope, constrained error,
// the smooth saturation N and its inverse, and the Delta gain. The channel
// wrapper bundles the per-step evaluation (sign disambiguation, envelope
// clamp, transform) shared by the observer and controller channels.

namespace qtrack {

struct PpfParams {
    double xi0 = 1.7;     // envelope start, xi(0)
    double xi_inf = 0.05; // envelope floor
    double ell = 1.0;     // decay rate, 1/s
    double delta = 1.7;   // symmetric saturation bound (lower == upper)
};

struct EnvelopeViolation : std::domain_error {
    using std::domain_error::domain_error;
};

/// Envelope value (xi0 - xi_inf) exp(-ell t) + xi_inf.
double ppf_value(double t, const PpfParams& p);

/// Constrained attitude error from the error-quaternion scalar part:
/// 1 - q0 for q0 >= 0, else 1 + q0 (shorter-cover branch). Result in [0, 1].
double constrained_error(double q_tilde0);

/// Smooth saturation N(E) = (hi e^E - lo e^-E) / (e^E + e^-E); strictly
/// increasing with range (-lo, hi). Equal bounds reduce it to hi*tanh(E).
double smooth_n(double e_transformed, double delta_lo, double delta_hi);

/// Inverse transform E = 1/2 ln((lo + e/xi) / (hi - e/xi)).
/// Throws EnvelopeViolation when e/xi falls outside (-lo, hi).
double transform(double e, double xi, double delta_lo, double delta_hi);
double transform(double e, double xi, double delta);

/// Delta = 1/(2 xi) [1/(lo + e/xi) + 1/(hi - e/xi)]; equals dE/de.
/// Same domain restriction as transform.
double delta_gain(double e, double xi, double delta_lo, double delta_hi);
double delta_gain(double e, double xi, double delta);

/// One error channel's per-step prescribed-performance quantities.
struct PpfChannel {
    PpfParams params;
    double xi = 0.0;    // effective envelope (after clamp, if any)
    double e = 0.0;     // constrained error
    double E = 0.0;     // transformed error
    double Delta = 0.0; // transform slope
    bool clamped = false;

    /// Evaluates the channel at time t for the given error-quaternion scalar:
    /// raw envelope, sign-disambiguated error, clamp to xi = e + epsilon when
    /// the raw envelope is violated, then E and Delta.
    void update(double t, double q_tilde0, double epsilon_clamp);
};

} // namespace qtrack
