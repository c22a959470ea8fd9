#include "qtrack/ppf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtrack {

double ppf_value(double t, const PpfParams& p) {
    return (p.xi0 - p.xi_inf) * std::exp(-p.ell * t) + p.xi_inf;
}

double constrained_error(double q_tilde0) {
    const double e = (q_tilde0 >= 0.0) ? 1.0 - q_tilde0 : 1.0 + q_tilde0;
    return std::max(e, 0.0); // |q_tilde0| may exceed 1 by rounding
}

double smooth_n(double e_transformed, double delta_lo, double delta_hi) {
    // tanh form avoids overflow for large |E|; the clamp keeps rounding from
    // ever overshooting the asymptotes.
    const double th = std::tanh(e_transformed);
    const double raw = 0.5 * ((delta_hi - delta_lo) + (delta_hi + delta_lo) * th);
    return std::clamp(raw, -delta_lo, delta_hi);
}

static void check_envelope(double x, double delta_lo, double delta_hi) {
    if (!(x > -delta_lo && x < delta_hi)) {
        throw EnvelopeViolation("constrained error ratio " + std::to_string(x) +
                                " outside (-" + std::to_string(delta_lo) + ", " +
                                std::to_string(delta_hi) + ")");
    }
}

double transform(double e, double xi, double delta_lo, double delta_hi) {
    const double x = e / xi;
    check_envelope(x, delta_lo, delta_hi);
    return 0.5 * std::log((delta_lo + x) / (delta_hi - x));
}

double transform(double e, double xi, double delta) {
    return transform(e, xi, delta, delta);
}

double delta_gain(double e, double xi, double delta_lo, double delta_hi) {
    const double x = e / xi;
    check_envelope(x, delta_lo, delta_hi);
    const double half = 0.5 / xi;
    return half / (delta_lo + x) + half / (delta_hi - x);
}

double delta_gain(double e, double xi, double delta) {
    return delta_gain(e, xi, delta, delta);
}

void PpfChannel::update(double t, double q_tilde0, double epsilon_clamp) {
    e = constrained_error(q_tilde0);
    xi = ppf_value(t, params);
    clamped = e > xi;
    if (clamped) {
        xi = e + epsilon_clamp;
    }
    E = transform(e, xi, params.delta);
    Delta = delta_gain(e, xi, params.delta);
}

} // namespace qtrack
