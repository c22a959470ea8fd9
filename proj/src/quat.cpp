#include "qtrack/quat.hpp"

#include <cmath>
#include <stdexcept>

namespace qtrack {

UnitQuaternion UnitQuaternion::from_components(double w_, double x, double y, double z) {
    UnitQuaternion q(w_, x, y, z);
    const double n = q.norm();
    if (!(n > 1e-12)) {
        throw std::invalid_argument("quaternion norm is numerically zero");
    }
    return {q.w / n, q.v / n};
}

UnitQuaternion UnitQuaternion::normalized() const {
    const double n = norm();
    return {w / n, v / n};
}

UnitQuaternion UnitQuaternion::from_vec4_normalized(const Vec4& q) {
    return from_components(q(0), q(1), q(2), q(3));
}

UnitQuaternion quat_product(const UnitQuaternion& a, const UnitQuaternion& b) {
    UnitQuaternion out(a.w * b.w - a.v.dot(b.v),
                       a.w * b.v + b.w * a.v + a.v.cross(b.v));
    return out.normalized();
}

UnitQuaternion quat_inverse(const UnitQuaternion& q) {
    return {q.w, -q.v};
}

Mat3 quat_to_rotation(const UnitQuaternion& q) {
    return (q.w * q.w - q.v.squaredNorm()) * Mat3::Identity()
         + 2.0 * (q.v * q.v.transpose())
         + 2.0 * q.w * skew(q.v);
}

Mat3 skew(const Vec3& v) {
    Mat3 m;
    m <<    0.0, -v.z(),  v.y(),
          v.z(),    0.0, -v.x(),
         -v.y(),  v.x(),    0.0;
    return m;
}

Mat4 gamma_matrix(const Vec3& omega) {
    Mat4 g = Mat4::Zero();
    g.block<1, 3>(0, 1) = -omega.transpose();
    g.block<3, 1>(1, 0) = omega;
    g.block<3, 3>(1, 1) = -skew(omega);
    return g;
}

UnitQuaternion quat_exp_step(const Vec3& omega, double dt, const UnitQuaternion& q) {
    const double speed = omega.norm();
    const double theta = 0.5 * speed * dt;

    // exp(Gamma(w) dt / 2) Q == Q * [cos(theta), sin(theta) w/|w|] since
    // Gamma(w)^2 = -|w|^2 I. The series branch keeps sin(theta)/|w|
    // well-defined as |w| -> 0.
    UnitQuaternion inc;
    if (speed * dt < 1e-8) {
        const double half_dt = 0.5 * dt;
        inc = UnitQuaternion(1.0 - 0.5 * theta * theta,
                             omega * (half_dt * (1.0 - theta * theta / 6.0)));
    } else {
        inc = UnitQuaternion(std::cos(theta), omega * (std::sin(theta) / speed));
    }
    return quat_product(q, inc);
}

Vec3 rotate_vector(const UnitQuaternion& q, const Vec3& v) {
    // q^-1 * [0, v] * q expanded; equals R(q)^T v.
    const UnitQuaternion qi = quat_inverse(q);
    const double pw = -qi.v.dot(v);
    const Vec3 pv = qi.w * v + qi.v.cross(v);
    return pw * q.v + q.w * pv + pv.cross(q.v);
}

double geodesic_angle(const UnitQuaternion& a, const UnitQuaternion& b) {
    const UnitQuaternion d = quat_product(quat_inverse(a), b);
    return 2.0 * std::atan2(d.v.norm(), std::abs(d.w));
}

double geodesic_angle(const Mat3& r1, const Mat3& r2) {
    const Mat3 d = r1.transpose() * r2;
    const double c = std::clamp(0.5 * (d.trace() - 1.0), -1.0, 1.0);
    return std::acos(c);
}

double verify_kinematics_convention() {
    // Deterministic non-degenerate samples; no RNG so this is safe to call
    // before any seeding happens.
    const UnitQuaternion qs[] = {
        UnitQuaternion::from_components(1.0, 0.0, 0.0, 0.0),
        UnitQuaternion::from_components(0.3, -0.4, 0.5, 0.7),
        UnitQuaternion::from_components(-0.8, 0.1, 0.55, -0.2),
    };
    const Vec3 ws[] = {Vec3(0.0, 0.0, 0.0), Vec3(1.0, -2.0, 0.5), Vec3(-0.3, 0.9, 2.2)};

    double worst = 0.0;
    for (const auto& q : qs) {
        for (const auto& w : ws) {
            const Vec4 lhs = gamma_matrix(w) * q.as_vec4();
            // Raw Hamilton product q * [0, w], no renormalization.
            const double rw = -q.v.dot(w);
            const Vec3 rv = q.w * w + q.v.cross(w);
            const Vec4 rhs(rw, rv.x(), rv.y(), rv.z());
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

} // namespace qtrack
