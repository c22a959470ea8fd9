#include <cmath>
#include <random>

#include <doctest.h>

#include "qtrack/dynamics.hpp"
#include "test_util.hpp"

using namespace qtrack;
using qtrack::testing::random_vec3;

namespace {
InertiaMatrix reference_inertia() { return InertiaMatrix::diagonal(0.016, 0.015, 0.03); }
} // namespace

TEST_CASE("inertia construction rejects bad matrices") {
    Mat3 asym = Mat3::Identity();
    asym(0, 1) = 1e-6;
    CHECK_THROWS_AS(InertiaMatrix{asym}, std::invalid_argument);

    CHECK_THROWS_AS(InertiaMatrix::diagonal(1.0, -0.1, 1.0), std::invalid_argument);

    const InertiaMatrix j = reference_inertia();
    CHECK((j.matrix() * j.inverse() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("rest state with zero torque stays at rest") {
    const BodyState s0{UnitQuaternion::from_components(0.5, 0.5, -0.5, 0.5), Vec3::Zero()};
    const BodyState s1 = true_step(s0, reference_inertia(), Vec3::Zero(), 0.01);
    CHECK(s1.omega.norm() == 0.0);
    CHECK(geodesic_angle(s0.q, s1.q) < 1e-15);
}

TEST_CASE("spherical inertia conserves the spin vector") {
    const InertiaMatrix j = InertiaMatrix::diagonal(0.02, 0.02, 0.02);
    BodyState s{UnitQuaternion::identity(), Vec3(0.4, -0.2, 0.7)};
    const double w0 = s.omega.norm();
    for (int i = 0; i < 1000; ++i) {
        s = true_step(s, j, Vec3::Zero(), 0.005);
    }
    CHECK(std::abs(s.omega.norm() - w0) < 1e-9);
}

TEST_CASE("torque-free motion conserves energy and momentum magnitude") {
    const InertiaMatrix j = reference_inertia();
    BodyState s{UnitQuaternion::identity(), Vec3(0.2, 0.3, 0.3)};
    const double energy0 = 0.5 * s.omega.dot(j.matrix() * s.omega);
    const double momentum0 = (j.matrix() * s.omega).norm();
    for (int i = 0; i < 10000; ++i) {
        s = true_step(s, j, Vec3::Zero(), 1e-4); // 1 s total
    }
    const double energy = 0.5 * s.omega.dot(j.matrix() * s.omega);
    const double momentum = (j.matrix() * s.omega).norm();
    CHECK(std::abs(energy - energy0) / energy0 < 1e-7);
    CHECK(std::abs(momentum - momentum0) / momentum0 < 1e-7);
}

TEST_CASE("coriolis matrix is skew and matches its definition") {
    const InertiaMatrix j = reference_inertia();
    CHECK(coriolis_s(Vec3::Zero(), j).cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(21);
    for (int i = 0; i < 500; ++i) {
        const Vec3 w = random_vec3(rng, 3.0);
        const Mat3 s = coriolis_s(w, j);
        CHECK((s + s.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        const Vec3 x = random_vec3(rng, 2.0);
        CHECK(std::abs(x.dot(s * x)) < 1e-12);

        // three-term definition, assembled independently
        const Mat3 direct =
            skew(j.matrix() * w) - j.matrix() * skew(w) - skew(w) * j.matrix();
        CHECK((s - direct).cwiseAbs().maxCoeff() == 0.0);
    }

    // with spherical inertia, S(w) reduces to -[w]x scaled by the inertia
    const InertiaMatrix ji = InertiaMatrix::diagonal(1.0, 1.0, 1.0);
    const Vec3 w(0.3, -0.6, 0.9);
    CHECK((coriolis_s(w, ji) + skew(w)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("reference acceleration at t = 0") {
    const DesiredTrajectory traj{DesiredTrajectory::Params{}};
    const Vec3 a0 = traj.omega_dot(0.0);
    CHECK(a0.x() == doctest::Approx(0.03 * std::sin(M_PI / 4.0)).epsilon(1e-15));
    CHECK(a0.y() == doctest::Approx(0.05 * std::sin(M_PI / 3.0)).epsilon(1e-15));
    CHECK(a0.z() == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(a0.x() == doctest::Approx(0.02121).epsilon(1e-3));
    CHECK(a0.y() == doctest::Approx(0.04330).epsilon(1e-3));
}

TEST_CASE("zero-amplitude trajectory keeps the attitude constant") {
    DesiredTrajectory::Params p;
    p.amplitude = Vec3::Zero();
    const DesiredTrajectory traj{p};
    DesiredState s = traj.initial(UnitQuaternion::identity());
    for (int k = 0; k < 200; ++k) {
        s = traj.step(s, k * 0.005, 0.005);
    }
    CHECK(geodesic_angle(s.q_d, UnitQuaternion::identity()) == 0.0);
    CHECK(s.omega_d.norm() == 0.0);
}

TEST_CASE("closed-form angular velocity matches RK4 integration of the rate") {
    const DesiredTrajectory traj{DesiredTrajectory::Params{}};
    Vec3 w = traj.omega(0.0);
    const double dt = 1e-3;
    double worst = 0.0;
    for (int k = 0; k < 30000; ++k) { // 30 s
        const double t = k * dt;
        const Vec3 k1 = traj.omega_dot(t);
        const Vec3 k2 = traj.omega_dot(t + 0.5 * dt);
        const Vec3 k4 = traj.omega_dot(t + dt);
        w += (dt / 6.0) * (k1 + 4.0 * k2 + k4); // Simpson form, scalar ODE
        worst = std::max(worst, (w - traj.omega(t + dt)).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("reference trajectory stays within its stated bounds over 30 s") {
    const DesiredTrajectory traj{DesiredTrajectory::Params{}};
    const Vec3 w0 = traj.omega(0.0);
    for (double t = 0.0; t <= 30.0; t += 0.002) {
        CHECK(traj.omega_dot(t).norm() <= 0.0617);
        CHECK((traj.omega(t) - w0).norm() <= 0.26);
    }
    CHECK(traj.sup_norm_bound() < 0.3);
}
