#include <doctest.h>

#include "qtrack/quat.hpp"
#include "test_util.hpp"

using namespace qtrack;
using qtrack::testing::random_quat;
using qtrack::testing::random_vec3;

namespace {

// Independent oracle: truncated series of exp(M) applied to a 4-vector.
Vec4 series_exp_apply(const Mat4& m, const Vec4& q, int terms) {
    Vec4 acc = q;
    Vec4 term = q;
    for (int n = 1; n <= terms; ++n) {
        term = (m * term) / static_cast<double>(n);
        acc += term;
    }
    return acc;
}

} // namespace

TEST_CASE("product identity and inverse") {
    std::mt19937_64 rng(1);
    const UnitQuaternion qi = UnitQuaternion::identity();
    for (int i = 0; i < 100; ++i) {
        const UnitQuaternion q = random_quat(rng);
        const UnitQuaternion left = quat_product(qi, q);
        CHECK(left.w == doctest::Approx(q.w).epsilon(1e-12));
        CHECK((left.v - q.v).norm() < 1e-12);

        const UnitQuaternion qq = quat_product(q, quat_inverse(q));
        CHECK(qq.w == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(qq.v.norm() < 1e-12);
    }
}

TEST_CASE("inverse flips the vector part") {
    const UnitQuaternion a = quat_inverse({1.0, 0.0, 0.0, 0.0});
    CHECK(a.w == 1.0);
    CHECK(a.v == Vec3::Zero());
    const UnitQuaternion b = quat_inverse({0.0, 1.0, 0.0, 0.0});
    CHECK(b.w == 0.0);
    CHECK(b.v == Vec3(-1.0, 0.0, 0.0));
}

TEST_CASE("rotation homomorphism and inverse law over 1000 pairs") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1000; ++i) {
        const UnitQuaternion q1 = random_quat(rng);
        const UnitQuaternion q2 = random_quat(rng);
        const Mat3 composed = quat_to_rotation(quat_product(q1, q2));
        const Mat3 oracle = quat_to_rotation(q1) * quat_to_rotation(q2);
        CHECK((composed - oracle).cwiseAbs().maxCoeff() < 1e-9);

        const Mat3 inv = quat_to_rotation(quat_inverse(q1));
        CHECK((inv - quat_to_rotation(q1).transpose()).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("rotation map fixed points") {
    CHECK((quat_to_rotation({1.0, 0.0, 0.0, 0.0}) - Mat3::Identity()).norm() == 0.0);
    CHECK((quat_to_rotation({-1.0, 0.0, 0.0, 0.0}) - Mat3::Identity()).norm() == 0.0);

    const Mat3 half_turn_x = quat_to_rotation({0.0, 1.0, 0.0, 0.0});
    Mat3 expected;
    expected << 1, 0, 0, 0, -1, 0, 0, 0, -1;
    CHECK((half_turn_x - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rotation matrices are orthonormal with unit determinant") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const Mat3 r = quat_to_rotation(random_quat(rng));
        CHECK((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("double cover: R(-Q) equals R(Q) exactly") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        const UnitQuaternion q = random_quat(rng);
        CHECK((quat_to_rotation(q) - quat_to_rotation(-q)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("skew matrix represents the cross product") {
    CHECK(skew(Vec3::Zero()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((skew(Vec3(1, 0, 0)) * Vec3(0, 1, 0) - Vec3(0, 0, 1)).norm() == 0.0);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 v = random_vec3(rng, 5.0);
        const Vec3 y = random_vec3(rng, 5.0);
        CHECK((skew(v) * y - v.cross(y)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((skew(v).transpose() + skew(v)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("gamma matrix structure") {
    CHECK(gamma_matrix(Vec3::Zero()).cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(6);
    for (int i = 0; i < 500; ++i) {
        const Vec3 w = random_vec3(rng, 3.0);
        const Mat4 g = gamma_matrix(w);
        CHECK((g + g.transpose()).cwiseAbs().maxCoeff() == 0.0);

        // Gamma(w) Q must equal the raw product Q * [0, w].
        const UnitQuaternion q = random_quat(rng);
        const Vec4 via_gamma = 0.5 * (g * q.as_vec4());
        const double pw = -q.v.dot(w);
        const Vec3 pv = q.w * w + q.v.cross(w);
        const Vec4 via_product = 0.5 * Vec4(pw, pv.x(), pv.y(), pv.z());
        CHECK((via_gamma - via_product).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(verify_kinematics_convention() < 1e-12);
}

TEST_CASE("exponential step: fixed points and periodicity") {
    std::mt19937_64 rng(7);
    const UnitQuaternion q = random_quat(rng);

    const UnitQuaternion same = quat_exp_step(Vec3::Zero(), 0.01, q);
    CHECK(same.w == doctest::Approx(q.w).epsilon(1e-15));
    CHECK((same.v - q.v).norm() < 1e-15);

    // One full revolution lands on the same rotation (antipodal quaternion).
    const double dt = 0.002;
    const UnitQuaternion turned = quat_exp_step(Vec3(2.0 * M_PI / dt, 0, 0), dt, q);
    CHECK((quat_to_rotation(turned) - quat_to_rotation(q)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(std::abs(turned.w) - std::abs(q.w)) < 1e-9);
}

TEST_CASE("exponential step matches the 20-term series oracle") {
    std::mt19937_64 rng(8);
    const double dt = 1e-3;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 w = random_vec3(rng, 10.0);
        const UnitQuaternion q = random_quat(rng);
        const Vec4 oracle = series_exp_apply(0.5 * gamma_matrix(w) * dt, q.as_vec4(), 20);
        const UnitQuaternion stepped = quat_exp_step(w, dt, q);
        CHECK((stepped.as_vec4() - oracle).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("exponential step small-angle branch stays continuous") {
    const UnitQuaternion q = UnitQuaternion::from_components(0.4, 0.5, -0.6, 0.2);
    const Vec3 w(1e-7, -2e-7, 0.5e-7);
    const double dt = 1e-2;
    const Vec4 oracle = series_exp_apply(0.5 * gamma_matrix(w) * dt, q.as_vec4(), 20);
    CHECK((quat_exp_step(w, dt, q).as_vec4() - oracle).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("rotate_vector agrees with the transposed rotation matrix") {
    std::mt19937_64 rng(9);
    const Vec3 v0(0.3, -2.0, 1.1);
    const Vec3 id = rotate_vector(UnitQuaternion::identity(), v0);
    CHECK((id - v0).norm() == 0.0);

    for (int i = 0; i < 1000; ++i) {
        const UnitQuaternion q = random_quat(rng);
        const Vec3 v = random_vec3(rng, 4.0);
        const Vec3 sandwich = rotate_vector(q, v);
        CHECK(sandwich.norm() == doctest::Approx(v.norm()).epsilon(1e-12));
        CHECK((sandwich - quat_to_rotation(q).transpose() * v).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("norm preserved through long product chains") {
    std::mt19937_64 rng(10);
    UnitQuaternion q = random_quat(rng);
    for (int i = 0; i < 6000; ++i) {
        q = quat_product(q, random_quat(rng));
        q = quat_exp_step(random_vec3(rng, 2.0), 0.005, q);
    }
    CHECK(std::abs(q.norm() - 1.0) < 1e-9);
}

TEST_CASE("geodesic angle resolves tiny separations") {
    const UnitQuaternion q = UnitQuaternion::from_components(0.7, 0.1, -0.3, 0.2);
    const UnitQuaternion nudged = quat_exp_step(Vec3(1e-8, 0, 0), 1.0, q);
    const double angle = geodesic_angle(q, nudged);
    CHECK(angle == doctest::Approx(1e-8).epsilon(1e-3));
    CHECK(geodesic_angle(q, -q) < 1e-12);
}
