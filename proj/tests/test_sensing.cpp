#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "qtrack/sensing.hpp"
#include "test_util.hpp"

using namespace qtrack;
using qtrack::testing::random_quat;

namespace {

const std::vector<Vec3> kRefs{Vec3(1.0, 1.2, 1.3), Vec3(0.0, 0.0, 1.0)};

std::vector<VectorPair> measure(const UnitQuaternion& q, double std_dev, std::uint64_t seed) {
    NoiseModel noise(std_dev, seed);
    return augment_third(synthesize(q, kRefs, noise));
}

} // namespace

TEST_CASE("zero noise at identity reproduces the references") {
    NoiseModel noise(0.0, 1);
    const auto pairs = synthesize(UnitQuaternion::identity(), kRefs, noise);
    REQUIRE(pairs.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK((pairs[i].b - kRefs[i].normalized()).norm() == 0.0);
        CHECK(pairs[i].r.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("zero-noise measurements equal the rotated references") {
    std::mt19937_64 rng(31);
    NoiseModel noise(0.0, 1);
    for (int i = 0; i < 200; ++i) {
        const UnitQuaternion q = random_quat(rng);
        const Mat3 rt = quat_to_rotation(q).transpose();
        const auto pairs = synthesize(q, kRefs, noise);
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK((pairs[j].b - (rt * kRefs[j]).normalized()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("noise stream statistics match the configured stddev") {
    NoiseModel noise(0.08, 1234);
    const int n = 100000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = noise.sample();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double stddev = std::sqrt(sumsq / n - mean * mean);
    CHECK(std::abs(mean) < 3.0 * 0.08 / std::sqrt(static_cast<double>(n)));
    CHECK(stddev == doctest::Approx(0.08).epsilon(0.02));
}

TEST_CASE("identical seeds yield identical streams") {
    NoiseModel a(0.08, 99);
    NoiseModel b(0.08, 99);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.sample() == b.sample());
    }
}

TEST_CASE("third-vector augmentation") {
    const std::vector<VectorPair> axes{{Vec3(1, 0, 0), Vec3(1, 0, 0)},
                                       {Vec3(0, 1, 0), Vec3(0, 1, 0)}};
    const auto aug = augment_third(axes);
    REQUIRE(aug.size() == 3);
    CHECK((aug[2].r - Vec3(0, 0, 1)).norm() == 0.0);

    // cross product commutes with rotation on clean pairs
    std::mt19937_64 rng(32);
    NoiseModel noise(0.0, 1);
    for (int i = 0; i < 100; ++i) {
        const UnitQuaternion q = random_quat(rng);
        const auto pairs = augment_third(synthesize(q, kRefs, noise));
        const Vec3 expected = (quat_to_rotation(q).transpose() * pairs[2].r).normalized();
        CHECK((pairs[2].b - expected).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("augmented reference and body matrices have rank 3") {
    const auto pairs = measure(UnitQuaternion::from_components(0.3, 0.5, -0.4, 0.7), 0.0, 1);
    Eigen::Matrix3d m_ref;
    Eigen::Matrix3d m_body;
    for (int i = 0; i < 3; ++i) {
        m_ref.col(i) = pairs[static_cast<std::size_t>(i)].r;
        m_body.col(i) = pairs[static_cast<std::size_t>(i)].b;
    }
    const auto rank3 = [](const Mat3& m) {
        return (Eigen::JacobiSVD<Mat3>(m).singularValues().array() > 1e-6).all();
    };
    CHECK(rank3(m_ref));
    CHECK(rank3(m_body));
}

TEST_CASE("collinear references are rejected") {
    NoiseModel noise(0.0, 1);
    const std::vector<Vec3> collinear{Vec3(1, 1, 1), Vec3(2, 2, 2)};
    CHECK_THROWS_AS((void)synthesize(UnitQuaternion::identity(), collinear, noise),
                    std::invalid_argument);

    const std::vector<VectorPair> collinear_pairs{{Vec3(1, 0, 0), Vec3(1, 0, 0)},
                                                  {Vec3(1, 0, 0), Vec3(1, 0, 0)}};
    CHECK_THROWS_AS((void)augment_third(collinear_pairs), std::invalid_argument);
}

TEST_CASE("reconstruction recovers the identity") {
    const auto q_y = reconstruct(measure(UnitQuaternion::identity(), 0.0, 1));
    CHECK(q_y.w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q_y.v.norm() < 1e-9);
}

TEST_CASE("noise-free reconstruction is exact for 1000 random attitudes") {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 1000; ++i) {
        const UnitQuaternion q = random_quat(rng);
        const UnitQuaternion q_y = reconstruct(measure(q, 0.0, 1));
        CHECK(geodesic_angle(q, q_y) < 1e-6);
        CHECK(q_y.w >= 0.0);
    }
}

TEST_CASE("rank-deficient pair sets are rejected") {
    // three copies of the same direction
    const std::vector<VectorPair> degenerate{{Vec3(1, 0, 0), Vec3(1, 0, 0)},
                                             {Vec3(1, 0, 0), Vec3(1, 0, 0)},
                                             {Vec3(1, 0, 0), Vec3(1, 0, 0)}};
    CHECK_THROWS_AS((void)reconstruct(degenerate), std::invalid_argument);
    CHECK_THROWS_AS((void)reconstruct({degenerate[0], degenerate[1]}), std::invalid_argument);
}

TEST_CASE("noisy reconstruction keeps the median geodesic error small") {
    std::mt19937_64 rng(34);
    std::vector<double> errors;
    for (int i = 0; i < 1000; ++i) {
        const UnitQuaternion q = random_quat(rng);
        const UnitQuaternion q_y = reconstruct(measure(q, 0.08, 1000 + i));
        errors.push_back(geodesic_angle(q, q_y));
    }
    std::nth_element(errors.begin(), errors.begin() + 500, errors.end());
    // observed median 0.0945 rad with this noise level and seed set
    CHECK(errors[500] < 0.1);
}
