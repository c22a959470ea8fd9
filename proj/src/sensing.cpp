#include "qtrack/sensing.hpp"

#include <cmath>
#include <stdexcept>

namespace qtrack {

namespace {

constexpr double kCollinearTol = 1e-6;

double canonical_unit(std::mt19937_64& rng) {
    // 53-bit mantissa uniform in [0, 1); independent of library
    // distribution implementations.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_not_collinear(const Vec3& a, const Vec3& b) {
    if (std::abs(a.normalized().dot(b.normalized())) > 1.0 - kCollinearTol) {
        throw std::invalid_argument(
            "reference vectors are collinear; attitude is not reconstructible");
    }
}

} // namespace

NoiseModel::NoiseModel(double stddev, std::uint64_t seed) : stddev_(stddev), rng_(seed) {
    if (stddev < 0.0) {
        throw std::invalid_argument("noise stddev must be nonnegative");
    }
}

double NoiseModel::sample() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_ * stddev_;
    }
    double u1 = canonical_unit(rng_);
    while (u1 == 0.0) {
        u1 = canonical_unit(rng_);
    }
    const double u2 = canonical_unit(rng_);
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2) * stddev_;
}

Vec3 NoiseModel::sample_vec3() {
    const double x = sample();
    const double y = sample();
    const double z = sample();
    return {x, y, z};
}

std::vector<VectorPair> synthesize(const UnitQuaternion& q_true,
                                   const std::vector<Vec3>& inertial_refs,
                                   NoiseModel& noise) {
    if (inertial_refs.size() < 2) {
        throw std::invalid_argument("at least two inertial references are required");
    }
    check_not_collinear(inertial_refs[0], inertial_refs[1]);

    const Mat3 r_t = quat_to_rotation(q_true).transpose();
    std::vector<VectorPair> pairs;
    pairs.reserve(inertial_refs.size());
    for (const Vec3& r : inertial_refs) {
        const Vec3 b_raw = r_t * r + (noise.stddev() > 0.0 ? noise.sample_vec3() : Vec3::Zero());
        pairs.push_back({r.normalized(), b_raw.normalized()});
    }
    return pairs;
}

std::vector<VectorPair> augment_third(const std::vector<VectorPair>& pairs) {
    if (pairs.size() != 2) {
        throw std::invalid_argument("third-vector augmentation expects exactly two pairs");
    }
    check_not_collinear(pairs[0].r, pairs[1].r);

    const Vec3 r3 = pairs[0].r.cross(pairs[1].r);
    const Vec3 b3 = pairs[0].b.cross(pairs[1].b);
    if (b3.norm() < kCollinearTol) {
        throw std::invalid_argument("measured vectors are collinear; cannot form third pair");
    }
    std::vector<VectorPair> out = pairs;
    out.push_back({r3.normalized(), b3.normalized()});
    return out;
}

UnitQuaternion reconstruct(const std::vector<VectorPair>& pairs) {
    if (pairs.size() < 3) {
        throw std::invalid_argument("attitude reconstruction needs at least three pairs");
    }

    Eigen::Matrix<double, 3, Eigen::Dynamic> m_ref(3, pairs.size());
    Eigen::Matrix<double, 3, Eigen::Dynamic> m_body(3, pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        m_ref.col(static_cast<int>(i)) = pairs[i].r;
        m_body.col(static_cast<int>(i)) = pairs[i].b;
    }
    const auto rank_of = [](const auto& m) {
        return (Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().array() > 1e-6).count();
    };
    if (rank_of(m_ref) < 3 || rank_of(m_body) < 3) {
        throw std::invalid_argument("measurement set is rank deficient; need rank 3");
    }

    // Davenport q-method with B = sum r_i b_i^T so that the dominant
    // eigenvector is the quaternion with b_i ~ R(Q)^T r_i.
    Mat3 b_mat = Mat3::Zero();
    for (const auto& p : pairs) {
        b_mat += p.r * p.b.transpose();
    }
    const double sigma = b_mat.trace();
    const Mat3 s_mat = b_mat + b_mat.transpose();
    const Vec3 z(b_mat(2, 1) - b_mat(1, 2), b_mat(0, 2) - b_mat(2, 0), b_mat(1, 0) - b_mat(0, 1));

    Mat4 k = Mat4::Zero();
    k(0, 0) = sigma;
    k.block<1, 3>(0, 1) = z.transpose();
    k.block<3, 1>(1, 0) = z;
    k.block<3, 3>(1, 1) = s_mat - sigma * Mat3::Identity();

    Eigen::SelfAdjointEigenSolver<Mat4> solver(k);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Davenport eigensolver did not converge within its "
                                 "fixed iteration budget");
    }
    const Vec4 q = solver.eigenvectors().col(3); // eigenvalues ascending
    UnitQuaternion out = UnitQuaternion::from_vec4_normalized(q);
    if (out.w < 0.0) {
        out = -out;
    }
    return out;
}

} // namespace qtrack
