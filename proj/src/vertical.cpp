#include "vpose/vertical.h"

#include <cmath>

namespace vpose {

VerticalDirection VerticalDirection::from_vector(const Eigen::Vector3d &v) {
    if (!v.allFinite()) {
        throw std::invalid_argument("vertical direction has non-finite entries");
    }
    const double n = v.norm();
    if (std::abs(n - 1.0) > 1e-6) {
        throw std::invalid_argument("vertical direction must be unit length (norm deviates by more than 1e-6)");
    }
    return VerticalDirection(v / n);
}

Rotation3 r_ver_from_imu(const ImuAttitude &att) {
    if (!std::isfinite(att.alpha) || !std::isfinite(att.gamma)) {
        throw std::invalid_argument("attitude angles must be finite");
    }
    const double ca = std::cos(att.alpha), sa = std::sin(att.alpha);
    const double cg = std::cos(att.gamma), sg = std::sin(att.gamma);
    Eigen::Matrix3d Rz, Rx;
    Rz << cg, -sg, 0.0, sg, cg, 0.0, 0.0, 0.0, 1.0;
    Rx << 1.0, 0.0, 0.0, 0.0, ca, -sa, 0.0, sa, ca;
    return Rotation3::from_matrix(Rz * Rx);
}

Rotation3 r_ver_from_vanishing(const VerticalDirection &V) {
    const Eigen::Vector3d &v = V.vec();
    const double d = std::sqrt(v.x() * v.x() + v.z() * v.z());
    if (d < 1e-12) {
        if (v.y() > 0.0) {
            return Rotation3::identity();
        }
        // V = -Y: any axis in the XZ plane works; fix the X axis.
        return rodrigues(Eigen::Vector3d::UnitX(), M_PI);
    }
    // Axis along cross(V, Y_w) so that the rotation carries V onto Y_w.
    const Eigen::Vector3d axis(-v.z() / d, 0.0, v.x() / d);
    const double theta = std::acos(std::clamp(v.y(), -1.0, 1.0));
    return rodrigues(axis, theta);
}

BearingVector apply_vertical(const Rotation3 &R_ver, const BearingVector &m_hat) {
    if (m_hat.norm() == 0.0) {
        throw std::invalid_argument("cannot align a zero ray");
    }
    return R_ver.matrix() * m_hat;
}

}  // namespace vpose
