#include "vpose/geometry.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace vpose {

CameraIntrinsics CameraIntrinsics::from_matrix(const Eigen::Matrix3d &K) {
    if (!K.allFinite()) {
        throw InvalidCalibration("calibration matrix has non-finite entries");
    }
    if (K(1, 0) != 0.0 || K(2, 0) != 0.0 || K(2, 1) != 0.0) {
        throw InvalidCalibration("calibration matrix must be upper triangular");
    }
    if (K(0, 0) <= 0.0 || K(1, 1) <= 0.0 || K(2, 2) <= 0.0) {
        throw InvalidCalibration("calibration matrix diagonal must be strictly positive");
    }
    // Upper triangular with positive diagonal is invertible; invert in closed form.
    Eigen::Matrix3d K_inv = K.inverse();
    if (!K_inv.allFinite()) {
        throw InvalidCalibration("calibration matrix is numerically singular");
    }
    return CameraIntrinsics(K, K_inv);
}

CameraIntrinsics CameraIntrinsics::from_pinhole(double fx, double fy, double cx, double cy, double skew) {
    Eigen::Matrix3d K;
    K << fx, skew, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    return from_matrix(K);
}

Rotation3 Rotation3::from_matrix(const Eigen::Matrix3d &R) {
    const double ortho = (R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (ortho > 1e-9) {
        throw std::invalid_argument("matrix is not orthonormal");
    }
    if (std::abs(R.determinant() - 1.0) > 1e-9) {
        throw std::invalid_argument("matrix determinant is not +1");
    }
    return Rotation3(R);
}

Rotation3 Rotation3::transpose() const { return Rotation3(Eigen::Matrix3d(m_.transpose())); }

Rotation3 Rotation3::operator*(const Rotation3 &rhs) const { return Rotation3(Eigen::Matrix3d(m_ * rhs.m_)); }

BearingVector normalize_point(const CameraIntrinsics &K, const PixelPoint &m) {
    Eigen::Vector3d ray = K.inverse() * Eigen::Vector3d(m.u, m.v, 1.0);
    return ray / ray.z();
}

PixelPoint project_point(const CameraIntrinsics &K, const BearingVector &ray) {
    if (ray.z() <= 0.0) {
        throw std::invalid_argument("ray does not point in front of the camera");
    }
    Eigen::Vector3d p = K.matrix() * ray;
    return PixelPoint{p.x() / p.z(), p.y() / p.z()};
}

Rotation3 rodrigues(const Eigen::Vector3d &axis, double angle) {
    if (std::abs(axis.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("rotation axis must be a unit vector");
    }
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix3d cross;
    cross << 0.0, -axis.z(), axis.y(), axis.z(), 0.0, -axis.x(), -axis.y(), axis.x(), 0.0;
    Eigen::Matrix3d R = c * Eigen::Matrix3d::Identity() + s * cross + (1.0 - c) * (axis * axis.transpose());
    return Rotation3::from_matrix(R);
}

Eigen::Matrix3d essential_from_pose(const Rotation3 &R, const Translation3 &T) {
    if (T.norm() == 0.0) {
        throw std::invalid_argument("translation must be nonzero");
    }
    Eigen::Matrix3d skew;
    skew << 0.0, T.z(), -T.y(), -T.z(), 0.0, T.x(), T.y(), -T.x(), 0.0;
    return skew * R.matrix();
}

double rotation_angle_error(const Rotation3 &R_true, const Rotation3 &R_est) {
    const double tr = (R_true.matrix().transpose() * R_est.matrix()).trace();
    const double c = std::clamp((tr - 1.0) * 0.5, -1.0, 1.0);
    return rad_to_deg(std::acos(c));
}

double translation_angle_error(const Translation3 &T_true, const Translation3 &T_est) {
    const double n1 = T_true.norm();
    const double n2 = T_est.norm();
    if (n1 == 0.0 || n2 == 0.0) {
        throw std::invalid_argument("translation direction is undefined for the zero vector");
    }
    const double c = std::clamp(T_true.dot(T_est) / (n1 * n2), -1.0, 1.0);
    const double theta = rad_to_deg(std::acos(c));
    return std::min(theta, 180.0 - theta);
}

}  // namespace vpose
