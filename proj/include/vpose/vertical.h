#pragma once

#include "vpose/geometry.h"

namespace vpose {

// Camera attitude from an IMU: rotation angle alpha about the X axis and
// gamma about the Z axis, radians.
struct ImuAttitude {
    double alpha = 0.0;
    double gamma = 0.0;
};

// Unit direction toward the vertical vanishing point, camera frame.
class VerticalDirection {
  public:
    // Accepts vectors within 1e-6 of unit norm and renormalizes; rejects worse.
    static VerticalDirection from_vector(const Eigen::Vector3d &v);

    const Eigen::Vector3d &vec() const { return v_; }

  private:
    explicit VerticalDirection(const Eigen::Vector3d &v) : v_(v) {}
    Eigen::Vector3d v_;
};

// R_ver = Rz(gamma) * Rx(alpha).
Rotation3 r_ver_from_imu(const ImuAttitude &att);

// The rotation mapping V onto the world vertical: R * V = (0, 1, 0)^T.
// Degenerate V = +Y yields the identity; V = -Y yields a 180-degree rotation
// about X as a fixed convention.
Rotation3 r_ver_from_vanishing(const VerticalDirection &V);

// Full 3-vector R_ver * m_hat, no re-division by z.
BearingVector apply_vertical(const Rotation3 &R_ver, const BearingVector &m_hat);

}  // namespace vpose
