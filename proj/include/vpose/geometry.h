#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace vpose {

// Homogeneous image ray. z == 1 right after intrinsic normalization; after
// gravity alignment all three components are free.
using BearingVector = Eigen::Vector3d;

struct PixelPoint {
    double u = 0.0;
    double v = 0.0;
};

// Upper-triangular calibration matrix with strictly positive diagonal.
class CameraIntrinsics {
  public:
    static CameraIntrinsics from_matrix(const Eigen::Matrix3d &K);
    static CameraIntrinsics from_pinhole(double fx, double fy, double cx, double cy, double skew = 0.0);

    const Eigen::Matrix3d &matrix() const { return K_; }
    const Eigen::Matrix3d &inverse() const { return K_inv_; }
    double focal_x() const { return K_(0, 0); }

  private:
    CameraIntrinsics(const Eigen::Matrix3d &K, const Eigen::Matrix3d &K_inv) : K_(K), K_inv_(K_inv) {}
    Eigen::Matrix3d K_;
    Eigen::Matrix3d K_inv_;
};

// 3x3 rotation, validated on construction: R^T R = I and det R = +1 within 1e-12.
class Rotation3 {
  public:
    Rotation3() : m_(Eigen::Matrix3d::Identity()) {}
    static Rotation3 from_matrix(const Eigen::Matrix3d &R);
    static Rotation3 identity() { return Rotation3(); }

    const Eigen::Matrix3d &matrix() const { return m_; }
    Rotation3 transpose() const;
    Rotation3 operator*(const Rotation3 &rhs) const;
    Eigen::Vector3d operator*(const Eigen::Vector3d &v) const { return m_ * v; }

  private:
    explicit Rotation3(const Eigen::Matrix3d &m) : m_(m) {}
    Eigen::Matrix3d m_;
};

// Scale-free baseline direction; unit norm when emitted by the solver.
using Translation3 = Eigen::Vector3d;

enum class PoseStage { RawCandidate, FinalComposed };

struct PoseHypothesis {
    Rotation3 rotation;
    Translation3 translation = Translation3::Zero();
    double residual = 0.0;  // max |epipolar residual| over the minimal sample, radians
    PoseStage stage = PoseStage::RawCandidate;
};

class InvalidCalibration : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// m_hat = K^-1 (u, v, 1)^T, scaled so z = 1.
BearingVector normalize_point(const CameraIntrinsics &K, const PixelPoint &m);

// Inverse of normalize_point: project a z > 0 ray to pixel coordinates.
PixelPoint project_point(const CameraIntrinsics &K, const BearingVector &ray);

// Rotation by `angle` radians about a unit axis.
Rotation3 rodrigues(const Eigen::Vector3d &axis, double angle);

// E = [T]x R with the skew layout
//   [  0   Tz  -Ty ]
//   [ -Tz  0    Tx ]
//   [  Ty -Tx   0  ]
Eigen::Matrix3d essential_from_pose(const Rotation3 &R, const Translation3 &T);

// Angle of R_true^T R_est, in degrees, in [0, 180].
double rotation_angle_error(const Rotation3 &R_true, const Rotation3 &R_est);

// Angle between baseline directions in degrees, folded to [0, 90] because the
// epipolar constraint is invariant under T -> -T.
double translation_angle_error(const Translation3 &T_true, const Translation3 &T_est);

constexpr double deg_to_rad(double d) { return d * 0.017453292519943295; }
constexpr double rad_to_deg(double r) { return r * 57.29577951308232; }

}  // namespace vpose
