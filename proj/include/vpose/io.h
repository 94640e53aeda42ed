#pragma once

#include "vpose/geometry.h"
#include "vpose/pipeline.h"
#include "vpose/vertical.h"

#include <string>
#include <vector>

namespace vpose {

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Externally supplied matches plus the per-view vertical information needed
// to run the solver. Verticals come either as camera-frame unit vectors or as
// IMU attitudes; both are reduced to an alignment rotation on ingest.
struct CorrespondenceFile {
    CameraIntrinsics K1 = CameraIntrinsics::from_pinhole(1.0, 1.0, 0.0, 0.0);
    CameraIntrinsics K2 = CameraIntrinsics::from_pinhole(1.0, 1.0, 0.0, 0.0);
    Eigen::Vector3d vertical1 = Eigen::Vector3d::UnitY();
    Eigen::Vector3d vertical2 = Eigen::Vector3d::UnitY();
    Rotation3 R_ver1;
    Rotation3 R_ver2;
    std::vector<PixelPoint> pixels1;
    std::vector<PixelPoint> pixels2;
    std::vector<Correspondence> bearings;  // intrinsic-normalized, unaligned
};

// JSON schema:
//   {
//     "intrinsics1": 3x3 row-major (nested rows or flat 9-array),
//     "intrinsics2": ...,
//     "vertical1": [x, y, z] or {"alpha_deg": a, "gamma_deg": g},
//     "vertical2": ...,
//     "matches": [{"u1": ..., "v1": ..., "u2": ..., "v2": ...}, ...]
//   }
CorrespondenceFile ingest_correspondences(const std::string &path);
CorrespondenceFile parse_correspondences(const std::string &json_text);

std::string correspondence_file_json(const CameraIntrinsics &K1, const CameraIntrinsics &K2,
                                     const Eigen::Vector3d &vertical1, const Eigen::Vector3d &vertical2,
                                     const std::vector<PixelPoint> &pixels1,
                                     const std::vector<PixelPoint> &pixels2);

std::string pose_hypotheses_json(const std::vector<PoseHypothesis> &hypotheses);
std::string ransac_result_json(const RansacResult &result);

}  // namespace vpose
