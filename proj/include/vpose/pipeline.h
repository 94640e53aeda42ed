#pragma once

#include "vpose/coplanarity.h"
#include "vpose/geometry.h"
#include "vpose/macaulay.h"

#include <cstdint>
#include <optional>
#include <vector>

namespace vpose {

// Yaw about Y parameterized by t = tan(phi/2):
//   [ cos(phi) 0 -sin(phi) ]
//   [ 0        1  0        ]
//   [ sin(phi) 0  cos(phi) ]
Rotation3 r_phi(double t);

// Final relative pose from the aligned-frame solution:
// R_final = R_ver2^T R_phi R_ver1, T_final = R_ver2^T T.
PoseHypothesis compose_final(const Rotation3 &R_ver1, const Rotation3 &R_ver2, const Rotation3 &R_phi,
                             const Translation3 &T);

// Angle between ray m2 and the epipolar plane of m1 (and symmetrically the
// other way), averaged. Radians.
double epipolar_residual(const PoseHypothesis &pose, const Correspondence &c);

// Picks the candidate with the most positive-depth midpoint triangulations
// over the samples, trying both signs of T; ties break on mean epipolar
// residual. Returns nothing when no candidate puts every sample in front of
// both cameras. Samples are in the original (unaligned) camera frames.
std::optional<PoseHypothesis> cheirality_select(const std::vector<PoseHypothesis> &candidates,
                                                const std::vector<Correspondence> &samples);

struct RansacConfig {
    double threshold = 2e-3;   // angular epipolar residual, radians
    double confidence = 0.999;
    int max_iterations = 1000;
    std::uint64_t seed = 0;
};

struct RansacResult {
    bool success = false;
    PoseHypothesis pose;
    std::vector<bool> inlier_mask;
    int iterations = 0;
    int inlier_count = 0;
};

// Hypothesize-and-verify over 3-point samples. Correspondences are bearing
// vectors in the original camera frames; the vertical rotations align them
// before each minimal solve. Deterministic for a fixed seed.
RansacResult ransac_3pt(const std::vector<Correspondence> &correspondences, const Rotation3 &R_ver1,
                        const Rotation3 &R_ver2, const RansacConfig &cfg);

// All pose hypotheses for one minimal sample: align, solve, compose. Raw
// algebraic candidates become final composed poses; the residual field holds
// the max epipolar residual over the sample.
std::vector<PoseHypothesis> solve_minimal_sample(const std::array<Correspondence, 3> &sample,
                                                 const Rotation3 &R_ver1, const Rotation3 &R_ver2);

}  // namespace vpose
