#pragma once

#include "vpose/geometry.h"
#include "vpose/pipeline.h"
#include "vpose/vertical.h"

#include <cstdint>
#include <string>
#include <vector>

namespace vpose {

enum class MotionType { Sideway, Forward };

struct SceneConfig {
    MotionType motion = MotionType::Sideway;
    double baseline_length = 0.3;   // scene-distance units
    double fov_deg = 45.0;
    int image_width = 352;
    int image_height = 288;
    double depth_min = 0.5;         // frustum depth range, scene units
    double depth_max = 2.5;
    bool planar = false;
    double plane_depth = 2.0;       // world Z of the plane in planar mode
    double noise_sigma_px = 0.0;
    double vertical_error_deg = 0.0;
    int num_points = 3;
    int trials = 2500;
    std::uint64_t seed = 0;

    void validate() const;
    CameraIntrinsics intrinsics() const;  // f = (W/2) / tan(fov/2), centered
};

struct SyntheticInstance {
    Rotation3 R_true;                  // camera-1 frame to camera-2 frame
    Translation3 T_true;               // unit baseline, camera-2 frame
    Eigen::Vector3d vertical1_true;    // world up in each camera frame
    Eigen::Vector3d vertical2_true;
    Eigen::Vector3d vertical1_meas;    // perturbed by the configured error
    Eigen::Vector3d vertical2_meas;
    std::vector<Correspondence> clean;  // noiseless bearings
    std::vector<Correspondence> noisy;  // bearings from noised pixels
    std::vector<PixelPoint> pixels1;    // noised pixel coordinates
    std::vector<PixelPoint> pixels2;
};

struct SweepRow {
    double level = 0.0;  // sigma in pixels, or vertical error in degrees
    double mean_rot_err_deg = 0.0;
    double median_rot_err_deg = 0.0;
    double mean_trans_err_deg = 0.0;
    double median_trans_err_deg = 0.0;
    int failures = 0;
    double mean_solve_us = 0.0;
};

struct ExperimentRecord {
    SceneConfig config;
    std::vector<SweepRow> rows;
    std::string csv() const;
};

// One synthetic two-view instance: camera 1 at the origin looking roughly
// down +Z, camera 2 displaced by the baseline along X (sideway) or Z
// (forward); both views carry small random tilts and view 2 a random yaw
// within +-10 degrees. Points are sampled in camera 1's frustum and must be
// visible in both views.
SyntheticInstance generate_scene(const SceneConfig &cfg, std::uint64_t trial_seed);

// Full minimal pipeline on one instance: align with the measured verticals,
// solve, select by cheirality, compose. Errors are against the stored truth.
struct TrialOutcome {
    bool success = false;
    double rot_err_deg = 0.0;
    double trans_err_deg = 0.0;
    double solve_us = 0.0;
};
TrialOutcome run_trial(const SyntheticInstance &instance);

ExperimentRecord run_noise_sweep(const SceneConfig &cfg, const std::vector<double> &sigmas);
ExperimentRecord run_vertical_sweep(const SceneConfig &cfg, const std::vector<double> &errors_deg);

}  // namespace vpose
