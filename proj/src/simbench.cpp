#include "vpose/simbench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

namespace vpose {

void SceneConfig::validate() const {
    if (image_width <= 0 || image_height <= 0 || baseline_length <= 0.0 || fov_deg <= 0.0 ||
        fov_deg >= 180.0) {
        throw std::invalid_argument("scene dimensions must be positive");
    }
    if (noise_sigma_px < 0.0 || vertical_error_deg < 0.0) {
        throw std::invalid_argument("noise levels must be nonnegative");
    }
    if (trials < 1 || num_points < 3) {
        throw std::invalid_argument("need at least one trial and three points");
    }
    if (depth_min <= 0.0 || depth_max <= depth_min) {
        throw std::invalid_argument("invalid depth range");
    }
}

CameraIntrinsics SceneConfig::intrinsics() const {
    const double f = (image_width / 2.0) / std::tan(deg_to_rad(fov_deg) / 2.0);
    return CameraIntrinsics::from_pinhole(f, f, image_width / 2.0, image_height / 2.0);
}

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

double gaussian(std::mt19937_64 &rng) {
    // Box-Muller on raw draws keeps the stream implementation-independent.
    double u1 = 0.0;
    do {
        u1 = (rng() >> 11) * 0x1.0p-53;
    } while (u1 <= 0.0);
    const double u2 = (rng() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Eigen::Vector3d perturb_direction(std::mt19937_64 &rng, const Eigen::Vector3d &v, double angle_deg) {
    if (angle_deg == 0.0) return v;
    Eigen::Vector3d r(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    Eigen::Vector3d axis = v.cross(r);
    while (axis.norm() < 1e-8) {
        r = Eigen::Vector3d(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
        axis = v.cross(r);
    }
    return rodrigues(axis.normalized(), deg_to_rad(angle_deg)).matrix() * v;
}

}  // namespace

SyntheticInstance generate_scene(const SceneConfig &cfg, std::uint64_t trial_seed) {
    cfg.validate();
    std::mt19937_64 rng(trial_seed);
    const CameraIntrinsics K = cfg.intrinsics();

    auto tilt = [&rng]() {
        const double pitch = deg_to_rad(uniform(rng, -10.0, 10.0));
        const double roll = deg_to_rad(uniform(rng, -10.0, 10.0));
        return rodrigues(Eigen::Vector3d::UnitX(), pitch) * rodrigues(Eigen::Vector3d::UnitZ(), roll);
    };
    const Rotation3 C1 = tilt();  // world -> camera 1
    const double yaw = deg_to_rad(uniform(rng, -10.0, 10.0));
    const Rotation3 C2 = tilt() * rodrigues(Eigen::Vector3d::UnitY(), yaw);

    const Eigen::Vector3d center2 = (cfg.motion == MotionType::Sideway)
                                        ? Eigen::Vector3d(cfg.baseline_length, 0.0, 0.0)
                                        : Eigen::Vector3d(0.0, 0.0, cfg.baseline_length);

    SyntheticInstance inst;
    inst.R_true = C2 * C1.transpose();
    inst.T_true = (-(C2.matrix() * center2)).normalized();
    inst.vertical1_true = C1.matrix() * Eigen::Vector3d::UnitY();
    inst.vertical2_true = C2.matrix() * Eigen::Vector3d::UnitY();
    inst.vertical1_meas = perturb_direction(rng, inst.vertical1_true, cfg.vertical_error_deg);
    inst.vertical2_meas = perturb_direction(rng, inst.vertical2_true, cfg.vertical_error_deg);

    const int max_attempts = 1000 * cfg.num_points;
    int attempts = 0;
    while (static_cast<int>(inst.clean.size()) < cfg.num_points && attempts++ < max_attempts) {
        const PixelPoint px1{uniform(rng, 0.0, cfg.image_width), uniform(rng, 0.0, cfg.image_height)};
        const BearingVector ray1 = normalize_point(K, px1);

        Eigen::Vector3d P_world;
        if (cfg.planar) {
            const Eigen::Vector3d ray_w = C1.matrix().transpose() * ray1;
            if (ray_w.z() < 1e-6) continue;
            P_world = (cfg.plane_depth / ray_w.z()) * ray_w;
        } else {
            const double depth = uniform(rng, cfg.depth_min, cfg.depth_max);
            P_world = C1.matrix().transpose() * (depth * ray1);
        }

        const Eigen::Vector3d P_c2 = C2.matrix() * (P_world - center2);
        if (P_c2.z() < 0.05) continue;
        const PixelPoint px2 = project_point(K, P_c2 / P_c2.z());
        if (px2.u < 0.0 || px2.u > cfg.image_width || px2.v < 0.0 || px2.v > cfg.image_height) continue;

        Correspondence clean;
        clean.m1 = ray1;
        clean.m2 = normalize_point(K, px2);
        inst.clean.push_back(clean);

        PixelPoint n1 = px1, n2 = px2;
        if (cfg.noise_sigma_px > 0.0) {
            n1.u += cfg.noise_sigma_px * gaussian(rng);
            n1.v += cfg.noise_sigma_px * gaussian(rng);
            n2.u += cfg.noise_sigma_px * gaussian(rng);
            n2.v += cfg.noise_sigma_px * gaussian(rng);
        }
        inst.pixels1.push_back(n1);
        inst.pixels2.push_back(n2);
        Correspondence noisy;
        noisy.m1 = normalize_point(K, n1);
        noisy.m2 = normalize_point(K, n2);
        inst.noisy.push_back(noisy);
    }
    if (static_cast<int>(inst.clean.size()) < cfg.num_points) {
        throw std::runtime_error("scene configuration yields fewer than the requested visible points");
    }
    return inst;
}

TrialOutcome run_trial(const SyntheticInstance &instance) {
    TrialOutcome out;
    const Rotation3 R_ver1 = r_ver_from_vanishing(VerticalDirection::from_vector(instance.vertical1_meas));
    const Rotation3 R_ver2 = r_ver_from_vanishing(VerticalDirection::from_vector(instance.vertical2_meas));
    const std::array<Correspondence, 3> sample = {instance.noisy[0], instance.noisy[1], instance.noisy[2]};

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<PoseHypothesis> hypotheses;
    try {
        hypotheses = solve_minimal_sample(sample, R_ver1, R_ver2);
    } catch (const DegenerateSystem &) {
        return out;
    }
    const auto t1 = std::chrono::steady_clock::now();
    out.solve_us = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count() / 1000.0;

    const std::vector<Correspondence> sample_vec(sample.begin(), sample.end());
    const auto selected = cheirality_select(hypotheses, sample_vec);
    if (!selected) return out;

    out.success = true;
    out.rot_err_deg = rotation_angle_error(instance.R_true, selected->rotation);
    out.trans_err_deg = translation_angle_error(instance.T_true, selected->translation);
    return out;
}

namespace {

SweepRow aggregate_level(const SceneConfig &cfg, double level, std::uint64_t level_index) {
    SweepRow row;
    row.level = level;
    std::vector<double> rot, trans;
    double time_sum = 0.0;
    int time_count = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t ts = mix_seed(cfg.seed, level_index * 1000003ULL + trial);
        TrialOutcome outcome;
        try {
            outcome = run_trial(generate_scene(cfg, ts));
        } catch (const std::exception &) {
            ++row.failures;
            continue;
        }
        if (!outcome.success) {
            ++row.failures;
            continue;
        }
        rot.push_back(outcome.rot_err_deg);
        trans.push_back(outcome.trans_err_deg);
        time_sum += outcome.solve_us;
        ++time_count;
    }
    auto median = [](std::vector<double> v) {
        if (v.empty()) return 0.0;
        std::sort(v.begin(), v.end());
        const size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    auto mean = [](const std::vector<double> &v) {
        if (v.empty()) return 0.0;
        double s = 0.0;
        for (double x : v) s += x;
        return s / v.size();
    };
    row.mean_rot_err_deg = mean(rot);
    row.median_rot_err_deg = median(rot);
    row.mean_trans_err_deg = mean(trans);
    row.median_trans_err_deg = median(trans);
    row.mean_solve_us = time_count ? time_sum / time_count : 0.0;
    return row;
}

}  // namespace

ExperimentRecord run_noise_sweep(const SceneConfig &cfg, const std::vector<double> &sigmas) {
    cfg.validate();
    ExperimentRecord rec;
    rec.config = cfg;
    for (size_t i = 0; i < sigmas.size(); ++i) {
        SceneConfig level_cfg = cfg;
        level_cfg.noise_sigma_px = sigmas[i];
        rec.rows.push_back(aggregate_level(level_cfg, sigmas[i], i));
    }
    return rec;
}

ExperimentRecord run_vertical_sweep(const SceneConfig &cfg, const std::vector<double> &errors_deg) {
    cfg.validate();
    ExperimentRecord rec;
    rec.config = cfg;
    for (size_t i = 0; i < errors_deg.size(); ++i) {
        SceneConfig level_cfg = cfg;
        level_cfg.vertical_error_deg = errors_deg[i];
        rec.rows.push_back(aggregate_level(level_cfg, errors_deg[i], i));
    }
    return rec;
}

std::string ExperimentRecord::csv() const {
    std::string out =
        "sigma_or_vertical_err,mean_rot_err_deg,median_rot_err_deg,mean_trans_err_deg,"
        "median_trans_err_deg,failures,mean_solve_us\n";
    char buf[256];
    for (const SweepRow &row : rows) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g,%d,%.3f\n", row.level,
                      row.mean_rot_err_deg, row.median_rot_err_deg, row.mean_trans_err_deg,
                      row.median_trans_err_deg, row.failures, row.mean_solve_us);
        out += buf;
    }
    return out;
}

}  // namespace vpose
