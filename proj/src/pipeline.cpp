#include "vpose/pipeline.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace vpose {

Rotation3 r_phi(double t) {
    if (!std::isfinite(t)) {
        throw std::invalid_argument("tan-half-angle parameter must be finite");
    }
    const double d = 1.0 + t * t;
    const double c = (1.0 - t * t) / d;
    const double s = 2.0 * t / d;
    Eigen::Matrix3d R;
    R << c, 0.0, -s, 0.0, 1.0, 0.0, s, 0.0, c;
    return Rotation3::from_matrix(R);
}

PoseHypothesis compose_final(const Rotation3 &R_ver1, const Rotation3 &R_ver2, const Rotation3 &R_phi,
                             const Translation3 &T) {
    PoseHypothesis pose;
    pose.rotation = R_ver2.transpose() * R_phi * R_ver1;
    pose.translation = R_ver2.matrix().transpose() * T;
    pose.stage = PoseStage::FinalComposed;
    return pose;
}

double epipolar_residual(const PoseHypothesis &pose, const Correspondence &c) {
    const Eigen::Matrix3d E = essential_from_pose(pose.rotation, pose.translation);
    auto angle_to_plane = [](const Eigen::Vector3d &normal, const Eigen::Vector3d &ray) {
        const double nn = normal.norm();
        const double nr = ray.norm();
        if (nn < 1e-15 || nr < 1e-15) return 0.0;
        return std::asin(std::clamp(std::abs(normal.dot(ray)) / (nn * nr), 0.0, 1.0));
    };
    const double r1 = angle_to_plane(E * c.m1, c.m2);
    const double r2 = angle_to_plane(E.transpose() * c.m2, c.m1);
    return 0.5 * (r1 + r2);
}

namespace {

// Midpoint triangulation depths: lambda1 * R m1 + T ~ lambda2 * m2.
// Both depths must be positive for a point in front of both cameras.
bool positive_depths(const Rotation3 &R, const Translation3 &T, const Correspondence &c) {
    const Eigen::Vector3d a = R.matrix() * c.m1;
    const Eigen::Vector3d b = c.m2;
    Eigen::Matrix2d N;
    N << a.dot(a), -a.dot(b), -a.dot(b), b.dot(b);
    const Eigen::Vector2d rhs(-a.dot(T), b.dot(T));
    const double det = N(0, 0) * N(1, 1) - N(0, 1) * N(1, 0);
    if (std::abs(det) < 1e-15) return false;
    const Eigen::Vector2d depths = N.inverse() * rhs;
    return depths[0] > 0.0 && depths[1] > 0.0;
}

}  // namespace

std::optional<PoseHypothesis> cheirality_select(const std::vector<PoseHypothesis> &candidates,
                                                const std::vector<Correspondence> &samples) {
    std::optional<PoseHypothesis> best;
    int best_count = -1;
    double best_residual = 0.0;
    for (const PoseHypothesis &cand : candidates) {
        for (double sign : {1.0, -1.0}) {
            PoseHypothesis pose = cand;
            pose.translation = sign * cand.translation;
            int count = 0;
            double residual = 0.0;
            for (const Correspondence &c : samples) {
                if (positive_depths(pose.rotation, pose.translation, c)) ++count;
                residual += epipolar_residual(pose, c);
            }
            residual /= std::max<size_t>(1, samples.size());
            if (count > best_count || (count == best_count && residual < best_residual)) {
                best_count = count;
                best_residual = residual;
                pose.residual = residual;
                best = pose;
            }
        }
    }
    if (best_count < static_cast<int>(samples.size())) return std::nullopt;
    return best;
}

std::vector<PoseHypothesis> solve_minimal_sample(const std::array<Correspondence, 3> &sample,
                                                 const Rotation3 &R_ver1, const Rotation3 &R_ver2) {
    std::array<Correspondence, 3> aligned;
    for (int i = 0; i < 3; ++i) {
        aligned[i].m1 = apply_vertical(R_ver1, sample[i].m1);
        aligned[i].m2 = apply_vertical(R_ver2, sample[i].m2);
    }
    const CoplanaritySystem sys = build_system(aligned);
    std::vector<PoseHypothesis> hypotheses;
    for (const SystemSolution &sol : solve_system(sys)) {
        PoseHypothesis pose = compose_final(R_ver1, R_ver2, r_phi(sol.t), sol.T);
        double worst = 0.0;
        for (const Correspondence &c : sample) worst = std::max(worst, epipolar_residual(pose, c));
        pose.residual = worst;
        hypotheses.push_back(std::move(pose));
    }
    return hypotheses;
}

RansacResult ransac_3pt(const std::vector<Correspondence> &correspondences, const Rotation3 &R_ver1,
                        const Rotation3 &R_ver2, const RansacConfig &cfg) {
    const int n = static_cast<int>(correspondences.size());
    if (n < 3) {
        throw std::invalid_argument("RANSAC needs at least 3 correspondences");
    }
    if (cfg.threshold <= 0.0 || cfg.confidence <= 0.0 || cfg.confidence >= 1.0) {
        throw std::invalid_argument("invalid RANSAC configuration");
    }

    std::mt19937_64 rng(cfg.seed);
    auto draw_sample = [&rng, n]() {
        std::array<int, 3> idx;
        idx[0] = static_cast<int>(rng() % n);
        do {
            idx[1] = static_cast<int>(rng() % n);
        } while (idx[1] == idx[0]);
        do {
            idx[2] = static_cast<int>(rng() % n);
        } while (idx[2] == idx[0] || idx[2] == idx[1]);
        return idx;
    };

    RansacResult result;
    result.inlier_mask.assign(n, false);
    double max_needed = cfg.max_iterations;
    int iter = 0;
    for (; iter < cfg.max_iterations && iter < max_needed; ++iter) {
        const std::array<int, 3> idx = draw_sample();
        std::array<Correspondence, 3> sample = {correspondences[idx[0]], correspondences[idx[1]],
                                                correspondences[idx[2]]};
        std::vector<PoseHypothesis> hypotheses;
        try {
            hypotheses = solve_minimal_sample(sample, R_ver1, R_ver2);
        } catch (const DegenerateSystem &) {
            continue;
        }
        const std::vector<Correspondence> sample_vec(sample.begin(), sample.end());
        const auto selected = cheirality_select(hypotheses, sample_vec);
        if (!selected) continue;

        std::vector<bool> mask(n, false);
        int count = 0;
        for (int i = 0; i < n; ++i) {
            if (epipolar_residual(*selected, correspondences[i]) < cfg.threshold) {
                mask[i] = true;
                ++count;
            }
        }
        if (count > result.inlier_count) {
            result.inlier_count = count;
            result.inlier_mask = std::move(mask);
            result.pose = *selected;
            result.success = count >= 3;
            const double w = static_cast<double>(count) / n;
            const double denom = std::log1p(-std::min(0.999999, w * w * w));
            if (denom < 0.0) {
                max_needed = std::min<double>(cfg.max_iterations, std::log1p(-cfg.confidence) / denom);
            }
        }
    }
    result.iterations = iter;
    return result;
}

}  // namespace vpose
