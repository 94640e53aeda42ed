#include "vpose/io.h"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace vpose {

namespace {

using nlohmann::json;

Eigen::Matrix3d parse_matrix3(const json &j, const std::string &field) {
    Eigen::Matrix3d M;
    if (j.is_array() && j.size() == 3 && j[0].is_array()) {
        for (int r = 0; r < 3; ++r) {
            if (!j[r].is_array() || j[r].size() != 3) {
                throw ParseError(field + ": expected three rows of three numbers");
            }
            for (int c = 0; c < 3; ++c) M(r, c) = j[r][c].get<double>();
        }
        return M;
    }
    if (j.is_array() && j.size() == 9) {
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) M(r, c) = j[3 * r + c].get<double>();
        return M;
    }
    throw ParseError(field + ": expected a 3x3 row-major matrix");
}

void parse_vertical(const json &j, const std::string &field, Eigen::Vector3d *vertical, Rotation3 *R_ver) {
    if (j.is_object()) {
        if (!j.contains("alpha_deg") || !j.contains("gamma_deg")) {
            throw ParseError(field + ": attitude object needs alpha_deg and gamma_deg");
        }
        const ImuAttitude att{deg_to_rad(j["alpha_deg"].get<double>()),
                              deg_to_rad(j["gamma_deg"].get<double>())};
        *R_ver = r_ver_from_imu(att);
        *vertical = R_ver->matrix().transpose() * Eigen::Vector3d::UnitY();
        return;
    }
    if (j.is_array() && j.size() == 3) {
        const Eigen::Vector3d v(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
        VerticalDirection dir = [&] {
            try {
                return VerticalDirection::from_vector(v);
            } catch (const std::invalid_argument &e) {
                throw ParseError(field + ": " + e.what());
            }
        }();
        *vertical = dir.vec();
        *R_ver = r_ver_from_vanishing(dir);
        return;
    }
    throw ParseError(field + ": expected [x, y, z] or {alpha_deg, gamma_deg}");
}

json matrix3_json(const Eigen::Matrix3d &M) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) {
        rows.push_back(json::array({M(r, 0), M(r, 1), M(r, 2)}));
    }
    return rows;
}

}  // namespace

CorrespondenceFile parse_correspondences(const std::string &json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    for (const char *field : {"intrinsics1", "intrinsics2", "vertical1", "vertical2", "matches"}) {
        if (!j.contains(field)) throw ParseError(std::string("missing field: ") + field);
    }

    CorrespondenceFile out;
    try {
        out.K1 = CameraIntrinsics::from_matrix(parse_matrix3(j["intrinsics1"], "intrinsics1"));
    } catch (const InvalidCalibration &e) {
        throw ParseError(std::string("intrinsics1: ") + e.what());
    }
    try {
        out.K2 = CameraIntrinsics::from_matrix(parse_matrix3(j["intrinsics2"], "intrinsics2"));
    } catch (const InvalidCalibration &e) {
        throw ParseError(std::string("intrinsics2: ") + e.what());
    }
    parse_vertical(j["vertical1"], "vertical1", &out.vertical1, &out.R_ver1);
    parse_vertical(j["vertical2"], "vertical2", &out.vertical2, &out.R_ver2);

    if (!j["matches"].is_array()) throw ParseError("matches: expected an array");
    int index = 0;
    for (const json &m : j["matches"]) {
        for (const char *key : {"u1", "v1", "u2", "v2"}) {
            if (!m.contains(key) || !m[key].is_number()) {
                throw ParseError("matches[" + std::to_string(index) + "]: missing numeric field " + key);
            }
        }
        const PixelPoint p1{m["u1"].get<double>(), m["v1"].get<double>()};
        const PixelPoint p2{m["u2"].get<double>(), m["v2"].get<double>()};
        out.pixels1.push_back(p1);
        out.pixels2.push_back(p2);
        Correspondence c;
        c.m1 = normalize_point(out.K1, p1);
        c.m2 = normalize_point(out.K2, p2);
        out.bearings.push_back(c);
        ++index;
    }
    return out;
}

CorrespondenceFile ingest_correspondences(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_correspondences(ss.str());
}

std::string correspondence_file_json(const CameraIntrinsics &K1, const CameraIntrinsics &K2,
                                     const Eigen::Vector3d &vertical1, const Eigen::Vector3d &vertical2,
                                     const std::vector<PixelPoint> &pixels1,
                                     const std::vector<PixelPoint> &pixels2) {
    json j;
    j["intrinsics1"] = matrix3_json(K1.matrix());
    j["intrinsics2"] = matrix3_json(K2.matrix());
    j["vertical1"] = json::array({vertical1.x(), vertical1.y(), vertical1.z()});
    j["vertical2"] = json::array({vertical2.x(), vertical2.y(), vertical2.z()});
    json matches = json::array();
    for (size_t i = 0; i < pixels1.size(); ++i) {
        matches.push_back(json{{"u1", pixels1[i].u}, {"v1", pixels1[i].v}, {"u2", pixels2[i].u},
                               {"v2", pixels2[i].v}});
    }
    j["matches"] = std::move(matches);
    return j.dump(2) + "\n";
}

namespace {

json pose_json(const PoseHypothesis &pose) {
    json j;
    json rot = json::array();
    const Eigen::Matrix3d &R = pose.rotation.matrix();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) rot.push_back(R(r, c));
    j["rotation"] = std::move(rot);
    j["translation"] = json::array({pose.translation.x(), pose.translation.y(), pose.translation.z()});
    j["residual"] = pose.residual;
    return j;
}

}  // namespace

std::string pose_hypotheses_json(const std::vector<PoseHypothesis> &hypotheses) {
    json j;
    j["hypotheses"] = json::array();
    for (const PoseHypothesis &pose : hypotheses) j["hypotheses"].push_back(pose_json(pose));
    return j.dump(2) + "\n";
}

std::string ransac_result_json(const RansacResult &result) {
    json j;
    j["success"] = result.success;
    if (result.success) j["pose"] = pose_json(result.pose);
    j["inlier_count"] = result.inlier_count;
    j["iterations"] = result.iterations;
    json mask = json::array();
    for (bool b : result.inlier_mask) mask.push_back(b ? 1 : 0);
    j["inlier_mask"] = std::move(mask);
    return j.dump(2) + "\n";
}

}  // namespace vpose
