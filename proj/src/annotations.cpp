#include "wpc/annotations.hpp"

#include <fstream>

#include <json.hpp>

namespace wpc {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::IoError, path + ": " + e.what());
    }
    return j;
}

Vec2 parse_point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorCode::InvalidArgument, path + ": point must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Vec2> parse_points(const json& j, const std::string& path) {
    std::vector<Vec2> pts;
    for (const json& p : j) pts.push_back(parse_point(p, path));
    return pts;
}

LandmarkSet parse_landmarks(const json& points, const json& nose, const std::string& path) {
    LandmarkSet lm;
    lm.points = parse_points(points, path);
    lm.nose_index = nose.is_number_unsigned() ? nose.get<size_t>() : 0;
    if (lm.points.size() < 2)
        throw Error(ErrorCode::InvalidArgument, path + ": need at least 2 landmarks");
    if (lm.nose_index >= lm.points.size())
        throw Error(ErrorCode::InvalidArgument, path + ": nose_index out of range");
    return lm;
}

std::vector<Polyline> parse_lines(const json& j, const std::string& path) {
    std::vector<Polyline> lines;
    for (const json& lj : j) {
        Polyline line;
        line.points = parse_points(lj, path);
        if (line.points.size() < 2)
            throw Error(ErrorCode::InvalidArgument, path + ": lines need at least 2 points");
        lines.push_back(std::move(line));
    }
    return lines;
}

json points_to_json(const std::vector<Vec2>& pts) {
    json j = json::array();
    for (const Vec2& p : pts) j.push_back({p.x, p.y});
    return j;
}

}  // namespace

Annotations read_annotations(const std::string& path) {
    json j = load_json(path);
    Annotations ann;
    if (j.contains("landmarks"))
        ann.landmarks = parse_landmarks(j["landmarks"], j.value("nose_index", json(0)), path);
    if (j.contains("lines")) ann.lines = parse_lines(j["lines"], path);
    if (j.contains("face_box")) {
        const json& b = j["face_box"];
        if (!b.is_array() || b.size() != 4)
            throw Error(ErrorCode::InvalidArgument, path + ": face_box must be [x, y, w, h]");
        ann.face_box = Box{b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
    }
    if (j.contains("gt_landmarks"))
        ann.gt_landmarks =
            parse_landmarks(j["gt_landmarks"], j.value("gt_nose_index", j.value("nose_index", json(0))), path);
    if (j.contains("gt_lines")) ann.gt_lines = parse_lines(j["gt_lines"], path);
    return ann;
}

void write_annotations(const std::string& path, const Annotations& ann) {
    json j;
    if (ann.landmarks) {
        j["landmarks"] = points_to_json(ann.landmarks->points);
        j["nose_index"] = ann.landmarks->nose_index;
    }
    if (!ann.lines.empty()) {
        json lines = json::array();
        for (const Polyline& line : ann.lines) lines.push_back(points_to_json(line.points));
        j["lines"] = lines;
    }
    if (ann.face_box)
        j["face_box"] = {ann.face_box->x, ann.face_box->y, ann.face_box->w, ann.face_box->h};
    if (ann.gt_landmarks) {
        j["gt_landmarks"] = points_to_json(ann.gt_landmarks->points);
        j["gt_nose_index"] = ann.gt_landmarks->nose_index;
    }
    if (!ann.gt_lines.empty()) {
        json lines = json::array();
        for (const Polyline& line : ann.gt_lines) lines.push_back(points_to_json(line.points));
        j["gt_lines"] = lines;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path);
    out << j.dump(2) << "\n";
}

LensParams read_lens_json(const std::string& path) {
    json j = load_json(path);
    LensParams lens;
    lens.k1 = j.value("k1", 0.0);
    lens.k2 = j.value("k2", 0.0);
    lens.cx = j.value("cx", 0.0);
    lens.cy = j.value("cy", 0.0);
    lens.r_norm = j.value("r_norm", 1.0);
    if (lens.r_norm <= 0.0)
        throw Error(ErrorCode::InvalidArgument, path + ": r_norm must be positive");
    return lens;
}

void write_lens_json(const std::string& path, const LensParams& lens) {
    json j;
    j["k1"] = lens.k1;
    j["k2"] = lens.k2;
    j["cx"] = lens.cx;
    j["cy"] = lens.cy;
    j["r_norm"] = lens.r_norm;
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace wpc
