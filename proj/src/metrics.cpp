#include "wpc/metrics.hpp"

#include <cmath>
#include <numbers>

namespace wpc {

namespace {

// Undirected angular difference, folded into [0, pi/2].
double angle_difference(double a, double b) {
    double d = std::fmod(std::abs(a - b), std::numbers::pi);
    return std::min(d, std::numbers::pi - d);
}

Vec2 centroid(const std::vector<Vec2>& pts) {
    Vec2 c;
    for (const Vec2& p : pts) {
        c.x += p.x;
        c.y += p.y;
    }
    c.x /= pts.size();
    c.y /= pts.size();
    return c;
}

}  // namespace

double line_acc(const Polyline& out_line, const Polyline& gt_line) {
    if (out_line.points.size() < 2 || gt_line.points.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "line_acc needs at least 2 points per line");

    const Vec2& g0 = gt_line.points.front();
    const Vec2& g1 = gt_line.points.back();
    double gdx = g1.x - g0.x;
    double gdy = g1.y - g0.y;
    if (gdx == 0.0 && gdy == 0.0)
        throw Error(ErrorCode::DegenerateLine, "ground-truth chord has zero length");
    double ref_angle = std::atan2(gdy, gdx);

    double err_sum = 0.0;
    int segments = 0;
    for (size_t k = 1; k < out_line.points.size(); ++k) {
        double dx = out_line.points[k].x - out_line.points[k - 1].x;
        double dy = out_line.points[k].y - out_line.points[k - 1].y;
        if (dx == 0.0 && dy == 0.0) continue;  // zero-length segments carry no direction
        double err = angle_difference(std::atan2(dy, dx), ref_angle) / (std::numbers::pi / 2.0);
        err_sum += std::min(err, 1.0);
        ++segments;
    }
    if (segments == 0)
        throw Error(ErrorCode::DegenerateLine, "all output points coincide");
    return 100.0 * (1.0 - err_sum / segments);
}

double shape_acc(const LandmarkSet& out_lm, const LandmarkSet& gt_lm) {
    if (out_lm.points.size() != gt_lm.points.size())
        throw Error(ErrorCode::DimensionMismatch, "landmark counts differ");
    if (out_lm.points.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "shape_acc needs at least 2 landmarks");

    Vec2 c_d = centroid(out_lm.points);
    Vec2 c_g = centroid(gt_lm.points);

    double acc = 0.0;
    int used = 0;
    for (size_t i = 0; i < out_lm.points.size(); ++i) {
        double dx = out_lm.points[i].x - c_d.x;
        double dy = out_lm.points[i].y - c_d.y;
        double gx = gt_lm.points[i].x - c_g.x;
        double gy = gt_lm.points[i].y - c_g.y;
        double nd = std::sqrt(dx * dx + dy * dy);
        double ng = std::sqrt(gx * gx + gy * gy);
        if (nd == 0.0 || ng == 0.0) continue;
        acc += (dx * gx + dy * gy) / (nd * ng);
        ++used;
    }
    if (used == 0)
        throw Error(ErrorCode::DegenerateLandmarks, "all landmarks coincide with the centroid");
    return 100.0 * acc / used;
}

double landmark_distance(const LandmarkSet& out_lm, const LandmarkSet& gt_lm) {
    if (out_lm.points.size() != gt_lm.points.size() || out_lm.nose_index != gt_lm.nose_index)
        throw Error(ErrorCode::DimensionMismatch, "landmark sets are not corresponding");
    if (out_lm.points.empty() || out_lm.nose_index >= out_lm.points.size())
        throw Error(ErrorCode::InvalidArgument, "invalid nose index");

    const Vec2& nose_d = out_lm.points[out_lm.nose_index];
    const Vec2& nose_g = gt_lm.points[gt_lm.nose_index];
    double tx = nose_g.x - nose_d.x;
    double ty = nose_g.y - nose_d.y;

    double acc = 0.0;
    for (size_t i = 0; i < out_lm.points.size(); ++i) {
        double ex = gt_lm.points[i].x - (out_lm.points[i].x + tx);
        double ey = gt_lm.points[i].y - (out_lm.points[i].y + ty);
        acc += ex * ex + ey * ey;
    }
    return acc / out_lm.points.size();
}

}  // namespace wpc
