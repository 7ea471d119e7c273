#include "wpc/warp.hpp"

#include <algorithm>
#include <cmath>

namespace wpc {

Image warp_image(const Image& img, const FlowField& flow, Border border) {
    if (img.width != flow.width || img.height != flow.height)
        throw Error(ErrorCode::DimensionMismatch, "image and flow dimensions differ");
    const int W = img.width;
    const int H = img.height;
    Image out(W, H, img.channels);

    for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j) {
            double px = j + flow.dx(i, j);
            double py = i + flow.dy(i, j);
            if (border == Border::Clamp) {
                px = std::clamp(px, 0.0, static_cast<double>(W - 1));
                py = std::clamp(py, 0.0, static_cast<double>(H - 1));
            }
            int x0 = static_cast<int>(std::floor(px));
            int y0 = static_cast<int>(std::floor(py));
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (int h = y0; h <= y0 + 1; ++h) {
                    if (h < 0 || h >= H) continue;
                    double wy = 1.0 - std::abs(py - h);
                    if (wy <= 0.0) continue;
                    for (int w = x0; w <= x0 + 1; ++w) {
                        if (w < 0 || w >= W) continue;
                        double wx = 1.0 - std::abs(px - w);
                        if (wx <= 0.0) continue;
                        acc += img.at(h, w, c) * wy * wx;
                    }
                }
                out.at(i, j, c) = acc;
            }
        }
    return out;
}

WarpPointsResult warp_points(const std::vector<Vec2>& points, const FlowField& flow) {
    constexpr int kMaxIters = 32;
    constexpr double kTol = 1e-4;
    WarpPointsResult result;
    result.points.reserve(points.size());
    result.converged.reserve(points.size());
    for (const Vec2& p : points) {
        Vec2 q = p;
        bool ok = false;
        for (int it = 0; it < kMaxIters; ++it) {
            Vec2 d = sample_flow(flow, q.x, q.y);
            Vec2 next{p.x - d.x, p.y - d.y};
            double step = std::hypot(next.x - q.x, next.y - q.y);
            q = next;
            if (step <= kTol) {
                ok = true;
                break;
            }
        }
        result.points.push_back(q);
        result.converged.push_back(ok);
    }
    return result;
}

FlowField invert_flow(const FlowField& flow, int max_iters, double tol) {
    FlowField inv(flow.width, flow.height);
    for (int i = 0; i < flow.height; ++i)
        for (int j = 0; j < flow.width; ++j) {
            double vx = 0.0;
            double vy = 0.0;
            for (int it = 0; it < max_iters; ++it) {
                Vec2 d = sample_flow(flow, j + vx, i + vy);
                double nx = -d.x;
                double ny = -d.y;
                double step = std::hypot(nx - vx, ny - vy);
                vx = nx;
                vy = ny;
                if (step <= tol) break;
            }
            inv.dx(i, j) = vx;
            inv.dy(i, j) = vy;
        }
    return inv;
}

}  // namespace wpc
