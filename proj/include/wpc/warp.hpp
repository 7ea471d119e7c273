#pragma once

#include <vector>

#include "wpc/geometry.hpp"
#include "wpc/image.hpp"

namespace wpc {

enum class Border {
    Zero,   // out-of-image neighbors contribute nothing
    Clamp,  // sample coordinates clamped to the image rectangle
};

// Backward bilinear warp:
//   out(i,j) = sum over the in-image integer neighbors (h,w) of
//              img(h,w) * max(0, 1-|py-h|) * max(0, 1-|px-w|)
// with px = j + dx(i,j), py = i + dy(i,j).
Image warp_image(const Image& img, const FlowField& flow, Border border = Border::Zero);

struct WarpPointsResult {
    std::vector<Vec2> points;
    std::vector<bool> converged;
};

// Forward-maps sparse points through a backward flow: finds q with
// q + flow(q) = p by fixed-point iteration q <- p - flow(q)
// (32 iterations max, tolerance 1e-4 px).
WarpPointsResult warp_points(const std::vector<Vec2>& points, const FlowField& flow);

// Dense numerical inverse: compose_flows(flow, invert_flow(flow)) ~ 0.
// Same fixed-point scheme as warp_points, run per pixel.
FlowField invert_flow(const FlowField& flow, int max_iters = 32, double tol = 1e-4);

}  // namespace wpc
