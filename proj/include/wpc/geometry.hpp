#pragma once

#include <vector>

#include "wpc/error.hpp"

namespace wpc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Radial barrel-distortion model
//   r_u = r_d * (1 - k1*r_d^2 - k2*r_d^4)
// with radii measured from (cx, cy) and normalized by r_norm before the
// polynomial is applied.
struct LensParams {
    double k1 = 0.0;
    double k2 = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    double r_norm = 1.0;
};

LensParams default_lens(double k1, double k2, int width, int height);

// Dense per-pixel (dx, dy) displacements, row-major. Backward (sampling)
// convention: the corrected image at (row i, col j) samples the source at
// (j + dx(i,j), i + dy(i,j)).
struct FlowField {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // interleaved dx, dy

    FlowField() = default;

    FlowField(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h * 2, 0.0) {
        if (w < 1 || h < 1)
            throw Error(ErrorCode::InvalidArgument, "flow dimensions must be positive");
    }

    double& dx(int row, int col) { return data[(static_cast<size_t>(row) * width + col) * 2]; }
    double& dy(int row, int col) { return data[(static_cast<size_t>(row) * width + col) * 2 + 1]; }
    double dx(int row, int col) const { return data[(static_cast<size_t>(row) * width + col) * 2]; }
    double dy(int row, int col) const { return data[(static_cast<size_t>(row) * width + col) * 2 + 1]; }

    bool same_shape(const FlowField& other) const {
        return width == other.width && height == other.height;
    }

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

enum class FlipAxis { Horizontal, Vertical, Central };

// Bilinear sample of a flow field, coordinates clamped to the grid.
Vec2 sample_flow(const FlowField& flow, double x, double y);

// r_d -> r_u of the barrel model (normalized radii).
double barrel_map(double r_d, const LensParams& lens);

// Derivative dr_u/dr_d must stay positive on [0, r_max] for the model to be
// invertible; checked by sampling.
bool lens_monotonic(const LensParams& lens, double r_max, int samples = 1024);

// Numerical inverse of barrel_map on [0, r_max]: safeguarded Newton with
// bisection fallback, |barrel_map(r_d) - r_u| <= 1e-9, at most 64 iterations.
double barrel_invert(double r_u, const LensParams& lens, double r_max);

// Backward flow that undistorts a barrel-distorted image of the given size.
FlowField barrel_flow(const LensParams& lens, int width, int height);

// Maximum normalized radius over the four image corners.
double lens_corner_radius(const LensParams& lens, int width, int height);

FlowField flip_flow(const FlowField& flow, FlipAxis axis);

// result(p) = outer(p) + inner(p + outer(p)); inner is sampled bilinearly.
FlowField compose_flows(const FlowField& outer, const FlowField& inner);

}  // namespace wpc
