#include "wpc/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace wpc {

LensParams default_lens(double k1, double k2, int width, int height) {
    LensParams lens;
    lens.k1 = k1;
    lens.k2 = k2;
    lens.cx = (width - 1) / 2.0;
    lens.cy = (height - 1) / 2.0;
    // half the pixel-extent diagonal, so the farthest corner sits at radius 1
    double dw = width - 1.0;
    double dh = height - 1.0;
    lens.r_norm = 0.5 * std::sqrt(dw * dw + dh * dh);
    if (lens.r_norm <= 0.0) lens.r_norm = 1.0;
    return lens;
}

Vec2 sample_flow(const FlowField& flow, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(flow.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(flow.height - 1));
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    int x1 = std::min(x0 + 1, flow.width - 1);
    int y1 = std::min(y0 + 1, flow.height - 1);
    double fx = x - x0;
    double fy = y - y0;
    Vec2 out;
    out.x = (flow.dx(y0, x0) * (1.0 - fx) + flow.dx(y0, x1) * fx) * (1.0 - fy) +
            (flow.dx(y1, x0) * (1.0 - fx) + flow.dx(y1, x1) * fx) * fy;
    out.y = (flow.dy(y0, x0) * (1.0 - fx) + flow.dy(y0, x1) * fx) * (1.0 - fy) +
            (flow.dy(y1, x0) * (1.0 - fx) + flow.dy(y1, x1) * fx) * fy;
    return out;
}

double barrel_map(double r_d, const LensParams& lens) {
    double r2 = r_d * r_d;
    return r_d * (1.0 - lens.k1 * r2 - lens.k2 * r2 * r2);
}

static double barrel_derivative(double r, const LensParams& lens) {
    double r2 = r * r;
    return 1.0 - 3.0 * lens.k1 * r2 - 5.0 * lens.k2 * r2 * r2;
}

bool lens_monotonic(const LensParams& lens, double r_max, int samples) {
    if (lens.r_norm <= 0.0 || r_max < 0.0) return false;
    for (int s = 0; s <= samples; ++s) {
        double r = r_max * s / samples;
        if (barrel_derivative(r, lens) <= 0.0) return false;
    }
    return true;
}

double barrel_invert(double r_u, const LensParams& lens, double r_max) {
    if (r_u < 0.0)
        throw Error(ErrorCode::InvalidArgument, "barrel_invert needs r_u >= 0");
    if (!lens_monotonic(lens, r_max))
        throw Error(ErrorCode::NonMonotonicLens,
                    "barrel model is not strictly increasing on the requested range");
    if (r_u == 0.0) return 0.0;

    constexpr double kTol = 1e-9;
    constexpr int kMaxIters = 64;

    double lo = 0.0;              // barrel_map(lo) <= r_u
    double hi = r_max;            // barrel_map(hi) >= r_u
    if (barrel_map(hi, lens) < r_u)
        throw Error(ErrorCode::NoConvergence, "r_u outside the invertible range");

    double r = std::min(r_u, r_max);  // Newton start
    for (int it = 0; it < kMaxIters; ++it) {
        double f = barrel_map(r, lens) - r_u;
        if (std::abs(f) <= kTol) return r;
        if (f < 0.0) lo = r; else hi = r;
        double d = barrel_derivative(r, lens);
        double next = r - f / d;
        if (!(d > 0.0) || next <= lo || next >= hi)
            next = 0.5 * (lo + hi);  // bisection safeguard
        r = next;
    }
    if (std::abs(barrel_map(r, lens) - r_u) <= kTol) return r;
    throw Error(ErrorCode::NoConvergence, "barrel_invert hit the iteration cap");
}

double lens_corner_radius(const LensParams& lens, int width, int height) {
    double r = 0.0;
    const double xs[2] = {0.0, static_cast<double>(width - 1)};
    const double ys[2] = {0.0, static_cast<double>(height - 1)};
    for (double cyv : ys)
        for (double cxv : xs) {
            double dx = cxv - lens.cx;
            double dy = cyv - lens.cy;
            r = std::max(r, std::sqrt(dx * dx + dy * dy));
        }
    return r / lens.r_norm;
}

FlowField barrel_flow(const LensParams& lens, int width, int height) {
    if (lens.r_norm <= 0.0)
        throw Error(ErrorCode::InvalidArgument, "r_norm must be positive");
    double r_corner = lens_corner_radius(lens, width, height);

    // The corner pixel's undistorted radius maps back from beyond the corner,
    // so the inversion interval has to reach barrel_map(hi) >= r_corner.
    double hi = std::max(r_corner, 1e-6);
    for (int it = 0; barrel_map(hi, lens) < r_corner; ++it) {
        if (it > 256 || barrel_derivative(hi, lens) <= 0.0)
            throw Error(ErrorCode::NonMonotonicLens,
                        "lens cannot cover the image extent monotonically");
        hi *= 1.05;
    }
    if (!lens_monotonic(lens, hi))
        throw Error(ErrorCode::NonMonotonicLens,
                    "barrel model is not strictly increasing over the image");

    FlowField flow(width, height);
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) {
            double px = j - lens.cx;
            double py = i - lens.cy;
            double r = std::sqrt(px * px + py * py);
            if (r == 0.0) continue;
            double r_u = r / lens.r_norm;
            double r_d = barrel_invert(r_u, lens, hi);
            double scale = r_d / r_u - 1.0;
            flow.dx(i, j) = scale * px;
            flow.dy(i, j) = scale * py;
        }
    return flow;
}

FlowField flip_flow(const FlowField& flow, FlipAxis axis) {
    FlowField out(flow.width, flow.height);
    const int W = flow.width;
    const int H = flow.height;
    switch (axis) {
        case FlipAxis::Horizontal:
            for (int i = 0; i < H; ++i)
                for (int j = 0; j < W; ++j) {
                    out.dx(i, j) = -flow.dx(i, W - 1 - j);
                    out.dy(i, j) = flow.dy(i, W - 1 - j);
                }
            break;
        case FlipAxis::Vertical:
            for (int i = 0; i < H; ++i)
                for (int j = 0; j < W; ++j) {
                    out.dx(i, j) = flow.dx(H - 1 - i, j);
                    out.dy(i, j) = -flow.dy(H - 1 - i, j);
                }
            break;
        case FlipAxis::Central:
            for (int i = 0; i < H; ++i)
                for (int j = 0; j < W; ++j) {
                    out.dx(i, j) = -flow.dx(H - 1 - i, W - 1 - j);
                    out.dy(i, j) = -flow.dy(H - 1 - i, W - 1 - j);
                }
            break;
    }
    return out;
}

FlowField compose_flows(const FlowField& outer, const FlowField& inner) {
    if (!outer.same_shape(inner))
        throw Error(ErrorCode::DimensionMismatch, "compose_flows needs equal dimensions");
    FlowField out(outer.width, outer.height);
    for (int i = 0; i < outer.height; ++i)
        for (int j = 0; j < outer.width; ++j) {
            double ox = outer.dx(i, j);
            double oy = outer.dy(i, j);
            Vec2 inner_disp = sample_flow(inner, j + ox, i + oy);
            out.dx(i, j) = ox + inner_disp.x;
            out.dy(i, j) = oy + inner_disp.y;
        }
    return out;
}

}  // namespace wpc
