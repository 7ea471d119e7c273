#include "wpc/objectives.hpp"

#include <cmath>

#include "wpc/warp.hpp"

namespace wpc {

namespace {
constexpr double kTvEps = 1e-8;
}

double flow_loss(const FlowField& flow, const FlowField& gt) {
    if (!flow.same_shape(gt))
        throw Error(ErrorCode::DimensionMismatch, "flow_loss dimensions differ");
    double acc = 0.0;
    for (size_t k = 0; k < flow.data.size(); ++k) {
        double d = flow.data[k] - gt.data[k];
        acc += d * d;
    }
    return acc / static_cast<double>(flow.data.size());
}

double pixel_loss(const Image& warped, const Image& gt) {
    if (!warped.same_shape(gt))
        throw Error(ErrorCode::DimensionMismatch, "pixel_loss dimensions differ");
    double acc = 0.0;
    for (size_t k = 0; k < warped.data.size(); ++k) {
        double d = warped.data[k] - gt.data[k];
        acc += d * d;
    }
    return acc / static_cast<double>(warped.data.size());
}

double tv_loss(const FlowField& flow) {
    if (flow.width < 2 || flow.height < 2)
        throw Error(ErrorCode::DimensionMismatch, "tv_loss needs width, height >= 2");
    const int W = flow.width;
    const int H = flow.height;
    double acc = 0.0;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < H; ++i)
            for (int j = 0; j < W; ++j) {
                double v = flow.data[(static_cast<size_t>(i) * W + j) * 2 + c];
                double s = kTvEps;
                if (j >= 1) {
                    double a = flow.data[(static_cast<size_t>(i) * W + j - 1) * 2 + c] - v;
                    s += a * a;
                }
                if (i + 1 < H) {
                    double b = flow.data[(static_cast<size_t>(i + 1) * W + j) * 2 + c] - v;
                    s += b * b;
                }
                acc += std::sqrt(s);
            }
    return acc / static_cast<double>(flow.pixel_count());
}

double sym_loss(const FlowField& flow) {
    const FlipAxis axes[3] = {FlipAxis::Vertical, FlipAxis::Horizontal, FlipAxis::Central};
    double total = 0.0;
    for (FlipAxis axis : axes) {
        FlowField flipped = flip_flow(flow, axis);
        double acc = 0.0;
        for (size_t k = 0; k < flow.data.size(); ++k) {
            double d = flipped.data[k] - flow.data[k];
            acc += d * d;
        }
        total += acc / static_cast<double>(flow.data.size());
    }
    return total;
}

double face_objective(const FlowField& flow, const FlowField& gt_flow,
                      const Image& img, const Image& gt_img,
                      const ObjectiveWeights& w) {
    return flow_loss(flow, gt_flow) +
           w.lambda1 * pixel_loss(warp_image(img, flow), gt_img) +
           w.lambda2 * tv_loss(flow);
}

double line_objective(const FlowField& flow, const FlowField& gt_flow,
                      const Image& img, const Image& gt_img,
                      const ObjectiveWeights& w) {
    return flow_loss(flow, gt_flow) +
           w.lambda3 * pixel_loss(warp_image(img, flow), gt_img) +
           w.lambda4 * sym_loss(flow);
}

namespace {

void check_pixel_inputs(const FlowField& flow, const ObjectiveInputs& in) {
    if (!in.img || !in.gt_img)
        throw Error(ErrorCode::InvalidArgument, "objective needs img and gt_img");
    if (!in.img->same_shape(*in.gt_img))
        throw Error(ErrorCode::DimensionMismatch, "img and gt_img dimensions differ");
    if (in.img->width != flow.width || in.img->height != flow.height)
        throw Error(ErrorCode::DimensionMismatch, "image and flow dimensions differ");
}

const FlowField& require_gt_flow(const ObjectiveInputs& in) {
    if (!in.gt_flow)
        throw Error(ErrorCode::InvalidArgument, "supervised objective needs gt_flow");
    return *in.gt_flow;
}

// d(flow_loss)/dflow = (flow - gt) / (W*H), per component.
void add_flow_gradient(const FlowField& flow, const FlowField& gt, FlowField& grad) {
    double inv = 1.0 / static_cast<double>(flow.pixel_count());
    for (size_t k = 0; k < flow.data.size(); ++k)
        grad.data[k] += (flow.data[k] - gt.data[k]) * inv;
}

// Residual-weighted derivative of the bilinear kernel.
void add_pixel_gradient(const FlowField& flow, const Image& img, const Image& gt,
                        double weight, FlowField& grad) {
    const int W = img.width;
    const int H = img.height;
    const int C = img.channels;
    const double norm = 2.0 * weight / static_cast<double>(img.value_count());
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j) {
            double px = j + flow.dx(i, j);
            double py = i + flow.dy(i, j);
            int x0 = static_cast<int>(std::floor(px));
            int y0 = static_cast<int>(std::floor(py));
            double fx = px - x0;
            double fy = py - y0;
            const double wx[2] = {1.0 - fx, fx};
            const double wy[2] = {1.0 - fy, fy};
            const double dwx[2] = {-1.0, 1.0};
            const double dwy[2] = {-1.0, 1.0};
            double gx = 0.0;
            double gy = 0.0;
            for (int c = 0; c < C; ++c) {
                double warped = 0.0;
                double ddx = 0.0;
                double ddy = 0.0;
                for (int a = 0; a < 2; ++a) {
                    int h = y0 + a;
                    if (h < 0 || h >= H) continue;
                    for (int b = 0; b < 2; ++b) {
                        int w = x0 + b;
                        if (w < 0 || w >= W) continue;
                        double v = img.at(h, w, c);
                        warped += v * wy[a] * wx[b];
                        ddx += v * wy[a] * dwx[b];
                        ddy += v * dwy[a] * wx[b];
                    }
                }
                double r = warped - gt.at(i, j, c);
                gx += r * ddx;
                gy += r * ddy;
            }
            grad.dx(i, j) += norm * gx;
            grad.dy(i, j) += norm * gy;
        }
}

void add_tv_gradient(const FlowField& flow, double weight, FlowField& grad) {
    const int W = flow.width;
    const int H = flow.height;
    const double norm = weight / static_cast<double>(flow.pixel_count());
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < H; ++i)
            for (int j = 0; j < W; ++j) {
                size_t self = (static_cast<size_t>(i) * W + j) * 2 + c;
                double v = flow.data[self];
                double a = 0.0;
                double b = 0.0;
                double s = kTvEps;
                size_t left = 0;
                size_t down = 0;
                bool has_left = j >= 1;
                bool has_down = i + 1 < H;
                if (has_left) {
                    left = (static_cast<size_t>(i) * W + j - 1) * 2 + c;
                    a = flow.data[left] - v;
                    s += a * a;
                }
                if (has_down) {
                    down = (static_cast<size_t>(i + 1) * W + j) * 2 + c;
                    b = flow.data[down] - v;
                    s += b * b;
                }
                double inv_t = 1.0 / std::sqrt(s);
                if (has_left) {
                    grad.data[left] += norm * a * inv_t;
                    grad.data[self] -= norm * a * inv_t;
                }
                if (has_down) {
                    grad.data[down] += norm * b * inv_t;
                    grad.data[self] -= norm * b * inv_t;
                }
            }
}

// For an involutive signed permutation F,
// d/dflow mean((F flow - flow)^2) = (4/N) (flow - F flow).
void add_sym_gradient(const FlowField& flow, double weight, FlowField& grad) {
    const FlipAxis axes[3] = {FlipAxis::Vertical, FlipAxis::Horizontal, FlipAxis::Central};
    const double norm = 4.0 * weight / static_cast<double>(flow.data.size());
    for (FlipAxis axis : axes) {
        FlowField flipped = flip_flow(flow, axis);
        for (size_t k = 0; k < flow.data.size(); ++k)
            grad.data[k] += norm * (flow.data[k] - flipped.data[k]);
    }
}

}  // namespace

FlowField tv_loss_gradient(const FlowField& flow) {
    FlowField grad(flow.width, flow.height);
    add_tv_gradient(flow, 1.0, grad);
    return grad;
}

FlowField sym_loss_gradient(const FlowField& flow) {
    FlowField grad(flow.width, flow.height);
    add_sym_gradient(flow, 1.0, grad);
    return grad;
}

double objective_value(ObjectiveKind kind, const FlowField& flow,
                       const ObjectiveInputs& in, const ObjectiveWeights& w) {
    switch (kind) {
        case ObjectiveKind::Face: {
            check_pixel_inputs(flow, in);
            return face_objective(flow, require_gt_flow(in), *in.img, *in.gt_img, w);
        }
        case ObjectiveKind::Line: {
            check_pixel_inputs(flow, in);
            return line_objective(flow, require_gt_flow(in), *in.img, *in.gt_img, w);
        }
        case ObjectiveKind::SelfSupervised: {
            check_pixel_inputs(flow, in);
            return w.lambda3 * pixel_loss(warp_image(*in.img, flow), *in.gt_img) +
                   w.lambda4 * sym_loss(flow);
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown objective kind");
}

FlowField objective_gradient(ObjectiveKind kind, const FlowField& flow,
                             const ObjectiveInputs& in, const ObjectiveWeights& w) {
    FlowField grad(flow.width, flow.height);
    switch (kind) {
        case ObjectiveKind::Face:
            check_pixel_inputs(flow, in);
            add_flow_gradient(flow, require_gt_flow(in), grad);
            if (w.lambda1 != 0.0) add_pixel_gradient(flow, *in.img, *in.gt_img, w.lambda1, grad);
            if (w.lambda2 != 0.0) add_tv_gradient(flow, w.lambda2, grad);
            break;
        case ObjectiveKind::Line:
            check_pixel_inputs(flow, in);
            add_flow_gradient(flow, require_gt_flow(in), grad);
            if (w.lambda3 != 0.0) add_pixel_gradient(flow, *in.img, *in.gt_img, w.lambda3, grad);
            if (w.lambda4 != 0.0) add_sym_gradient(flow, w.lambda4, grad);
            break;
        case ObjectiveKind::SelfSupervised:
            check_pixel_inputs(flow, in);
            if (w.lambda3 != 0.0) add_pixel_gradient(flow, *in.img, *in.gt_img, w.lambda3, grad);
            if (w.lambda4 != 0.0) add_sym_gradient(flow, w.lambda4, grad);
            break;
    }
    return grad;
}

}  // namespace wpc
