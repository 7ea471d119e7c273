#include "wpc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace wpc {

namespace {

FlowField downsample_flow_half(const FlowField& flow) {
    int ow = (flow.width + 1) / 2;
    int oh = (flow.height + 1) / 2;
    FlowField out(ow, oh);
    for (int i = 0; i < oh; ++i)
        for (int j = 0; j < ow; ++j) {
            int i0 = 2 * i;
            int j0 = 2 * j;
            int i1 = std::min(i0 + 1, flow.height - 1);
            int j1 = std::min(j0 + 1, flow.width - 1);
            out.dx(i, j) = 0.125 * (flow.dx(i0, j0) + flow.dx(i0, j1) +
                                    flow.dx(i1, j0) + flow.dx(i1, j1));
            out.dy(i, j) = 0.125 * (flow.dy(i0, j0) + flow.dy(i0, j1) +
                                    flow.dy(i1, j0) + flow.dy(i1, j1));
        }
    return out;
}

// Bilinear upsample with displacements scaled by the resolution ratio.
FlowField upsample_flow(const FlowField& flow, int out_w, int out_h) {
    FlowField out(out_w, out_h);
    double rx = static_cast<double>(out_w) / flow.width;
    double ry = static_cast<double>(out_h) / flow.height;
    for (int i = 0; i < out_h; ++i)
        for (int j = 0; j < out_w; ++j) {
            double xc = (j + 0.5) / rx - 0.5;
            double yc = (i + 0.5) / ry - 0.5;
            Vec2 d = sample_flow(flow, xc, yc);
            out.dx(i, j) = d.x * rx;
            out.dy(i, j) = d.y * ry;
        }
    return out;
}

using ValueFn = std::function<double(const FlowField&)>;
using GradFn = std::function<FlowField(const FlowField&)>;

struct DescentState {
    bool any_accepted = false;
};

// Gradient descent with backtracking: halve the step on non-decrease (30
// halvings max per iteration), grow it again after an accepted step. The
// accepted objective sequence is strictly decreasing within the level.
FlowField descend(FlowField flow, const ValueFn& value, const GradFn& gradient,
                  const SolverConfig& cfg, int level, std::vector<TraceEntry>& trace,
                  DescentState& state) {
    double step = cfg.step_size;
    double obj = value(flow);
    trace.push_back({level, 0, obj});

    for (int it = 1; it <= cfg.iterations_per_level; ++it) {
        FlowField grad = gradient(flow);
        double gmax = 0.0;
        for (double g : grad.data) gmax = std::max(gmax, std::abs(g));
        if (gmax < 1e-15) break;

        bool accepted = false;
        FlowField cand(flow.width, flow.height);
        double cand_obj = obj;
        for (int h = 0; h <= 30; ++h) {
            for (size_t k = 0; k < flow.data.size(); ++k)
                cand.data[k] = flow.data[k] - step * grad.data[k];
            cand_obj = value(cand);
            if (cand_obj < obj) {
                accepted = true;
                break;
            }
            step *= 0.5;
            if (step < 1e-12) {
                if (!state.any_accepted)
                    throw Error(ErrorCode::Diverged,
                                "step size underflow before any accepted step");
                return flow;
            }
        }
        if (!accepted) break;

        state.any_accepted = true;
        double prev = obj;
        flow = std::move(cand);
        obj = cand_obj;
        trace.push_back({level, it, obj});
        step = std::min(step * 2.0, cfg.step_size * 1e6);
        if (prev - obj <= cfg.tolerance * std::max(std::abs(prev), 1e-30)) break;
    }
    return flow;
}

int usable_levels(int w, int h, int requested) {
    int levels = 1;
    while (levels < requested && std::min(w, h) >= 16) {
        w = (w + 1) / 2;
        h = (h + 1) / 2;
        ++levels;
    }
    return levels;
}

}  // namespace

SolveResult optimize_flow(const Image& distorted, const Image& target,
                          const std::optional<FlowField>& gt_flow,
                          const ObjectiveWeights& weights, const SolverConfig& cfg) {
    if (!distorted.same_shape(target))
        throw Error(ErrorCode::DimensionMismatch, "distorted and target dimensions differ");
    if (cfg.mode == SolverMode::Supervised && !gt_flow)
        throw Error(ErrorCode::MissingTarget, "supervised mode requires gt_flow");
    if (gt_flow && (gt_flow->width != distorted.width || gt_flow->height != distorted.height))
        throw Error(ErrorCode::DimensionMismatch, "gt_flow dimensions differ");
    if (cfg.pyramid_levels < 1 || cfg.iterations_per_level < 1 || cfg.step_size <= 0.0)
        throw Error(ErrorCode::InvalidArgument, "invalid solver configuration");

    ObjectiveKind kind =
        cfg.mode == SolverMode::Supervised ? cfg.kind : ObjectiveKind::SelfSupervised;

    int levels = usable_levels(distorted.width, distorted.height, cfg.pyramid_levels);

    // level 0 of these vectors is full resolution; the solve walks them in
    // reverse (coarse to fine)
    std::vector<Image> src_pyr{distorted};
    std::vector<Image> tgt_pyr{target};
    std::vector<FlowField> gt_pyr;
    if (gt_flow) gt_pyr.push_back(*gt_flow);
    for (int l = 1; l < levels; ++l) {
        src_pyr.push_back(downsample_half(src_pyr.back()));
        tgt_pyr.push_back(downsample_half(tgt_pyr.back()));
        if (gt_flow) gt_pyr.push_back(downsample_flow_half(gt_pyr.back()));
    }
    for (int l = 0; l < levels; ++l) {
        src_pyr[l] = gaussian_blur(src_pyr[l], cfg.smooth_sigma);
        tgt_pyr[l] = gaussian_blur(tgt_pyr[l], cfg.smooth_sigma);
    }

    SolveResult result;
    DescentState state;
    FlowField flow(src_pyr[levels - 1].width, src_pyr[levels - 1].height);

    for (int l = levels - 1; l >= 0; --l) {
        const Image& src = src_pyr[l];
        const Image& tgt = tgt_pyr[l];
        ObjectiveInputs in;
        in.img = &src;
        in.gt_img = &tgt;
        if (gt_flow) in.gt_flow = &gt_pyr[l];

        if (flow.width != src.width || flow.height != src.height)
            flow = upsample_flow(flow, src.width, src.height);
        // keep the zero field whenever upsampling landed above it
        FlowField zero(src.width, src.height);
        ValueFn value = [&](const FlowField& f) { return objective_value(kind, f, in, weights); };
        GradFn grad = [&](const FlowField& f) { return objective_gradient(kind, f, in, weights); };
        if (value(zero) < value(flow)) flow = std::move(zero);

        int trace_level = levels - 1 - l;  // 0 = coarsest
        flow = descend(std::move(flow), value, grad, cfg, trace_level, result.trace, state);
    }

    result.flow = std::move(flow);
    return result;
}

namespace {

struct LinePyramid {
    std::vector<Polyline> lines;
};

// Scales annotation coordinates into a pyramid level's grid, matching the
// coordinate mapping used by upsample_flow.
LinePyramid scale_lines(const std::vector<Polyline>& lines, double rx, double ry) {
    LinePyramid out;
    out.lines.reserve(lines.size());
    for (const Polyline& line : lines) {
        Polyline scaled;
        scaled.points.reserve(line.points.size());
        for (const Vec2& p : line.points)
            scaled.points.push_back({(p.x + 0.5) * rx - 0.5, (p.y + 0.5) * ry - 0.5});
        out.lines.push_back(std::move(scaled));
    }
    return out;
}

// Straightness data term on annotated polylines: corrected positions are
// approximated to first order by q = p - flow(p); the penalty is the mean
// squared second difference of each corrected polyline.
double line_straightness_value(const FlowField& flow, const std::vector<Polyline>& lines) {
    double acc = 0.0;
    int count = 0;
    for (const Polyline& line : lines) {
        size_t n = line.points.size();
        if (n < 3) continue;
        std::vector<Vec2> q(n);
        for (size_t k = 0; k < n; ++k) {
            Vec2 d = sample_flow(flow, line.points[k].x, line.points[k].y);
            q[k] = {line.points[k].x - d.x, line.points[k].y - d.y};
        }
        for (size_t k = 1; k + 1 < n; ++k) {
            double cx = q[k - 1].x - 2.0 * q[k].x + q[k + 1].x;
            double cy = q[k - 1].y - 2.0 * q[k].y + q[k + 1].y;
            acc += cx * cx + cy * cy;
            ++count;
        }
    }
    return count > 0 ? acc / count : 0.0;
}

// Scatter weight*value into the four bilinear taps of (x, y), mirroring the
// clamping done by sample_flow.
void scatter_bilinear(FlowField& grad, double x, double y, double gx, double gy) {
    x = std::clamp(x, 0.0, static_cast<double>(grad.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(grad.height - 1));
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    int x1 = std::min(x0 + 1, grad.width - 1);
    int y1 = std::min(y0 + 1, grad.height - 1);
    double fx = x - x0;
    double fy = y - y0;
    grad.dx(y0, x0) += gx * (1.0 - fx) * (1.0 - fy);
    grad.dx(y0, x1) += gx * fx * (1.0 - fy);
    grad.dx(y1, x0) += gx * (1.0 - fx) * fy;
    grad.dx(y1, x1) += gx * fx * fy;
    grad.dy(y0, x0) += gy * (1.0 - fx) * (1.0 - fy);
    grad.dy(y0, x1) += gy * fx * (1.0 - fy);
    grad.dy(y1, x0) += gy * (1.0 - fx) * fy;
    grad.dy(y1, x1) += gy * fx * fy;
}

void add_line_straightness_gradient(const FlowField& flow,
                                    const std::vector<Polyline>& lines,
                                    double weight, FlowField& grad) {
    int count = 0;
    for (const Polyline& line : lines)
        if (line.points.size() >= 3) count += static_cast<int>(line.points.size()) - 2;
    if (count == 0) return;
    double norm = 2.0 * weight / count;

    for (const Polyline& line : lines) {
        size_t n = line.points.size();
        if (n < 3) continue;
        std::vector<Vec2> q(n);
        for (size_t k = 0; k < n; ++k) {
            Vec2 d = sample_flow(flow, line.points[k].x, line.points[k].y);
            q[k] = {line.points[k].x - d.x, line.points[k].y - d.y};
        }
        std::vector<Vec2> dLdq(n, Vec2{0.0, 0.0});
        for (size_t k = 1; k + 1 < n; ++k) {
            double cx = q[k - 1].x - 2.0 * q[k].x + q[k + 1].x;
            double cy = q[k - 1].y - 2.0 * q[k].y + q[k + 1].y;
            dLdq[k - 1].x += norm * cx;
            dLdq[k - 1].y += norm * cy;
            dLdq[k].x -= 2.0 * norm * cx;
            dLdq[k].y -= 2.0 * norm * cy;
            dLdq[k + 1].x += norm * cx;
            dLdq[k + 1].y += norm * cy;
        }
        // q = p - flow(p): dq/dflow = -(bilinear weights)
        for (size_t k = 0; k < n; ++k)
            scatter_bilinear(grad, line.points[k].x, line.points[k].y,
                             -dLdq[k].x, -dLdq[k].y);
    }
}

}  // namespace

BackgroundResult correct_background(const Image& img, const ObjectiveWeights& weights,
                                    const SolverConfig& cfg,
                                    const std::optional<Image>& reference,
                                    const std::vector<Polyline>& lines) {
    BackgroundResult result;

    if (reference) {
        if (!img.same_shape(*reference))
            throw Error(ErrorCode::DimensionMismatch, "image and reference dimensions differ");
        SolverConfig sub = cfg;
        sub.mode = SolverMode::SelfSupervised;
        SolveResult solve = optimize_flow(img, *reference, std::nullopt, weights, sub);
        result.flow = std::move(solve.flow);
        result.trace = std::move(solve.trace);
    } else if (!lines.empty()) {
        // no reference: straighten annotated lines under the sym + tv priors
        int levels = usable_levels(img.width, img.height, cfg.pyramid_levels);
        std::vector<std::pair<int, int>> dims{{img.width, img.height}};
        for (int l = 1; l < levels; ++l)
            dims.push_back({(dims.back().first + 1) / 2, (dims.back().second + 1) / 2});

        DescentState state;
        FlowField flow(dims[levels - 1].first, dims[levels - 1].second);
        for (int l = levels - 1; l >= 0; --l) {
            auto [lw, lh] = dims[l];
            if (flow.width != lw || flow.height != lh) flow = upsample_flow(flow, lw, lh);
            double rx = static_cast<double>(lw) / img.width;
            double ry = static_cast<double>(lh) / img.height;
            LinePyramid scaled = scale_lines(lines, rx, ry);

            ValueFn value = [&](const FlowField& f) {
                return line_straightness_value(f, scaled.lines) +
                       weights.lambda4 * sym_loss(f) + weights.lambda2 * tv_loss(f);
            };
            GradFn grad = [&](const FlowField& f) {
                FlowField g(f.width, f.height);
                add_line_straightness_gradient(f, scaled.lines, 1.0, g);
                if (weights.lambda4 != 0.0) {
                    FlowField gs = sym_loss_gradient(f);
                    for (size_t k = 0; k < f.data.size(); ++k)
                        g.data[k] += weights.lambda4 * gs.data[k];
                }
                if (weights.lambda2 != 0.0) {
                    FlowField gt = tv_loss_gradient(f);
                    for (size_t k = 0; k < f.data.size(); ++k)
                        g.data[k] += weights.lambda2 * gt.data[k];
                }
                return g;
            };
            int trace_level = levels - 1 - l;
            flow = descend(std::move(flow), value, grad, cfg, trace_level, result.trace, state);
        }
        result.flow = std::move(flow);
    } else {
        throw Error(ErrorCode::MissingTarget,
                    "background correction needs a reference image or line annotations");
    }

    result.corrected = warp_image(img, result.flow, Border::Clamp);
    return result;
}

}  // namespace wpc
