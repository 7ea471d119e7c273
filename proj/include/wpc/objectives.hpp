#pragma once

#include <optional>

#include "wpc/geometry.hpp"
#include "wpc/image.hpp"

namespace wpc {

struct ObjectiveWeights {
    double lambda1 = 2.0;  // pixel loss weight in the face objective
    double lambda2 = 0.5;  // TV loss weight in the face objective
    double lambda3 = 1.0;  // pixel loss weight in the line objective
    double lambda4 = 2.0;  // symmetry loss weight in the line objective
};

// All norms are means, not sums, so the lambda weights are resolution
// independent. Reductions run in fixed row-major order; results are
// bit-reproducible across runs on the same machine.

// Mean over pixels and both components of the squared flow difference.
double flow_loss(const FlowField& flow, const FlowField& gt);

// Mean over pixels and channels of the squared intensity difference.
double pixel_loss(const Image& warped, const Image& gt);

// Charbonnier-style total variation: per component and pixel,
// sqrt(left_diff^2 + down_diff^2 + eps) with eps = 1e-8, out-of-grid
// difference terms dropped; summed over both components, divided by the
// pixel count.
double tv_loss(const FlowField& flow);

// Sum over the three flips (vertical, horizontal, central) of the
// mean-squared difference between the flipped field and the field.
double sym_loss(const FlowField& flow);

// flow_loss + lambda1 * pixel_loss(warp(img, flow), gt_img) + lambda2 * tv_loss
double face_objective(const FlowField& flow, const FlowField& gt_flow,
                      const Image& img, const Image& gt_img,
                      const ObjectiveWeights& w);

// flow_loss + lambda3 * pixel_loss(warp(img, flow), gt_img) + lambda4 * sym_loss
double line_objective(const FlowField& flow, const FlowField& gt_flow,
                      const Image& img, const Image& gt_img,
                      const ObjectiveWeights& w);

enum class ObjectiveKind {
    Face,            // flow + lambda1*pixel + lambda2*tv
    Line,            // flow + lambda3*pixel + lambda4*sym
    SelfSupervised,  // lambda3*pixel + lambda4*sym (no ground-truth flow)
};

struct ObjectiveInputs {
    const Image* img = nullptr;          // source image warped by the flow
    const Image* gt_img = nullptr;       // pixel-loss target
    const FlowField* gt_flow = nullptr;  // required by the supervised kinds
};

double objective_value(ObjectiveKind kind, const FlowField& flow,
                       const ObjectiveInputs& in, const ObjectiveWeights& w);

// Unweighted analytic gradients of the individual regularizers.
FlowField tv_loss_gradient(const FlowField& flow);
FlowField sym_loss_gradient(const FlowField& flow);

// Analytic d(objective)/d(flow), flow-shaped. The pixel term uses the exact
// derivative of the bilinear kernel, the TV term the eps-smoothed derivative,
// the symmetry term both the direct and the flipped appearance of each pixel.
FlowField objective_gradient(ObjectiveKind kind, const FlowField& flow,
                             const ObjectiveInputs& in, const ObjectiveWeights& w);

}  // namespace wpc
