#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wpc/metrics.hpp"
#include "wpc/objectives.hpp"
#include "wpc/warp.hpp"

namespace wpc {

enum class SolverMode { Supervised, SelfSupervised };

struct SolverConfig {
    int pyramid_levels = 4;        // factor-2 downscaling per level
    int iterations_per_level = 200;
    double step_size = 1.0;        // px per unit gradient
    double tolerance = 1e-6;       // relative objective decrease for early stop
    double smooth_sigma = 1.0;     // Gaussian pre-smoothing of images per level
    std::uint64_t seed = 0;
    SolverMode mode = SolverMode::SelfSupervised;
    ObjectiveKind kind = ObjectiveKind::Line;  // objective family for supervised solves
};

struct TraceEntry {
    int level = 0;      // 0 = coarsest
    int iteration = 0;  // 0 = value at the level's initial flow
    double objective = 0.0;
};

struct SolveResult {
    FlowField flow;
    std::vector<TraceEntry> trace;  // non-increasing within each level
};

// Per-image variational solve: coarse-to-fine gradient descent with
// backtracking (step halved on non-decrease, 30 halvings per iteration).
// Supervised mode minimizes the configured face/line objective against
// gt_flow; self-supervised drops the flow term and minimizes
// lambda3*pixel + lambda4*sym against the target image.
SolveResult optimize_flow(const Image& distorted, const Image& target,
                          const std::optional<FlowField>& gt_flow,
                          const ObjectiveWeights& weights, const SolverConfig& cfg);

struct BackgroundResult {
    Image corrected;
    FlowField flow;
    std::vector<TraceEntry> trace;
};

// Background correction. With a reference image this is a self-supervised
// solve against it; without one, annotated straight lines drive a
// line-straightness data term under the sym + tv regularizers.
BackgroundResult correct_background(const Image& img, const ObjectiveWeights& weights,
                                    const SolverConfig& cfg,
                                    const std::optional<Image>& reference,
                                    const std::vector<Polyline>& lines = {});

}  // namespace wpc
