#pragma once

#include <cstdint>
#include <utility>

#include "wpc/geometry.hpp"
#include "wpc/image.hpp"

namespace wpc {

struct SyntheticPair {
    Image distorted;
    FlowField gt_flow;  // backward flow that corrects `distorted`
    double strength_used = 0.0;
};

// Radial outward-stretch pair: the corrective flow vanishes at the grid
// midpoint, grows as r^3 in normalized radius, and has magnitude exactly
// `strength` px at the farthest corner. jitter != 0 perturbs the strength by
// a seeded uniform draw in [-jitter, +jitter] (fraction of strength).
SyntheticPair make_corner_stretch_pair(const Image& img, double strength,
                                       std::uint64_t seed = 0, double jitter = 0.0);

// Barrel pair: `distorted` is img resampled through the forward barrel map of
// the lens; gt_flow = barrel_flow(lens, w, h) corrects it.
SyntheticPair make_barrel_pair(const Image& img, const LensParams& lens);

}  // namespace wpc
