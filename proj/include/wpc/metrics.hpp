#pragma once

#include <cstddef>
#include <vector>

#include "wpc/geometry.hpp"

namespace wpc {

struct LandmarkSet {
    std::vector<Vec2> points;
    std::size_t nose_index = 0;
};

struct Polyline {
    std::vector<Vec2> points;
};

// Straightness score in [0, 100]. The reference direction is the angle of the
// ground-truth endpoint chord; each adjacent output segment contributes its
// angular deviation (mod pi, clamped to [0, pi/2]) normalized by pi/2.
// LS = 100 * (1 - mean deviation).
double line_acc(const Polyline& out_line, const Polyline& gt_line);

// Shape score in [-100, 100]: 100 * mean cosine similarity between
// centroid-relative landmark vectors. Pairs with a zero-length vector on
// either side are skipped.
double shape_acc(const LandmarkSet& out_lm, const LandmarkSet& gt_lm);

// Mean squared landmark distance (px^2) after translating the output set so
// its nose coincides with the ground-truth nose.
double landmark_distance(const LandmarkSet& out_lm, const LandmarkSet& gt_lm);

}  // namespace wpc
