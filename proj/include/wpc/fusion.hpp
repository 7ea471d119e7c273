#pragma once

#include <utility>

#include "wpc/geometry.hpp"
#include "wpc/image.hpp"

namespace wpc {

inline constexpr int kFaceCropSize = 256;

struct Box {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

struct FaceCrop {
    Image image;     // kFaceCropSize x kFaceCropSize
    Box source_box;  // clamped to the source image
    double scale_x = 1.0;  // source px per crop px
    double scale_y = 1.0;
};

struct Mask {
    int width = 0;
    int height = 0;
    std::vector<double> weights;  // in [0, 1]

    Mask() = default;
    Mask(int w, int h, double fill = 0.0)
        : width(w), height(h), weights(static_cast<size_t>(w) * h, fill) {}

    double& at(int row, int col) { return weights[static_cast<size_t>(row) * width + col]; }
    double at(int row, int col) const { return weights[static_cast<size_t>(row) * width + col]; }
};

// Clamps the box to the image and resamples the region to
// kFaceCropSize x kFaceCropSize bilinearly; the transform is recorded for
// paste-back.
FaceCrop crop_face(const Image& img, const Box& box);

// Negated mean displacement of the background flow over the box: where the
// background correction moved the face anchor.
Vec2 compute_face_translation(const FlowField& bg_flow, const Box& box);

struct PasteResult {
    Image image;
    Mask gap_mask;  // uncovered pixels of the original face box
};

// Resamples the crop back to its source box, shifts it by the (rounded)
// offset, and alpha-composites: out = mask*face + (1-mask)*bg.
PasteResult paste_face(const Image& bg, const FaceCrop& face, const Mask& mask,
                       const Vec2& offset);

// Harmonic fill of masked pixels (Gauss-Seidel on the discrete Laplace
// equation; unmasked pixels are the Dirichlet boundary). A fully masked
// image comes back mid-gray.
Image fill_gaps(const Image& img, const Mask& gap_mask, double tol = 1e-4,
                int max_iters = 10000);

}  // namespace wpc
