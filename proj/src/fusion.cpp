#include "wpc/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace wpc {

namespace {

Box clamp_box(const Box& box, int width, int height) {
    int x0 = std::max(box.x, 0);
    int y0 = std::max(box.y, 0);
    int x1 = std::min(box.x + box.w, width);
    int y1 = std::min(box.y + box.h, height);
    if (x1 <= x0 || y1 <= y0)
        throw Error(ErrorCode::EmptyBox, "box does not overlap the image");
    return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace

FaceCrop crop_face(const Image& img, const Box& box) {
    if (box.w <= 0 || box.h <= 0)
        throw Error(ErrorCode::EmptyBox, "box extent must be positive");
    Box clamped = clamp_box(box, img.width, img.height);

    FaceCrop crop;
    crop.source_box = clamped;
    crop.scale_x = static_cast<double>(clamped.w) / kFaceCropSize;
    crop.scale_y = static_cast<double>(clamped.h) / kFaceCropSize;
    crop.image = Image(kFaceCropSize, kFaceCropSize, img.channels);
    for (int v = 0; v < kFaceCropSize; ++v)
        for (int u = 0; u < kFaceCropSize; ++u) {
            double x = clamped.x + (u + 0.5) * crop.scale_x - 0.5;
            double y = clamped.y + (v + 0.5) * crop.scale_y - 0.5;
            for (int c = 0; c < img.channels; ++c)
                crop.image.at(v, u, c) = sample_clamped(img, x, y, c);
        }
    return crop;
}

Vec2 compute_face_translation(const FlowField& bg_flow, const Box& box) {
    Box clamped = clamp_box(box, bg_flow.width, bg_flow.height);
    double sx = 0.0;
    double sy = 0.0;
    for (int i = clamped.y; i < clamped.y + clamped.h; ++i)
        for (int j = clamped.x; j < clamped.x + clamped.w; ++j) {
            sx += bg_flow.dx(i, j);
            sy += bg_flow.dy(i, j);
        }
    double n = static_cast<double>(clamped.w) * clamped.h;
    return {-sx / n, -sy / n};
}

PasteResult paste_face(const Image& bg, const FaceCrop& face, const Mask& mask,
                       const Vec2& offset) {
    if (mask.width != face.image.width || mask.height != face.image.height)
        throw Error(ErrorCode::DimensionMismatch, "mask and face crop dimensions differ");
    if (face.image.channels != bg.channels)
        throw Error(ErrorCode::DimensionMismatch, "face crop and background channels differ");

    const Box& box = face.source_box;
    const int ox = static_cast<int>(std::lround(offset.x));
    const int oy = static_cast<int>(std::lround(offset.y));

    PasteResult result;
    result.image = bg;
    result.gap_mask = Mask(bg.width, bg.height, 0.0);

    // resample crop and mask back to the box size
    Image face_full(box.w, box.h, face.image.channels);
    Mask mask_full(box.w, box.h);
    for (int i = 0; i < box.h; ++i)
        for (int j = 0; j < box.w; ++j) {
            double u = (j + 0.5) / face.scale_x - 0.5;
            double v = (i + 0.5) / face.scale_y - 0.5;
            for (int c = 0; c < face.image.channels; ++c)
                face_full.at(i, j, c) = sample_clamped(face.image, u, v, c);
            double uu = std::clamp(u, 0.0, static_cast<double>(mask.width - 1));
            double vv = std::clamp(v, 0.0, static_cast<double>(mask.height - 1));
            int u0 = static_cast<int>(std::floor(uu));
            int v0 = static_cast<int>(std::floor(vv));
            int u1 = std::min(u0 + 1, mask.width - 1);
            int v1 = std::min(v0 + 1, mask.height - 1);
            double fu = uu - u0;
            double fv = vv - v0;
            mask_full.at(i, j) = (mask.at(v0, u0) * (1.0 - fu) + mask.at(v0, u1) * fu) * (1.0 - fv) +
                                 (mask.at(v1, u0) * (1.0 - fu) + mask.at(v1, u1) * fu) * fv;
        }

    // composite at the shifted position
    for (int i = 0; i < box.h; ++i)
        for (int j = 0; j < box.w; ++j) {
            int ty = box.y + oy + i;
            int tx = box.x + ox + j;
            if (ty < 0 || ty >= bg.height || tx < 0 || tx >= bg.width) continue;
            double m = std::clamp(mask_full.at(i, j), 0.0, 1.0);
            if (m == 0.0) continue;
            for (int c = 0; c < bg.channels; ++c)
                result.image.at(ty, tx, c) =
                    m * face_full.at(i, j, c) + (1.0 - m) * bg.at(ty, tx, c);
        }

    // pixels of the original box left uncovered by the shifted masked face
    for (int i = 0; i < box.h; ++i)
        for (int j = 0; j < box.w; ++j) {
            int py = box.y + i;
            int px = box.x + j;
            int si = i - oy;  // shifted-face local coords covering (py, px)
            int sj = j - ox;
            double coverage = 0.0;
            if (si >= 0 && si < box.h && sj >= 0 && sj < box.w)
                coverage = std::clamp(mask_full.at(si, sj), 0.0, 1.0);
            result.gap_mask.at(py, px) = 1.0 - coverage;
        }
    return result;
}

Image fill_gaps(const Image& img, const Mask& gap_mask, double tol, int max_iters) {
    if (gap_mask.width != img.width || gap_mask.height != img.height)
        throw Error(ErrorCode::DimensionMismatch, "gap mask and image dimensions differ");

    const int W = img.width;
    const int H = img.height;
    std::vector<char> masked(static_cast<size_t>(W) * H, 0);
    size_t masked_count = 0;
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j)
            if (gap_mask.at(i, j) > 0.5) {
                masked[static_cast<size_t>(i) * W + j] = 1;
                ++masked_count;
            }
    if (masked_count == 0) return img;

    Image out = img;
    if (masked_count == out.pixel_count()) {
        std::fill(out.data.begin(), out.data.end(), 0.5);
        return out;
    }

    for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j)
            if (masked[static_cast<size_t>(i) * W + j])
                for (int c = 0; c < out.channels; ++c) out.at(i, j, c) = 0.5;

    const int di[4] = {-1, 1, 0, 0};
    const int dj[4] = {0, 0, -1, 1};
    for (int it = 0; it < max_iters; ++it) {
        double defect = 0.0;
        for (int i = 0; i < H; ++i)
            for (int j = 0; j < W; ++j) {
                if (!masked[static_cast<size_t>(i) * W + j]) continue;
                for (int c = 0; c < out.channels; ++c) {
                    double sum = 0.0;
                    int n = 0;
                    for (int k = 0; k < 4; ++k) {
                        int ii = i + di[k];
                        int jj = j + dj[k];
                        if (ii < 0 || ii >= H || jj < 0 || jj >= W) continue;
                        sum += out.at(ii, jj, c);
                        ++n;
                    }
                    if (n == 0) continue;
                    double mean = sum / n;
                    defect = std::max(defect, std::abs(out.at(i, j, c) - mean));
                    out.at(i, j, c) = mean;
                }
            }
        if (defect < tol) break;
    }
    return out;
}

}  // namespace wpc
