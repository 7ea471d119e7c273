#pragma once

#include <vector>

#include "wpc/error.hpp"

namespace wpc {

// Dense raster of float intensities, row-major, channel-interleaved.
// Values are in [0,1] when loaded from files; intermediate computation may
// leave the range, writers clamp on output.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;

    Image() = default;

    Image(int w, int h, int c, double fill = 0.0)
        : width(w), height(h), channels(c),
          data(static_cast<size_t>(w) * h * c, fill) {
        if (w < 1 || h < 1 || (c != 1 && c != 3))
            throw Error(ErrorCode::InvalidArgument,
                        "image dimensions must be positive with 1 or 3 channels");
    }

    double& at(int row, int col, int ch = 0) {
        return data[(static_cast<size_t>(row) * width + col) * channels + ch];
    }
    double at(int row, int col, int ch = 0) const {
        return data[(static_cast<size_t>(row) * width + col) * channels + ch];
    }

    bool same_shape(const Image& other) const {
        return width == other.width && height == other.height &&
               channels == other.channels;
    }

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
    size_t value_count() const { return pixel_count() * channels; }
};

// Bilinear sample with coordinates clamped to the image rectangle.
double sample_clamped(const Image& img, double x, double y, int ch);

Image to_gray(const Image& img);

// Separable Gaussian blur, clamp-to-edge borders. sigma <= 0 returns a copy.
Image gaussian_blur(const Image& img, double sigma);

// 2x2 box-mean downsample to ceil(w/2) x ceil(h/2).
Image downsample_half(const Image& img);

// Bilinear resize to an arbitrary size (pixel-center convention).
Image resize_bilinear(const Image& img, int out_w, int out_h);

}  // namespace wpc
