#include "wpc/image.hpp"

#include <algorithm>
#include <cmath>

namespace wpc {

double sample_clamped(const Image& img, double x, double y, int ch) {
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    int x1 = std::min(x0 + 1, img.width - 1);
    int y1 = std::min(y0 + 1, img.height - 1);
    double fx = x - x0;
    double fy = y - y0;
    double top = img.at(y0, x0, ch) * (1.0 - fx) + img.at(y0, x1, ch) * fx;
    double bot = img.at(y1, x0, ch) * (1.0 - fx) + img.at(y1, x1, ch) * fx;
    return top * (1.0 - fy) + bot * fy;
}

Image to_gray(const Image& img) {
    if (img.channels == 1) return img;
    Image out(img.width, img.height, 1);
    for (int i = 0; i < img.height; ++i)
        for (int j = 0; j < img.width; ++j)
            out.at(i, j) = 0.299 * img.at(i, j, 0) + 0.587 * img.at(i, j, 1) +
                           0.114 * img.at(i, j, 2);
    return out;
}

Image gaussian_blur(const Image& img, double sigma) {
    if (sigma <= 0.0) return img;
    int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-0.5 * (k * k) / (sigma * sigma));
        sum += kernel[k + radius];
    }
    for (double& v : kernel) v /= sum;

    Image tmp(img.width, img.height, img.channels);
    for (int i = 0; i < img.height; ++i)
        for (int j = 0; j < img.width; ++j)
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    int jj = std::clamp(j + k, 0, img.width - 1);
                    acc += kernel[k + radius] * img.at(i, jj, c);
                }
                tmp.at(i, j, c) = acc;
            }
    Image out(img.width, img.height, img.channels);
    for (int i = 0; i < img.height; ++i)
        for (int j = 0; j < img.width; ++j)
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    int ii = std::clamp(i + k, 0, img.height - 1);
                    acc += kernel[k + radius] * tmp.at(ii, j, c);
                }
                out.at(i, j, c) = acc;
            }
    return out;
}

Image downsample_half(const Image& img) {
    int ow = (img.width + 1) / 2;
    int oh = (img.height + 1) / 2;
    Image out(ow, oh, img.channels);
    for (int i = 0; i < oh; ++i)
        for (int j = 0; j < ow; ++j) {
            int i0 = 2 * i;
            int j0 = 2 * j;
            int i1 = std::min(i0 + 1, img.height - 1);
            int j1 = std::min(j0 + 1, img.width - 1);
            for (int c = 0; c < img.channels; ++c)
                out.at(i, j, c) = 0.25 * (img.at(i0, j0, c) + img.at(i0, j1, c) +
                                          img.at(i1, j0, c) + img.at(i1, j1, c));
        }
    return out;
}

Image resize_bilinear(const Image& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1)
        throw Error(ErrorCode::InvalidArgument, "resize target must be positive");
    Image out(out_w, out_h, img.channels);
    double sx = static_cast<double>(img.width) / out_w;
    double sy = static_cast<double>(img.height) / out_h;
    for (int i = 0; i < out_h; ++i)
        for (int j = 0; j < out_w; ++j) {
            double x = (j + 0.5) * sx - 0.5;
            double y = (i + 0.5) * sy - 0.5;
            for (int c = 0; c < img.channels; ++c)
                out.at(i, j, c) = sample_clamped(img, x, y, c);
        }
    return out;
}

}  // namespace wpc
