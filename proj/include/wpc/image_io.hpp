#pragma once

#include <string>

#include "wpc/fusion.hpp"
#include "wpc/image.hpp"

namespace wpc {

// PNG (8-bit gray or RGB; alpha stripped, 16-bit narrowed on read) and binary
// PPM/PGM. Intensities map by /255 on read and round(v*255) with clamping on
// write. Dispatch is by file extension.
Image read_image(const std::string& path);
void write_image(const std::string& path, const Image& img);

Image read_png(const std::string& path);
void write_png(const std::string& path, const Image& img);

Image read_pnm(const std::string& path);
void write_pnm(const std::string& path, const Image& img);

// 8-bit grayscale PNG mask, 255 = full weight.
Mask read_mask(const std::string& path);
void write_mask(const std::string& path, const Mask& mask);

}  // namespace wpc
