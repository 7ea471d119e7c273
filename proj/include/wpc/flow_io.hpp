#pragma once

#include <string>

#include "wpc/geometry.hpp"

namespace wpc {

// Middlebury .flo: float magic 202021.25, int32 width, int32 height,
// interleaved float32 (dx, dy) row-major, little-endian.
inline constexpr float kFloMagic = 202021.25f;

FlowField read_flo(const std::string& path);
void write_flo(const std::string& path, const FlowField& flow);

}  // namespace wpc
