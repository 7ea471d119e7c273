#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wpc/fusion.hpp"
#include "wpc/metrics.hpp"

namespace wpc {

// Annotation JSON:
//   {"landmarks": [[x,y],...], "nose_index": k,
//    "lines": [[[x,y],...], ...], "face_box": [x,y,w,h]}
// plus optional ground-truth blocks "gt_landmarks", "gt_nose_index",
// "gt_lines" used for before/after scoring.
struct Annotations {
    std::optional<LandmarkSet> landmarks;
    std::vector<Polyline> lines;
    std::optional<Box> face_box;
    std::optional<LandmarkSet> gt_landmarks;
    std::vector<Polyline> gt_lines;
};

Annotations read_annotations(const std::string& path);
void write_annotations(const std::string& path, const Annotations& ann);

LensParams read_lens_json(const std::string& path);
void write_lens_json(const std::string& path, const LensParams& lens);

}  // namespace wpc
