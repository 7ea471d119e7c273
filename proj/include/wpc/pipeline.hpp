#pragma once

#include <optional>
#include <string>

#include "wpc/annotations.hpp"
#include "wpc/solver.hpp"
#include "wpc/synthgen.hpp"

namespace wpc {

// Lens entry of the pipeline config; center and normalization radius fall
// back to image-derived defaults when absent.
struct LensSpec {
    double k1 = 0.0;
    double k2 = 0.0;
    std::optional<double> cx;
    std::optional<double> cy;
    std::optional<double> r_norm;

    LensParams resolve(int width, int height) const;
};

struct PipelinePaths {
    std::string input;
    std::string reference;
    std::string annotations;
    std::string mask;
    std::string face_flow;
    std::string out = ".";
};

struct PipelineConfig {
    ObjectiveWeights weights;
    SolverConfig solver;
    std::optional<LensSpec> lens;
    PipelinePaths paths;
    bool dump_trace = false;
};

// Config JSON: {"weights": {...}, "solver": {...}, "lens": {...},
// "paths": {...}, "dump_trace": bool}. Every key is optional; flag overrides
// are applied by the CLI after loading.
PipelineConfig load_config(const std::string& path);

struct CorrectResult {
    int faces_processed = 0;
    std::string report_path;
};

// Full correction pass: background flow (lens model, reference-driven solve,
// or annotated-line solve), optional face crop/correct/paste with gap fill,
// corrected annotations, JSON report. Artifacts land under paths.out.
CorrectResult run_correct(const PipelineConfig& config);

struct EvalSummary {
    int evaluated = 0;
    int skipped = 0;
    double mean_line_acc = 0.0;
    double mean_shape_acc = 0.0;
    double mean_landmark_distance = 0.0;
};

// Scores every {id}.out.json / {id}.gt.json pair under dataset_dir and writes
// eval.csv (per-image rows plus a summary mean row) and eval_skipped.txt.
EvalSummary run_eval(const std::string& dataset_dir, const std::string& out_dir);

// Corner-stretch batch generation: {out_root}/{split}/{id}.png|.flo|.json.
void run_synth(const std::string& input_image, const std::string& out_root,
               const std::string& split, int count, double strength,
               std::uint64_t seed, bool write_gt);

}  // namespace wpc
