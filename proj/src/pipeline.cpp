#include "wpc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "wpc/flow_io.hpp"
#include "wpc/image_io.hpp"

namespace wpc {

namespace fs = std::filesystem;
using nlohmann::json;

LensParams LensSpec::resolve(int width, int height) const {
    LensParams lens = default_lens(k1, k2, width, height);
    if (cx) lens.cx = *cx;
    if (cy) lens.cy = *cy;
    if (r_norm) lens.r_norm = *r_norm;
    return lens;
}

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::IoError, path + ": " + e.what());
    }
    return j;
}

// write-temp-then-rename so interrupted runs never leave half files
void atomic_write_text(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write " + tmp);
        out << text;
    }
    fs::rename(tmp, path);
}

template <typename WriteFn>
void atomic_write_with(const std::string& path, WriteFn&& fn) {
    std::string tmp = path + ".tmp";
    fn(tmp);
    fs::rename(tmp, path);
}

std::vector<Vec2> map_landmarks(const std::vector<Vec2>& pts, const FlowField& flow,
                                int* dropped) {
    WarpPointsResult mapped = warp_points(pts, flow);
    for (bool ok : mapped.converged)
        if (!ok && dropped) ++*dropped;
    return mapped.points;  // keep the last iterate; correspondence must survive
}

std::vector<Polyline> map_lines(const std::vector<Polyline>& lines, const FlowField& flow,
                                int* dropped) {
    std::vector<Polyline> out;
    out.reserve(lines.size());
    for (const Polyline& line : lines) {
        WarpPointsResult mapped = warp_points(line.points, flow);
        Polyline corrected;
        for (size_t k = 0; k < mapped.points.size(); ++k) {
            if (!mapped.converged[k]) {
                if (dropped) ++*dropped;
                continue;
            }
            corrected.points.push_back(mapped.points[k]);
        }
        out.push_back(std::move(corrected));
    }
    return out;
}

double mean_line_acc(const std::vector<Polyline>& out_lines,
                     const std::vector<Polyline>& gt_lines) {
    size_t n = std::min(out_lines.size(), gt_lines.size());
    double acc = 0.0;
    int used = 0;
    for (size_t i = 0; i < n; ++i) {
        if (out_lines[i].points.size() < 2 || gt_lines[i].points.size() < 2) continue;
        acc += line_acc(out_lines[i], gt_lines[i]);
        ++used;
    }
    if (used == 0)
        throw Error(ErrorCode::DegenerateLine, "no comparable line pairs");
    return acc / used;
}

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
    json j = load_json_file(path);
    PipelineConfig cfg;

    if (j.contains("weights")) {
        const json& w = j["weights"];
        cfg.weights.lambda1 = w.value("lambda1", cfg.weights.lambda1);
        cfg.weights.lambda2 = w.value("lambda2", cfg.weights.lambda2);
        cfg.weights.lambda3 = w.value("lambda3", cfg.weights.lambda3);
        cfg.weights.lambda4 = w.value("lambda4", cfg.weights.lambda4);
    }
    if (j.contains("solver")) {
        const json& s = j["solver"];
        cfg.solver.pyramid_levels = s.value("pyramid_levels", cfg.solver.pyramid_levels);
        cfg.solver.iterations_per_level =
            s.value("iterations_per_level", cfg.solver.iterations_per_level);
        cfg.solver.step_size = s.value("step_size", cfg.solver.step_size);
        cfg.solver.tolerance = s.value("tolerance", cfg.solver.tolerance);
        cfg.solver.smooth_sigma = s.value("smooth_sigma", cfg.solver.smooth_sigma);
        cfg.solver.seed = s.value("seed", cfg.solver.seed);
        std::string mode = s.value("mode", std::string("self_supervised"));
        if (mode == "supervised") cfg.solver.mode = SolverMode::Supervised;
        else if (mode == "self_supervised") cfg.solver.mode = SolverMode::SelfSupervised;
        else throw Error(ErrorCode::InvalidArgument, "unknown solver mode: " + mode);
        std::string kind = s.value("kind", std::string("line"));
        if (kind == "face") cfg.solver.kind = ObjectiveKind::Face;
        else if (kind == "line") cfg.solver.kind = ObjectiveKind::Line;
        else throw Error(ErrorCode::InvalidArgument, "unknown objective kind: " + kind);
    }
    if (j.contains("lens") && !j["lens"].is_null()) {
        const json& l = j["lens"];
        LensSpec spec;
        spec.k1 = l.value("k1", 0.0);
        spec.k2 = l.value("k2", 0.0);
        if (l.contains("cx")) spec.cx = l["cx"].get<double>();
        if (l.contains("cy")) spec.cy = l["cy"].get<double>();
        if (l.contains("r_norm")) spec.r_norm = l["r_norm"].get<double>();
        cfg.lens = spec;
    }
    if (j.contains("paths")) {
        const json& p = j["paths"];
        cfg.paths.input = p.value("input", std::string());
        cfg.paths.reference = p.value("reference", std::string());
        cfg.paths.annotations = p.value("annotations", std::string());
        cfg.paths.mask = p.value("mask", std::string());
        cfg.paths.face_flow = p.value("face_flow", std::string());
        cfg.paths.out = p.value("out", std::string("."));
    }
    cfg.dump_trace = j.value("dump_trace", false);
    return cfg;
}

CorrectResult run_correct(const PipelineConfig& config) {
    if (config.paths.input.empty())
        throw Error(ErrorCode::InvalidArgument, "no input image configured");
    fs::create_directories(config.paths.out);

    Image input = read_image(config.paths.input);
    std::optional<Image> reference;
    if (!config.paths.reference.empty()) reference = read_image(config.paths.reference);
    std::optional<Annotations> ann;
    if (!config.paths.annotations.empty())
        ann = read_annotations(config.paths.annotations);

    json report;
    report["input"] = config.paths.input;
    report["seed"] = config.solver.seed;
    report["errors"] = json::array();

    // --- background stage ---
    FlowField bg_flow;
    std::vector<TraceEntry> trace;
    std::string bg_method;
    if (config.lens) {
        LensParams lens = config.lens->resolve(input.width, input.height);
        bg_flow = barrel_flow(lens, input.width, input.height);
        bg_method = "lens_model";
    } else if (reference) {
        BackgroundResult bg =
            correct_background(input, config.weights, config.solver, reference);
        bg_flow = std::move(bg.flow);
        trace = std::move(bg.trace);
        bg_method = "reference_solve";
    } else if (ann && !ann->lines.empty()) {
        BackgroundResult bg =
            correct_background(input, config.weights, config.solver, std::nullopt, ann->lines);
        bg_flow = std::move(bg.flow);
        trace = std::move(bg.trace);
        bg_method = "line_solve";
    } else {
        throw Error(ErrorCode::MissingTarget,
                    "need a lens model, a reference image, or line annotations");
    }
    report["background"]["method"] = bg_method;
    if (!trace.empty()) report["background"]["final_objective"] = trace.back().objective;

    Image corrected = warp_image(input, bg_flow, Border::Clamp);

    // --- face stage ---
    CorrectResult result;
    std::optional<FlowField> face_flow;
    if (ann && ann->face_box) {
        FaceCrop crop = crop_face(input, *ann->face_box);
        std::string face_method;
        if (!config.paths.face_flow.empty()) {
            FlowField external = read_flo(config.paths.face_flow);
            if (external.width != kFaceCropSize || external.height != kFaceCropSize)
                throw Error(ErrorCode::DimensionMismatch,
                            "face flow must match the face crop resolution");
            face_flow = std::move(external);
            face_method = "external_flow";
        } else if (reference) {
            FaceCrop ref_crop = crop_face(*reference, *ann->face_box);
            SolverConfig sub = config.solver;
            sub.mode = SolverMode::SelfSupervised;
            SolveResult solve =
                optimize_flow(crop.image, ref_crop.image, std::nullopt, config.weights, sub);
            face_flow = std::move(solve.flow);
            face_method = "internal_solve";
        } else {
            face_flow = FlowField(kFaceCropSize, kFaceCropSize);  // identity
            face_method = "identity";
        }

        Mask mask(kFaceCropSize, kFaceCropSize, 1.0);
        if (!config.paths.mask.empty()) {
            Mask loaded = read_mask(config.paths.mask);
            if (loaded.width != kFaceCropSize || loaded.height != kFaceCropSize) {
                Image as_img(loaded.width, loaded.height, 1);
                for (size_t k = 0; k < loaded.weights.size(); ++k)
                    as_img.data[k] = loaded.weights[k];
                Image resized = resize_bilinear(as_img, kFaceCropSize, kFaceCropSize);
                for (size_t k = 0; k < mask.weights.size(); ++k)
                    mask.weights[k] = std::clamp(resized.data[k], 0.0, 1.0);
            } else {
                mask = std::move(loaded);
            }
        }

        FaceCrop corrected_crop = crop;
        corrected_crop.image = warp_image(crop.image, *face_flow, Border::Clamp);
        Vec2 shift = compute_face_translation(bg_flow, *ann->face_box);
        PasteResult pasted = paste_face(corrected, corrected_crop, mask, shift);
        corrected = fill_gaps(pasted.image, pasted.gap_mask);

        report["face"]["method"] = face_method;
        report["face"]["translation"] = {shift.x, shift.y};
        result.faces_processed = 1;
    }
    report["faces"] = result.faces_processed;

    // --- corrected annotations + metrics ---
    if (ann) {
        Annotations out_ann;
        int dropped = 0;
        if (ann->landmarks) {
            LandmarkSet lm;
            lm.points = map_landmarks(ann->landmarks->points, bg_flow, &dropped);
            lm.nose_index = ann->landmarks->nose_index;
            out_ann.landmarks = std::move(lm);
        }
        out_ann.lines = map_lines(ann->lines, bg_flow, &dropped);
        out_ann.face_box = ann->face_box;
        out_ann.gt_landmarks = ann->gt_landmarks;
        out_ann.gt_lines = ann->gt_lines;
        report["annotations"]["dropped_points"] = dropped;

        json metrics;
        if (!ann->gt_lines.empty() && !ann->lines.empty()) {
            try {
                metrics["line_acc_before"] = mean_line_acc(ann->lines, ann->gt_lines);
                metrics["line_acc_after"] = mean_line_acc(out_ann.lines, ann->gt_lines);
            } catch (const Error& e) {
                report["errors"].push_back({{"code", error_code_name(e.code())},
                                            {"message", e.what()}});
            }
        }
        if (ann->gt_landmarks && ann->landmarks) {
            try {
                metrics["shape_acc_before"] = shape_acc(*ann->landmarks, *ann->gt_landmarks);
                metrics["shape_acc_after"] =
                    shape_acc(*out_ann.landmarks, *ann->gt_landmarks);
                metrics["landmark_distance_before"] =
                    landmark_distance(*ann->landmarks, *ann->gt_landmarks);
                metrics["landmark_distance_after"] =
                    landmark_distance(*out_ann.landmarks, *ann->gt_landmarks);
            } catch (const Error& e) {
                report["errors"].push_back({{"code", error_code_name(e.code())},
                                            {"message", e.what()}});
            }
        }
        if (!metrics.is_null()) report["metrics"] = metrics;

        std::string ann_path = (fs::path(config.paths.out) / "corrected_annotations.json").string();
        atomic_write_with(ann_path, [&](const std::string& p) { write_annotations(p, out_ann); });
    }

    // --- artifacts ---
    atomic_write_with((fs::path(config.paths.out) / "corrected.png").string(),
                      [&](const std::string& p) { write_png(p, corrected); });
    atomic_write_with((fs::path(config.paths.out) / "background_flow.flo").string(),
                      [&](const std::string& p) { write_flo(p, bg_flow); });
    if (face_flow)
        atomic_write_with((fs::path(config.paths.out) / "face_flow.flo").string(),
                          [&](const std::string& p) { write_flo(p, *face_flow); });
    if (config.dump_trace && !trace.empty()) {
        std::string csv = "iteration,level,objective\n";
        for (const TraceEntry& t : trace)
            csv += std::to_string(t.iteration) + "," + std::to_string(t.level) + "," +
                   csv_number(t.objective) + "\n";
        atomic_write_text((fs::path(config.paths.out) / "trace.csv").string(), csv);
    }

    result.report_path = (fs::path(config.paths.out) / "report.json").string();
    atomic_write_text(result.report_path, report.dump(2) + "\n");
    return result;
}

EvalSummary run_eval(const std::string& dataset_dir, const std::string& out_dir) {
    if (!fs::is_directory(dataset_dir))
        throw Error(ErrorCode::IoError, dataset_dir + " is not a directory");
    fs::create_directories(out_dir);

    std::vector<std::string> ids;
    const std::string gt_suffix = ".gt.json";
    for (const fs::directory_entry& entry : fs::directory_iterator(dataset_dir)) {
        std::string name = entry.path().filename().string();
        if (name.size() > gt_suffix.size() &&
            name.compare(name.size() - gt_suffix.size(), gt_suffix.size(), gt_suffix) == 0)
            ids.push_back(name.substr(0, name.size() - gt_suffix.size()));
    }
    std::sort(ids.begin(), ids.end());
    if (ids.empty())
        throw Error(ErrorCode::EmptyDataset, "no *.gt.json annotations in " + dataset_dir);

    std::string csv = "image_id,line_acc,shape_acc,landmark_distance\n";
    std::string skip_log;
    EvalSummary summary;
    double sum_line = 0.0, sum_shape = 0.0, sum_dist = 0.0;
    int n_line = 0, n_shape = 0, n_dist = 0;

    for (const std::string& id : ids) {
        fs::path gt_path = fs::path(dataset_dir) / (id + gt_suffix);
        fs::path out_path = fs::path(dataset_dir) / (id + ".out.json");
        if (!fs::exists(out_path)) {
            skip_log += id + ": missing output annotations\n";
            ++summary.skipped;
            continue;
        }
        try {
            Annotations gt = read_annotations(gt_path.string());
            Annotations out = read_annotations(out_path.string());

            std::string line_cell, shape_cell, dist_cell;
            if (!gt.lines.empty() && !out.lines.empty()) {
                double v = mean_line_acc(out.lines, gt.lines);
                line_cell = csv_number(v);
                sum_line += v;
                ++n_line;
            }
            if (gt.landmarks && out.landmarks) {
                double s = shape_acc(*out.landmarks, *gt.landmarks);
                double d = landmark_distance(*out.landmarks, *gt.landmarks);
                shape_cell = csv_number(s);
                dist_cell = csv_number(d);
                sum_shape += s;
                sum_dist += d;
                ++n_shape;
                ++n_dist;
            }
            csv += id + "," + line_cell + "," + shape_cell + "," + dist_cell + "\n";
            ++summary.evaluated;
        } catch (const Error& e) {
            skip_log += id + ": " + e.what() + "\n";
            ++summary.skipped;
        }
    }
    if (summary.evaluated == 0)
        throw Error(ErrorCode::EmptyDataset, "no evaluable image pairs in " + dataset_dir);

    summary.mean_line_acc = n_line ? sum_line / n_line : 0.0;
    summary.mean_shape_acc = n_shape ? sum_shape / n_shape : 0.0;
    summary.mean_landmark_distance = n_dist ? sum_dist / n_dist : 0.0;
    csv += "mean," + (n_line ? csv_number(summary.mean_line_acc) : std::string()) + "," +
           (n_shape ? csv_number(summary.mean_shape_acc) : std::string()) + "," +
           (n_dist ? csv_number(summary.mean_landmark_distance) : std::string()) + "\n";

    atomic_write_text((fs::path(out_dir) / "eval.csv").string(), csv);
    atomic_write_text((fs::path(out_dir) / "eval_skipped.txt").string(), skip_log);
    return summary;
}

void run_synth(const std::string& input_image, const std::string& out_root,
               const std::string& split, int count, double strength,
               std::uint64_t seed, bool write_gt) {
    if (count < 1)
        throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
    Image img = read_image(input_image);
    fs::path dir = fs::path(out_root) / split;
    fs::create_directories(dir);

    std::string stem = fs::path(input_image).stem().string();
    for (int k = 0; k < count; ++k) {
        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "_%04d", k);
        std::string id = stem + suffix;
        SyntheticPair pair =
            make_corner_stretch_pair(img, strength, seed + static_cast<std::uint64_t>(k), 0.1);

        atomic_write_with((dir / (id + ".png")).string(),
                          [&](const std::string& p) { write_png(p, pair.distorted); });
        atomic_write_with((dir / (id + ".flo")).string(),
                          [&](const std::string& p) { write_flo(p, pair.gt_flow); });
        if (write_gt)
            atomic_write_with((dir / (id + "_gt.png")).string(),
                              [&](const std::string& p) { write_png(p, img); });

        json meta;
        meta["source"] = input_image;
        meta["strength"] = strength;
        meta["strength_used"] = pair.strength_used;
        meta["seed"] = seed + static_cast<std::uint64_t>(k);
        meta["width"] = img.width;
        meta["height"] = img.height;
        if (write_gt) meta["gt_image"] = id + "_gt.png";
        atomic_write_text((dir / (id + ".json")).string(), meta.dump(2) + "\n");
    }
}

}  // namespace wpc
