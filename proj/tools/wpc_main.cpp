// wpc: wide-angle portrait correction tool.
// Subcommands: correct, synth, eval, warp, flow, distort.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wpc/flow_io.hpp"
#include "wpc/image_io.hpp"
#include "wpc/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

wpc::LensSpec parse_lens(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw wpc::Error(wpc::ErrorCode::InvalidArgument, "bad --lens value: " + item);
        }
    }
    if (vals.size() < 2 || vals.size() > 5)
        throw wpc::Error(wpc::ErrorCode::InvalidArgument,
                         "--lens expects k1,k2[,cx,cy[,r_norm]]");
    wpc::LensSpec spec;
    spec.k1 = vals[0];
    spec.k2 = vals[1];
    if (vals.size() >= 4) {
        spec.cx = vals[2];
        spec.cy = vals[3];
    }
    if (vals.size() == 5) spec.r_norm = vals[4];
    return spec;
}

int run(int argc, char** argv) {
    CLI::App app{"wide-angle portrait correction"};
    app.require_subcommand(1);

    // --- correct ---
    auto* correct = app.add_subcommand("correct", "correct a wide-angle image");
    std::string c_config, c_input, c_reference, c_annotations, c_mask, c_face_flow;
    std::string c_out, c_lens;
    std::optional<std::uint64_t> c_seed;
    bool c_dump_trace = false;
    correct->add_option("--config", c_config, "pipeline config JSON");
    correct->add_option("--input", c_input, "distorted input image");
    correct->add_option("--reference", c_reference, "clean target image");
    correct->add_option("--annotations", c_annotations, "annotation JSON");
    correct->add_option("--mask", c_mask, "face mask PNG (255 = face)");
    correct->add_option("--face-flow", c_face_flow, "externally computed face flow (.flo)");
    correct->add_option("--out", c_out, "output directory");
    correct->add_option("--lens", c_lens, "barrel lens k1,k2[,cx,cy[,r_norm]]");
    correct->add_option("--seed", c_seed, "solver seed");
    correct->add_flag("--dump-trace", c_dump_trace, "write trace.csv");

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "generate corner-stretch training pairs");
    std::string s_input, s_out = "dataset", s_split = "train";
    int s_count = 1;
    double s_strength = 8.0;
    std::uint64_t s_seed = 0;
    bool s_write_gt = false;
    synth->add_option("--input", s_input, "source image")->required();
    synth->add_option("--out", s_out, "dataset root directory");
    synth->add_option("--split", s_split, "dataset split name");
    synth->add_option("--count", s_count, "number of pairs");
    synth->add_option("--strength", s_strength, "corner displacement in px");
    synth->add_option("--seed", s_seed, "jitter seed");
    synth->add_flag("--write-gt", s_write_gt, "also write the clean image per pair");

    // --- eval ---
    auto* eval = app.add_subcommand("eval", "score a dataset of annotation pairs");
    std::string e_dir, e_out = ".";
    eval->add_option("--dir", e_dir, "directory of {id}.out.json/{id}.gt.json pairs")->required();
    eval->add_option("--out", e_out, "output directory for eval.csv");

    // --- warp ---
    auto* warp = app.add_subcommand("warp", "apply a flow to an image");
    std::string w_input, w_flow, w_out, w_border = "zero";
    warp->add_option("--input", w_input, "input image")->required();
    warp->add_option("--flow", w_flow, "flow file (.flo)")->required();
    warp->add_option("--out", w_out, "output image path")->required();
    warp->add_option("--border", w_border, "zero | clamp");

    // --- flow ---
    auto* flow_cmd = app.add_subcommand("flow", "inspect or convert flow files");
    auto* flow_info = flow_cmd->add_subcommand("info", "print flow statistics");
    std::string fi_path;
    flow_info->add_option("file", fi_path, "flow file")->required();
    auto* flow_png = flow_cmd->add_subcommand("png", "render flow magnitude to PNG");
    std::string fp_path, fp_out;
    flow_png->add_option("file", fp_path, "flow file")->required();
    flow_png->add_option("out", fp_out, "output PNG")->required();
    flow_cmd->require_subcommand(1);

    // --- distort ---
    auto* distort = app.add_subcommand("distort", "apply barrel distortion to an image");
    std::string d_input, d_out = ".", d_lens;
    distort->add_option("--input", d_input, "input image")->required();
    distort->add_option("--lens", d_lens, "barrel lens k1,k2[,cx,cy[,r_norm]]")->required();
    distort->add_option("--out", d_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (*correct) {
        wpc::PipelineConfig config;
        if (!c_config.empty()) config = wpc::load_config(c_config);
        if (!c_input.empty()) config.paths.input = c_input;
        if (!c_reference.empty()) config.paths.reference = c_reference;
        if (!c_annotations.empty()) config.paths.annotations = c_annotations;
        if (!c_mask.empty()) config.paths.mask = c_mask;
        if (!c_face_flow.empty()) config.paths.face_flow = c_face_flow;
        if (!c_out.empty()) config.paths.out = c_out;
        if (!c_lens.empty()) config.lens = parse_lens(c_lens);
        if (c_seed) config.solver.seed = *c_seed;
        if (c_dump_trace) config.dump_trace = true;

        wpc::CorrectResult result = wpc::run_correct(config);
        std::cout << "corrected -> " << config.paths.out << " (faces: "
                  << result.faces_processed << ")\n";
        return 0;
    }
    if (*synth) {
        wpc::run_synth(s_input, s_out, s_split, s_count, s_strength, s_seed, s_write_gt);
        std::cout << "wrote " << s_count << " pair(s) under "
                  << (fs::path(s_out) / s_split).string() << "\n";
        return 0;
    }
    if (*eval) {
        wpc::EvalSummary summary = wpc::run_eval(e_dir, e_out);
        std::printf("mean,%.6f,%.6f,%.6f (evaluated %d, skipped %d)\n",
                    summary.mean_line_acc, summary.mean_shape_acc,
                    summary.mean_landmark_distance, summary.evaluated, summary.skipped);
        return 0;
    }
    if (*warp) {
        wpc::Image img = wpc::read_image(w_input);
        wpc::FlowField flow = wpc::read_flo(w_flow);
        wpc::Border border;
        if (w_border == "zero") border = wpc::Border::Zero;
        else if (w_border == "clamp") border = wpc::Border::Clamp;
        else throw wpc::Error(wpc::ErrorCode::InvalidArgument, "--border must be zero or clamp");
        wpc::write_image(w_out, wpc::warp_image(img, flow, border));
        return 0;
    }
    if (*flow_cmd) {
        if (*flow_info) {
            wpc::FlowField f = wpc::read_flo(fi_path);
            double max_mag = 0.0, sum_mag = 0.0;
            for (int i = 0; i < f.height; ++i)
                for (int j = 0; j < f.width; ++j) {
                    double m = std::hypot(f.dx(i, j), f.dy(i, j));
                    max_mag = std::max(max_mag, m);
                    sum_mag += m;
                }
            json info;
            info["width"] = f.width;
            info["height"] = f.height;
            info["mean_magnitude"] = sum_mag / f.pixel_count();
            info["max_magnitude"] = max_mag;
            std::cout << info.dump(2) << "\n";
        } else if (*flow_png) {
            wpc::FlowField f = wpc::read_flo(fp_path);
            double max_mag = 0.0;
            for (int i = 0; i < f.height; ++i)
                for (int j = 0; j < f.width; ++j)
                    max_mag = std::max(max_mag, std::hypot(f.dx(i, j), f.dy(i, j)));
            wpc::Image img(f.width, f.height, 1);
            for (int i = 0; i < f.height; ++i)
                for (int j = 0; j < f.width; ++j)
                    img.at(i, j) = max_mag > 0.0
                                       ? std::hypot(f.dx(i, j), f.dy(i, j)) / max_mag
                                       : 0.0;
            wpc::write_image(fp_out, img);
        }
        return 0;
    }
    if (*distort) {
        wpc::Image img = wpc::read_image(d_input);
        wpc::LensSpec spec = parse_lens(d_lens);
        wpc::LensParams lens = spec.resolve(img.width, img.height);
        wpc::SyntheticPair pair = wpc::make_barrel_pair(img, lens);
        fs::create_directories(d_out);
        wpc::write_png((fs::path(d_out) / "distorted.png").string(), pair.distorted);
        wpc::write_flo((fs::path(d_out) / "gt_flow.flo").string(), pair.gt_flow);
        wpc::write_lens_json((fs::path(d_out) / "lens.json").string(), lens);
        std::cout << "wrote distorted pair under " << d_out << "\n";
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const wpc::Error& e) {
        json err;
        err["error"]["code"] = wpc::error_code_name(e.code());
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err;
        err["error"]["code"] = "Internal";
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
