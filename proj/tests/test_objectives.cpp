#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "wpc/objectives.hpp"
#include "wpc/warp.hpp"

using namespace wpc;

TEST_CASE("flow_loss examples") {
    oracle::Rng rng(2);
    FlowField f = oracle::random_jittered_flow(6, 5, rng);
    CHECK(flow_loss(f, f) == 0.0);

    FlowField zero(6, 5);
    CHECK(flow_loss(zero, oracle::constant_flow(6, 5, 1.0, 0.0)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(flow_loss(zero, oracle::constant_flow(6, 5, 3.0, 4.0)) == doctest::Approx(12.5).epsilon(1e-15));
    CHECK_THROWS_AS(flow_loss(zero, FlowField(4, 4)), Error);
}

TEST_CASE("pixel_loss examples") {
    Image a(4, 4, 1, 0.0);
    Image b(4, 4, 1, 1.0);
    Image half(4, 4, 1, 0.5);
    CHECK(pixel_loss(a, a) == 0.0);
    CHECK(pixel_loss(a, b) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pixel_loss(a, half) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(pixel_loss(a, Image(3, 4, 1)), Error);
}

TEST_CASE("tv_loss brute force and properties") {
    FlowField constant = oracle::constant_flow(6, 6, 2.0, -1.0);
    CHECK(tv_loss(constant) <= 2.0 * std::sqrt(1e-8) + 1e-15);

    FlowField ramp(2, 2);
    ramp.dx(0, 0) = 0.0;
    ramp.dx(0, 1) = 1.0;
    ramp.dx(1, 0) = 0.0;
    ramp.dx(1, 1) = 1.0;
    CHECK(tv_loss(ramp) == doctest::Approx(oracle::ref_tv_loss(ramp)).epsilon(1e-15));
    CHECK(tv_loss(ramp) == doctest::Approx(0.50015).epsilon(1e-6));

    oracle::Rng rng(13);
    for (int t = 0; t < 10; ++t) {
        FlowField f = oracle::random_jittered_flow(9, 8, rng);
        CHECK(tv_loss(f) == doctest::Approx(oracle::ref_tv_loss(f)).epsilon(1e-14));
    }

    // positive homogeneity up to the eps smoothing
    FlowField doubled(9, 8);
    FlowField f = oracle::random_jittered_flow(9, 8, rng);
    for (size_t k = 0; k < f.data.size(); ++k) doubled.data[k] = 2.0 * f.data[k];
    CHECK(tv_loss(doubled) == doctest::Approx(2.0 * tv_loss(f)).epsilon(1e-6));

    CHECK_THROWS_AS(tv_loss(FlowField(1, 5)), Error);
}

TEST_CASE("sym_loss examples") {
    CHECK(sym_loss(FlowField(8, 8)) == 0.0);

    LensParams lens = default_lens(0.1, 0.01, 32, 32);
    CHECK(sym_loss(barrel_flow(lens, 32, 32)) < 1e-12);

    FlowField constant = oracle::constant_flow(7, 5, 1.0, 0.0);
    CHECK(sym_loss(constant) == 4.0);

    oracle::Rng rng(19);
    for (int t = 0; t < 10; ++t) {
        FlowField f = oracle::random_jittered_flow(8, 6, rng);
        CHECK(sym_loss(f) == doctest::Approx(oracle::ref_sym_loss(f)).epsilon(1e-14));
        for (FlipAxis axis : {FlipAxis::Horizontal, FlipAxis::Vertical, FlipAxis::Central})
            CHECK(sym_loss(flip_flow(f, axis)) == doctest::Approx(sym_loss(f)).epsilon(1e-12));
    }
}

TEST_CASE("face and line objectives are the documented combinations") {
    oracle::Rng rng(23);
    Image img = oracle::random_image(8, 8, 1, rng);
    Image gt_img = oracle::random_image(8, 8, 1, rng);
    FlowField flow = oracle::random_jittered_flow(8, 8, rng);
    FlowField gt_flow = oracle::random_jittered_flow(8, 8, rng);
    ObjectiveWeights w;

    double face = face_objective(flow, gt_flow, img, gt_img, w);
    double hand_face = flow_loss(flow, gt_flow) +
                       w.lambda1 * pixel_loss(warp_image(img, flow), gt_img) +
                       w.lambda2 * tv_loss(flow);
    CHECK(face == doctest::Approx(hand_face).epsilon(1e-15));

    double line = line_objective(flow, gt_flow, img, gt_img, w);
    double hand_line = flow_loss(flow, gt_flow) +
                       w.lambda3 * pixel_loss(warp_image(img, flow), gt_img) +
                       w.lambda4 * sym_loss(flow);
    CHECK(line == doctest::Approx(hand_line).epsilon(1e-15));

    ObjectiveWeights zeroed;
    zeroed.lambda1 = zeroed.lambda2 = zeroed.lambda3 = zeroed.lambda4 = 0.0;
    CHECK(face_objective(flow, gt_flow, img, gt_img, zeroed) ==
          doctest::Approx(flow_loss(flow, gt_flow)).epsilon(1e-15));
    CHECK(line_objective(flow, gt_flow, img, gt_img, zeroed) ==
          doctest::Approx(flow_loss(flow, gt_flow)).epsilon(1e-15));

    // identity inputs sit at the minimum
    FlowField zero(8, 8);
    CHECK(face_objective(zero, zero, img, img, w) <= 2.0 * std::sqrt(1e-8) * w.lambda2 + 1e-15);
    CHECK(line_objective(zero, zero, img, img, w) == 0.0);
}

TEST_CASE("gradients vanish at their minimizers") {
    oracle::Rng rng(29);
    Image img = oracle::random_image(8, 8, 1, rng);
    FlowField gt = oracle::random_jittered_flow(8, 8, rng);

    ObjectiveWeights only_flow;
    only_flow.lambda3 = only_flow.lambda4 = 0.0;
    ObjectiveInputs in;
    in.img = &img;
    in.gt_img = &img;
    in.gt_flow = &gt;
    FlowField g = objective_gradient(ObjectiveKind::Line, gt, in, only_flow);
    for (double v : g.data) CHECK(v == 0.0);

    // flip-symmetric fields are exact stationary points of the sym term
    LensParams lens = default_lens(0.1, 0.01, 16, 16);
    FlowField radial = barrel_flow(lens, 16, 16);
    FlowField gs = sym_loss_gradient(radial);
    for (double v : gs.data) CHECK(std::abs(v) <= 1e-10);
}

namespace {

double max_rel_error(const FlowField& analytic, const FlowField& fd) {
    double worst = 0.0;
    for (size_t k = 0; k < analytic.data.size(); ++k) {
        double denom = std::max({std::abs(analytic.data[k]), std::abs(fd.data[k]), 1e-8});
        worst = std::max(worst, std::abs(analytic.data[k] - fd.data[k]) / denom);
    }
    return worst;
}

}  // namespace

TEST_CASE("objective_gradient matches central finite differences") {
    ObjectiveWeights w;  // paper values (2, 0.5) and (1, 2)
    for (int seed = 0; seed < 10; ++seed) {
        oracle::Rng rng(1000 + seed);
        Image img = oracle::random_image(8, 8, 1, rng);
        Image gt_img = oracle::random_image(8, 8, 1, rng);
        FlowField flow = oracle::random_jittered_flow(8, 8, rng);
        FlowField gt_flow = oracle::random_jittered_flow(8, 8, rng);
        ObjectiveInputs in;
        in.img = &img;
        in.gt_img = &gt_img;
        in.gt_flow = &gt_flow;
        for (ObjectiveKind kind :
             {ObjectiveKind::Face, ObjectiveKind::Line, ObjectiveKind::SelfSupervised}) {
            FlowField analytic = objective_gradient(kind, flow, in, w);
            FlowField fd = oracle::fd_gradient(kind, flow, in, w);
            CHECK(max_rel_error(analytic, fd) < 1e-3);
        }
    }
}
