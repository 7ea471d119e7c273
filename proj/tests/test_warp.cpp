#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "wpc/warp.hpp"

using namespace wpc;

TEST_CASE("warp_image with zero flow is the exact identity") {
    oracle::Rng rng(21);
    Image img = oracle::random_image(9, 7, 3, rng);
    FlowField zero(9, 7);
    Image out = warp_image(img, zero);
    CHECK(oracle::max_abs_diff(out.data, img.data) == 0.0);
}

TEST_CASE("warp_image hand examples") {
    SUBCASE("integer shift with zero padding") {
        Image img(3, 1, 1);
        img.at(0, 0) = 0.1;
        img.at(0, 1) = 0.5;
        img.at(0, 2) = 0.9;
        Image out = warp_image(img, oracle::constant_flow(3, 1, 1.0, 0.0));
        CHECK(out.at(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(out.at(0, 1) == doctest::Approx(0.9).epsilon(1e-15));
        CHECK(out.at(0, 2) == 0.0);
    }
    SUBCASE("half-pixel shift") {
        Image img(2, 1, 1);
        img.at(0, 0) = 0.0;
        img.at(0, 1) = 1.0;
        Image out = warp_image(img, oracle::constant_flow(2, 1, 0.5, 0.0));
        CHECK(out.at(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
        // second pixel samples x = 1.5: only the in-bounds neighbor remains
        CHECK(out.at(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("warp_image matches the reference interpolation") {
    oracle::Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        Image img = oracle::random_image(16, 16, 1, rng);
        FlowField flow = oracle::random_jittered_flow(16, 16, rng, 2.5);
        Image ours = warp_image(img, flow);
        Image ref = oracle::ref_warp(img, flow);
        CHECK(oracle::max_abs_diff(ours.data, ref.data) <= 1e-12);
    }
}

TEST_CASE("warp_image is linear in the image argument") {
    oracle::Rng rng(31);
    Image a = oracle::random_image(10, 8, 1, rng);
    Image b = oracle::random_image(10, 8, 1, rng);
    FlowField flow = oracle::random_jittered_flow(10, 8, rng);

    Image mix(10, 8, 1);
    const double alpha = 0.3, beta = 0.6;
    for (size_t k = 0; k < mix.data.size(); ++k)
        mix.data[k] = alpha * a.data[k] + beta * b.data[k];

    Image warped_mix = warp_image(mix, flow);
    Image wa = warp_image(a, flow);
    Image wb = warp_image(b, flow);
    for (size_t k = 0; k < mix.data.size(); ++k)
        CHECK(std::abs(warped_mix.data[k] - (alpha * wa.data[k] + beta * wb.data[k])) <= 1e-12);
}

TEST_CASE("warp output never exceeds the input maximum") {
    oracle::Rng rng(41);
    Image img = oracle::random_image(12, 12, 1, rng);
    double max_in = 0.0;
    for (double v : img.data) max_in = std::max(max_in, v);
    for (int t = 0; t < 5; ++t) {
        FlowField flow = oracle::random_jittered_flow(12, 12, rng, 3.0);
        for (Border border : {Border::Zero, Border::Clamp}) {
            Image out = warp_image(img, flow, border);
            for (double v : out.data) CHECK(v <= max_in + 1e-12);
        }
    }
}

TEST_CASE("warp_image clamp border replicates edges") {
    Image img(3, 1, 1);
    img.at(0, 0) = 0.1;
    img.at(0, 1) = 0.5;
    img.at(0, 2) = 0.9;
    Image out = warp_image(img, oracle::constant_flow(3, 1, 1.0, 0.0), Border::Clamp);
    CHECK(out.at(0, 2) == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("warp_image dimension mismatch") {
    Image img(4, 4, 1);
    CHECK_THROWS_AS(warp_image(img, FlowField(5, 4)), Error);
}

TEST_CASE("warp_points basics") {
    FlowField zero(16, 16);
    std::vector<Vec2> pts{{3.0, 4.0}, {10.5, 7.25}};
    WarpPointsResult r = warp_points(pts, zero);
    REQUIRE(r.points.size() == 2);
    CHECK(r.converged[0]);
    CHECK(r.points[0].x == 3.0);
    CHECK(r.points[0].y == 4.0);
    CHECK(r.points[1].x == 10.5);

    FlowField shift = oracle::constant_flow(16, 16, 1.0, 0.0);
    WarpPointsResult s = warp_points({{5.0, 5.0}}, shift);
    CHECK(s.converged[0]);
    CHECK(s.points[0].x == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(s.points[0].y == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("warp_points satisfies the round-trip residual on a barrel flow") {
    LensParams lens = default_lens(0.1, 0.01, 64, 64);
    FlowField flow = barrel_flow(lens, 64, 64);
    std::vector<Vec2> pts;
    oracle::Rng rng(17);
    for (int t = 0; t < 50; ++t)
        pts.push_back({rng.uniform(4.0, 59.0), rng.uniform(4.0, 59.0)});
    WarpPointsResult r = warp_points(pts, flow);
    for (size_t k = 0; k < pts.size(); ++k) {
        REQUIRE(r.converged[k]);
        Vec2 d = sample_flow(flow, r.points[k].x, r.points[k].y);
        double res = std::hypot(r.points[k].x + d.x - pts[k].x,
                                r.points[k].y + d.y - pts[k].y);
        CHECK(res <= 1e-3);
    }
}

TEST_CASE("invert_flow composes to near identity") {
    LensParams lens = default_lens(0.08, 0.005, 48, 48);
    FlowField flow = barrel_flow(lens, 48, 48);
    FlowField inv = invert_flow(flow);
    FlowField comp = compose_flows(flow, inv);
    // interior: boundary pixels sample clamped values and stay approximate
    double worst = 0.0;
    for (int i = 8; i < 40; ++i)
        for (int j = 8; j < 40; ++j)
            worst = std::max(worst, std::hypot(comp.dx(i, j), comp.dy(i, j)));
    CHECK(worst <= 1e-3);
}
