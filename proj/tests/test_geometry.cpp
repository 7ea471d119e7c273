#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "wpc/geometry.hpp"
#include "wpc/objectives.hpp"

using namespace wpc;

TEST_CASE("barrel_map basics") {
    LensParams identity;
    CHECK(barrel_map(0.7, identity) == doctest::Approx(0.7).epsilon(0.0));
    CHECK(barrel_map(0.0, LensParams{0.3, 0.1, 0, 0, 1}) == 0.0);

    LensParams lens{0.1, 0.01, 0, 0, 1};
    // 0.5 * (1 - 0.1*0.25 - 0.01*0.0625)
    CHECK(barrel_map(0.5, lens) == doctest::Approx(0.4871875).epsilon(1e-15));
}

TEST_CASE("barrel_invert round trips") {
    LensParams lens{0.1, 0.01, 0, 0, 1};
    CHECK(barrel_invert(0.0, lens, 1.2) == 0.0);
    CHECK(std::abs(barrel_invert(0.4871875, lens, 1.2) - 0.5) <= 1e-9);

    LensParams identity{0.0, 0.0, 0, 0, 1};
    CHECK(std::abs(barrel_invert(0.3, identity, 1.2) - 0.3) <= 1e-9);

    oracle::Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        LensParams l{rng.uniform(0.0, 0.15), rng.uniform(0.0, 0.02), 0, 0, 1};
        double r_d = rng.uniform(0.0, 1.1);
        double r_u = barrel_map(r_d, l);
        double back = barrel_invert(r_u, l, 1.1);
        CHECK(std::abs(barrel_map(back, l) - r_u) <= 1e-9);
        CHECK(std::abs(back - r_d) <= 1e-7);
    }
}

TEST_CASE("barrel_invert rejects a non-monotonic lens") {
    LensParams bad{1.0, 0.5, 0, 0, 1};  // derivative turns negative well before r = 1
    CHECK_THROWS_AS(barrel_invert(0.5, bad, 1.2), Error);
    try {
        barrel_invert(0.5, bad, 1.2);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonMonotonicLens);
    }
}

TEST_CASE("barrel_flow identity and center") {
    LensParams lens = default_lens(0.0, 0.0, 33, 25);
    FlowField flow = barrel_flow(lens, 33, 25);
    for (double v : flow.data) CHECK(v == 0.0);

    LensParams curved = default_lens(0.1, 0.01, 33, 25);
    FlowField f2 = barrel_flow(curved, 33, 25);
    CHECK(f2.dx(12, 16) == 0.0);  // center pixel of the odd grid
    CHECK(f2.dy(12, 16) == 0.0);
}

TEST_CASE("barrel_flow is flip symmetric about the grid midpoint") {
    LensParams lens = default_lens(0.1, 0.01, 64, 64);
    FlowField flow = barrel_flow(lens, 64, 64);
    CHECK(sym_loss(flow) < 1e-12);

    // odd dimensions land the center on a pixel; still exact
    LensParams odd = default_lens(0.08, 0.005, 33, 47);
    CHECK(sym_loss(barrel_flow(odd, 33, 47)) < 1e-12);
}

TEST_CASE("flip_flow definitions and involution") {
    FlowField zero(5, 4);
    for (FlipAxis axis : {FlipAxis::Horizontal, FlipAxis::Vertical, FlipAxis::Central}) {
        FlowField g = flip_flow(zero, axis);
        for (double v : g.data) CHECK(v == 0.0);
    }

    FlowField constant = oracle::constant_flow(6, 5, 1.0, 0.0);
    FlowField h = flip_flow(constant, FlipAxis::Horizontal);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 6; ++j) {
            CHECK(h.dx(i, j) == -1.0);
            CHECK(h.dy(i, j) == 0.0);
        }

    oracle::Rng rng(3);
    FlowField random = oracle::random_jittered_flow(7, 6, rng);
    for (FlipAxis axis : {FlipAxis::Horizontal, FlipAxis::Vertical, FlipAxis::Central}) {
        FlowField twice = flip_flow(flip_flow(random, axis), axis);
        CHECK(oracle::max_abs_diff(twice.data, random.data) == 0.0);
    }

    FlowField hv = flip_flow(flip_flow(random, FlipAxis::Horizontal), FlipAxis::Vertical);
    FlowField c = flip_flow(random, FlipAxis::Central);
    CHECK(oracle::max_abs_diff(hv.data, c.data) == 0.0);
}

TEST_CASE("radial flows are flip fixed points") {
    LensParams lens = default_lens(0.12, 0.008, 32, 32);
    FlowField radial = barrel_flow(lens, 32, 32);
    for (FlipAxis axis : {FlipAxis::Horizontal, FlipAxis::Vertical, FlipAxis::Central}) {
        FlowField flipped = flip_flow(radial, axis);
        CHECK(oracle::max_abs_diff(flipped.data, radial.data) == 0.0);
    }
}

TEST_CASE("compose_flows identities and constant shift") {
    oracle::Rng rng(11);
    FlowField f = oracle::random_jittered_flow(8, 8, rng, 0.75);
    FlowField zero(8, 8);

    FlowField left = compose_flows(zero, f);
    CHECK(oracle::max_abs_diff(left.data, f.data) == 0.0);
    FlowField right = compose_flows(f, zero);
    CHECK(oracle::max_abs_diff(right.data, f.data) == 0.0);

    FlowField a = oracle::constant_flow(8, 8, 1.0, 0.0);
    FlowField b = oracle::constant_flow(8, 8, 0.0, 2.0);
    FlowField ab = compose_flows(a, b);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            CHECK(ab.dx(i, j) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(ab.dy(i, j) == doctest::Approx(2.0).epsilon(1e-12));
        }

    CHECK_THROWS_AS(compose_flows(a, FlowField(4, 4)), Error);
}

TEST_CASE("compose_flows is associative on smooth small fields") {
    // |gradient| < 0.1 px/px keeps bilinear interpolation error tiny
    const int W = 32, H = 32;
    const double pi = 3.14159265358979323846;
    auto smooth = [&](double ax, double ay, double px, double py) {
        FlowField f(W, H);
        for (int i = 0; i < H; ++i)
            for (int j = 0; j < W; ++j) {
                f.dx(i, j) = ax * std::sin(2 * pi * j / W + px) * std::sin(2 * pi * i / H + py);
                f.dy(i, j) = ay * std::cos(2 * pi * j / W + py) * std::sin(2 * pi * i / H + px);
            }
        return f;
    };
    FlowField a = smooth(0.4, 0.3, 0.5, 1.1);
    FlowField b = smooth(0.35, 0.4, 2.0, 0.3);
    FlowField c = smooth(0.3, 0.35, 4.1, 2.2);

    FlowField lhs = compose_flows(compose_flows(a, b), c);
    FlowField rhs = compose_flows(a, compose_flows(b, c));
    CHECK(oracle::max_abs_diff(lhs.data, rhs.data) < 1e-3);
}
