#include "wpc/synthgen.hpp"

#include <cmath>

#include "wpc/warp.hpp"

namespace wpc {

namespace {

// splitmix64; used instead of <random> distributions so that seeded output
// is bit-stable across standard library implementations
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform_pm1(std::uint64_t& state) {
    return 2.0 * ((splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

SyntheticPair make_corner_stretch_pair(const Image& img, double strength,
                                       std::uint64_t seed, double jitter) {
    if (strength < 0.0)
        throw Error(ErrorCode::InvalidArgument, "strength must be >= 0");
    if (img.width < 8 || img.height < 8)
        throw Error(ErrorCode::InvalidArgument, "image must be at least 8x8");

    double used = strength;
    if (jitter > 0.0) {
        std::uint64_t state = seed;
        used = strength * (1.0 + jitter * uniform_pm1(state));
    }

    const int W = img.width;
    const int H = img.height;
    const double cx = (W - 1) / 2.0;
    const double cy = (H - 1) / 2.0;
    const double r_corner = std::sqrt(cx * cx + cy * cy);

    // displacement = used * (r / r_corner)^3 outward; zero slope at center
    // like the cubic term of the barrel model
    FlowField gt(W, H);
    const double coef = used / (r_corner * r_corner * r_corner);
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j) {
            double px = j - cx;
            double py = i - cy;
            double r2 = px * px + py * py;
            gt.dx(i, j) = coef * r2 * px;
            gt.dy(i, j) = coef * r2 * py;
        }

    SyntheticPair pair;
    pair.gt_flow = std::move(gt);
    pair.strength_used = used;
    // forward distortion through the numerically inverted flow; forward
    // splatting would leave holes
    FlowField inward = invert_flow(pair.gt_flow);
    pair.distorted = warp_image(img, inward);
    return pair;
}

SyntheticPair make_barrel_pair(const Image& img, const LensParams& lens) {
    const int W = img.width;
    const int H = img.height;

    SyntheticPair pair;
    pair.gt_flow = barrel_flow(lens, W, H);

    // distortion flow from the forward barrel map: a pixel at distorted
    // radius r_d shows content from undistorted radius r_u
    FlowField dist(W, H);
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j) {
            double px = j - lens.cx;
            double py = i - lens.cy;
            double r = std::sqrt(px * px + py * py);
            if (r == 0.0) continue;
            double r_d = r / lens.r_norm;
            double r_u = barrel_map(r_d, lens);
            double scale = r_u / r_d - 1.0;
            dist.dx(i, j) = scale * px;
            dist.dy(i, j) = scale * py;
        }
    pair.distorted = warp_image(img, dist);
    return pair;
}

}  // namespace wpc
