// Test-only oracles: independent brute-force references for the warp
// equation and the losses, a finite-difference gradient, deterministic
// random generators. Nothing here calls the library's optimized paths
// except where a test explicitly compares against them.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "wpc/geometry.hpp"
#include "wpc/image.hpp"
#include "wpc/objectives.hpp"

namespace oracle {

// --- deterministic RNG (independent of <random> distributions) ---

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return (next() >> 11) * 0x1.0p-53; }  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// --- reference warp: literal evaluation of the interpolation sum ---

inline wpc::Image ref_warp(const wpc::Image& img, const wpc::FlowField& flow) {
    wpc::Image out(img.width, img.height, img.channels);
    for (int i = 0; i < img.height; ++i)
        for (int j = 0; j < img.width; ++j) {
            double phi_x = j + flow.dx(i, j);
            double phi_y = i + flow.dy(i, j);
            int hy = static_cast<int>(std::floor(phi_y));
            int wx = static_cast<int>(std::floor(phi_x));
            for (int c = 0; c < img.channels; ++c) {
                double sum = 0.0;
                for (int h = hy; h <= hy + 1; ++h)
                    for (int w = wx; w <= wx + 1; ++w) {
                        if (h < 0 || h >= img.height || w < 0 || w >= img.width) continue;
                        double weight = std::max(0.0, 1.0 - std::abs(phi_y - h)) *
                                        std::max(0.0, 1.0 - std::abs(phi_x - w));
                        sum += img.at(h, w, c) * weight;
                    }
                out.at(i, j, c) = sum;
            }
        }
    return out;
}

// --- reference losses, written as plain loops over the definitions ---

inline double ref_flow_loss(const wpc::FlowField& a, const wpc::FlowField& b) {
    double sum = 0.0;
    long n = 0;
    for (int i = 0; i < a.height; ++i)
        for (int j = 0; j < a.width; ++j) {
            double ex = a.dx(i, j) - b.dx(i, j);
            double ey = a.dy(i, j) - b.dy(i, j);
            sum += ex * ex + ey * ey;
            n += 2;
        }
    return sum / n;
}

inline double ref_tv_loss(const wpc::FlowField& f) {
    const double eps = 1e-8;
    double sum = 0.0;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < f.height; ++i)
            for (int j = 0; j < f.width; ++j) {
                auto comp = [&](int r, int col) { return c == 0 ? f.dx(r, col) : f.dy(r, col); };
                double inner = eps;
                if (j - 1 >= 0) {
                    double d = comp(i, j - 1) - comp(i, j);
                    inner += d * d;
                }
                if (i + 1 < f.height) {
                    double d = comp(i + 1, j) - comp(i, j);
                    inner += d * d;
                }
                sum += std::sqrt(inner);
            }
    return sum / (static_cast<double>(f.width) * f.height);
}

inline double ref_sym_loss(const wpc::FlowField& f) {
    const int W = f.width;
    const int H = f.height;
    double total = 0.0;
    double n = 2.0 * W * H;
    // vertical
    double s = 0.0;
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j) {
            double ex = f.dx(H - 1 - i, j) - f.dx(i, j);
            double ey = -f.dy(H - 1 - i, j) - f.dy(i, j);
            s += ex * ex + ey * ey;
        }
    total += s / n;
    // horizontal
    s = 0.0;
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j) {
            double ex = -f.dx(i, W - 1 - j) - f.dx(i, j);
            double ey = f.dy(i, W - 1 - j) - f.dy(i, j);
            s += ex * ex + ey * ey;
        }
    total += s / n;
    // central
    s = 0.0;
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j) {
            double ex = -f.dx(H - 1 - i, W - 1 - j) - f.dx(i, j);
            double ey = -f.dy(H - 1 - i, W - 1 - j) - f.dy(i, j);
            s += ex * ex + ey * ey;
        }
    total += s / n;
    return total;
}

// --- finite-difference gradient of an objective (central, step 1e-4) ---

inline wpc::FlowField fd_gradient(wpc::ObjectiveKind kind, const wpc::FlowField& flow,
                                  const wpc::ObjectiveInputs& in,
                                  const wpc::ObjectiveWeights& w, double step = 1e-4) {
    wpc::FlowField grad(flow.width, flow.height);
    wpc::FlowField probe = flow;
    for (size_t k = 0; k < flow.data.size(); ++k) {
        double orig = probe.data[k];
        probe.data[k] = orig + step;
        double plus = wpc::objective_value(kind, probe, in, w);
        probe.data[k] = orig - step;
        double minus = wpc::objective_value(kind, probe, in, w);
        probe.data[k] = orig;
        grad.data[k] = (plus - minus) / (2.0 * step);
    }
    return grad;
}

// --- generators ---

inline wpc::Image random_image(int w, int h, int channels, Rng& rng) {
    wpc::Image img(w, h, channels);
    for (double& v : img.data) v = rng.uniform();
    return img;
}

// Random flow whose sample coordinates stay away from integers, where the
// bilinear kernel's derivative is discontinuous.
inline wpc::FlowField random_jittered_flow(int w, int h, Rng& rng, double amplitude = 1.5,
                                           double margin = 0.01) {
    wpc::FlowField flow(w, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            double dx = rng.uniform(-amplitude, amplitude);
            double dy = rng.uniform(-amplitude, amplitude);
            double fx = (j + dx) - std::floor(j + dx);
            if (fx < margin) dx += margin;
            else if (fx > 1.0 - margin) dx -= margin;
            double fy = (i + dy) - std::floor(i + dy);
            if (fy < margin) dy += margin;
            else if (fy > 1.0 - margin) dy -= margin;
            flow.dx(i, j) = dx;
            flow.dy(i, j) = dy;
        }
    return flow;
}

inline wpc::FlowField constant_flow(int w, int h, double dx, double dy) {
    wpc::FlowField flow(w, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            flow.dx(i, j) = dx;
            flow.dy(i, j) = dy;
        }
    return flow;
}

// Antialiased checkerboard (4x4 supersampling).
inline wpc::Image checkerboard(int w, int h, int cell) {
    wpc::Image img(w, h, 1);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            for (int si = 0; si < 4; ++si)
                for (int sj = 0; sj < 4; ++sj) {
                    double x = j + (sj + 0.5) / 4.0 - 0.5;
                    double y = i + (si + 0.5) / 4.0 - 0.5;
                    int cx = static_cast<int>(std::floor(x / cell));
                    int cy = static_cast<int>(std::floor(y / cell));
                    acc += ((cx + cy) & 1) ? 0.9 : 0.1;
                }
            img.at(i, j) = acc / 16.0;
        }
    return img;
}

// Smooth band-limited image that fades to zero at the borders, so
// zero-padding round trips stay clean.
inline wpc::Image smooth_vignette(int w, int h) {
    const double pi = 3.14159265358979323846;
    wpc::Image img(w, h, 1);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            double wx = std::sin(pi * j / (w - 1.0));
            double wy = std::sin(pi * i / (h - 1.0));
            double tex = 0.5 + 0.25 * std::sin(6.0 * pi * j / w) * std::sin(4.0 * pi * i / h);
            img.at(i, j) = wx * wy * tex;
        }
    return img;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

inline double mean_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t k = 0; k < a.size(); ++k) m += std::abs(a[k] - b[k]);
    return a.empty() ? 0.0 : m / a.size();
}

// Mean endpoint error between two flows.
inline double mean_epe(const wpc::FlowField& a, const wpc::FlowField& b) {
    double sum = 0.0;
    for (int i = 0; i < a.height; ++i)
        for (int j = 0; j < a.width; ++j)
            sum += std::hypot(a.dx(i, j) - b.dx(i, j), a.dy(i, j) - b.dy(i, j));
    return sum / (static_cast<double>(a.width) * a.height);
}

}  // namespace oracle
