#pragma once

// Brute-force oracles and stimulus helpers shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "flyvis/core.hpp"
#include "flyvis/kernels.hpp"
#include "flyvis/stimulus.hpp"

namespace flyvis::testing {

inline Frame random_frame(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 255.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Frame f(w, h);
    for (auto& v : f.pixels()) {
        v = u(rng);
    }
    return f;
}

inline std::vector<Frame> random_sequence(int w, int h, int n, std::uint64_t seed) {
    std::vector<Frame> seq;
    for (int k = 0; k < n; ++k) {
        seq.push_back(random_frame(w, h, seed * 1000003u + static_cast<std::uint64_t>(k)));
    }
    return seq;
}

/// out(x,y) = sum k(dx,dy) in(clamp(x-dx), clamp(y-dy)), nested loops.
inline Frame dense_convolution(const Frame& in, const SpatialKernel& k) {
    Frame out(in.width(), in.height());
    const int r = k.radius();
    for (int y = 0; y < in.height(); ++y) {
        for (int x = 0; x < in.width(); ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const int sx = std::clamp(x - dx, 0, in.width() - 1);
                    const int sy = std::clamp(y - dy, 0, in.height() - 1);
                    acc += k.at(dx, dy) * in(sx, sy);
                }
            }
            out(x, y) = acc;
        }
    }
    return out;
}

/// Causal convolution of a whole sequence with zero history before frame 0.
inline std::vector<Frame> whole_signal_convolution(const std::vector<Frame>& seq, const TemporalKernel& k) {
    std::vector<Frame> out;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        Frame f(seq[t].width(), seq[t].height());
        for (int lag = 0; lag < k.length() && lag <= static_cast<int>(t); ++lag) {
            const auto& src = seq[t - static_cast<std::size_t>(lag)].pixels();
            auto dst = f.pixels();
            for (std::size_t i = 0; i < dst.size(); ++i) {
                dst[i] += k[lag] * src[i];
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

inline double max_abs_diff(const Frame& a, const Frame& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.pixels()[i] - b.pixels()[i]));
    }
    return m;
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

inline Frame mirror(const Frame& f) {
    Frame out(f.width(), f.height());
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            out(f.width() - 1 - x, y) = f(x, y);
        }
    }
    return out;
}

/// Bilinear sample with clamped coordinates.
inline double sample(const Frame& tex, double x, double y) {
    x = std::clamp(x, 0.0, tex.width() - 1.0);
    y = std::clamp(y, 0.0, tex.height() - 1.0);
    const int x0 = std::min(static_cast<int>(x), tex.width() - 2);
    const int y0 = std::min(static_cast<int>(y), tex.height() - 2);
    const double fx = x - x0;
    const double fy = y - y0;
    return (1 - fy) * ((1 - fx) * tex(x0, y0) + fx * tex(x0 + 1, y0)) +
           fy * ((1 - fx) * tex(x0, y0 + 1) + fx * tex(x0 + 1, y0 + 1));
}

/// Full-field texture translating along `direction` (image coordinates) at
/// `speed` px/s, sampled at 1000 fps.
class DriftingTexture {
public:
    DriftingTexture(int w, int h, int frames, double speed, double direction, std::uint64_t seed)
        : w_(w), h_(h), speed_(speed), direction_(direction),
          margin_(static_cast<int>(std::ceil(speed * frames / 1000.0)) + 2),
          texture_(procedural_background(seed, w + 2 * margin_, h + 2 * margin_)) {}

    Frame frame(int k) const {
        const double shift = speed_ * k / 1000.0;
        const double ox = margin_ - shift * std::cos(direction_);
        const double oy = margin_ - shift * std::sin(direction_);
        Frame out(w_, h_);
        for (int y = 0; y < h_; ++y) {
            for (int x = 0; x < w_; ++x) {
                out(x, y) = sample(texture_, ox + x, oy + y);
            }
        }
        return out;
    }

private:
    int w_;
    int h_;
    double speed_;
    double direction_;
    int margin_;
    Frame texture_;
};

inline std::vector<double> log_grid(double lo_exp, double hi_exp, double step) {
    std::vector<double> g;
    const int n = static_cast<int>(std::round((hi_exp - lo_exp) / step));
    for (int i = 0; i <= n; ++i) {
        g.push_back(std::pow(10.0, lo_exp + i * step));
    }
    return g;
}

} // namespace flyvis::testing
