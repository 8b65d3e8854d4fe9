#include "flyvis/stmd.hpp"

#include <cmath>
#include <numbers>

#include "flyvis/convolution.hpp"

namespace flyvis {

PixelOffset partner_offset(double theta, double alpha1) {
    return {static_cast<int>(-std::lround(alpha1 * std::cos(theta))),
            static_cast<int>(-std::lround(alpha1 * std::sin(theta)))};
}

ResponseVolume correlate(const MedullaOutputs& medulla, const DirectionSet& directions, const ModelConfig& config) {
    const Frame& tm3 = medulla.tm3;
    const Frame& tm1_near = medulla.tm1({config.n4, config.tau4});
    const Frame& mi1 = medulla.mi1({config.n3, config.tau3});
    const Frame& tm1_far = medulla.tm1({config.n5, config.tau5});

    const int w = tm3.width();
    const int h = tm3.height();
    ResponseVolume out(w, h, directions);
    for (int d = 0; d < directions.count(); ++d) {
        const auto off = partner_offset(directions.angle(d), config.alpha1);
        auto dst = out.channel(d);
        for (int y = 0; y < h; ++y) {
            const int py = y + off.dy;
            if (py < 0 || py >= h) {
                continue;
            }
            const int x0 = std::max(0, -off.dx);
            const int x1 = std::min(w, w - off.dx);
            for (int x = x0; x < x1; ++x) {
                const int px = x + off.dx;
                dst[static_cast<std::size_t>(y) * w + x] =
                    tm3(x, y) * (tm1_near(x, y) + mi1(px, py)) * tm1_far(px, py);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> raw_gaussian_factor(double sigma, int radius) {
    std::vector<double> g(static_cast<std::size_t>(2 * radius + 1));
    const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
    for (int d = -radius; d <= radius; ++d) {
        g[static_cast<std::size_t>(d + radius)] = norm * std::exp(-(d * d) / (2.0 * sigma * sigma));
    }
    return g;
}

SpatialKernel positive_part(const ModelConfig& c, int radius) {
    int core = 0;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (inhibition_profile(c.sigma2, c.sigma3, c.e, c.rho, dx, dy) > 0.0) {
                core = std::max({core, std::abs(dx), std::abs(dy)});
            }
        }
    }
    const int side = 2 * core + 1;
    std::vector<double> w(static_cast<std::size_t>(side * side));
    for (int dy = -core; dy <= core; ++dy) {
        for (int dx = -core; dx <= core; ++dx) {
            w[static_cast<std::size_t>((dy + core) * side + (dx + core))] =
                std::max(inhibition_profile(c.sigma2, c.sigma3, c.e, c.rho, dx, dy), 0.0);
        }
    }
    return SpatialKernel(core, std::move(w));
}

} // namespace

LateralInhibition::LateralInhibition(const ModelConfig& config)
    : kernel_(inhibition_kernel(config)),
      a_(config.a),
      b_(config.b),
      e_(config.e),
      rho_(config.rho),
      narrow_(raw_gaussian_factor(config.sigma2, kernel_.radius())),
      wide_(raw_gaussian_factor(config.sigma3, kernel_.radius())),
      box_(static_cast<std::size_t>(kernel_.side()), 1.0),
      positive_core_(positive_part(config, kernel_.radius())) {}

Frame LateralInhibition::apply(const Frame& d) const {
    Frame out = convolve_separable(d, narrow_, narrow_);
    auto dst = out.pixels();
    for (double& v : dst) {
        v *= b_;
    }
    if (e_ != 0.0) {
        const Frame wide = convolve_separable(d, wide_, wide_);
        const auto src = wide.pixels();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] -= b_ * e_ * src[i];
        }
    }
    if (rho_ != 0.0) {
        const Frame box = convolve_separable(d, box_, box_);
        const auto src = box.pixels();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] -= b_ * rho_ * src[i];
        }
    }
    if (a_ != b_) {
        const Frame core = convolve2d(d, positive_core_);
        const auto src = core.pixels();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] += (a_ - b_) * src[i];
        }
    }
    return out;
}

ResponseVolume LateralInhibition::apply(const ResponseVolume& d) const {
    ResponseVolume out(d.width(), d.height(), d.directions());
    for (int c = 0; c < d.channel_count(); ++c) {
        out.set_channel(c, apply(d.channel_frame(c)));
    }
    return out;
}

ResponseVolume inhibit(const ResponseVolume& d, const ModelConfig& config) { return LateralInhibition(config).apply(d); }

std::vector<Detection> detect_stmd(const ResponseVolume& e, double beta, int t) { return extract_detections(e, beta, t); }

} // namespace flyvis
