#include "flyvis/convolution.hpp"

#include <algorithm>

namespace flyvis {

namespace {

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

int odd_radius(std::span<const double> kernel) {
    if (kernel.empty() || kernel.size() % 2 == 0) {
        throw ValidationError("separable kernel length must be odd");
    }
    return static_cast<int>(kernel.size() / 2);
}

} // namespace

Frame convolve_separable(const Frame& input, std::span<const double> kernel_x, std::span<const double> kernel_y) {
    const int w = input.width();
    const int h = input.height();
    const int rx = odd_radius(kernel_x);
    const int ry = odd_radius(kernel_y);

    // Horizontal pass through a clamped, padded copy of each row.
    Frame tmp(w, h);
    std::vector<double> padded(static_cast<std::size_t>(w + 2 * rx));
    for (int y = 0; y < h; ++y) {
        for (int i = 0; i < w + 2 * rx; ++i) {
            padded[static_cast<std::size_t>(i)] = input(clamp_index(i - rx, w), y);
        }
        double* out = &tmp(0, y);
        for (int x = 0; x < w; ++x) {
            // out(x) = sum_d k[d] in(x - d), d in [-rx, rx]; padded index of in(x-d) is x - d + rx.
            double acc = 0.0;
            for (int i = 0; i <= 2 * rx; ++i) {
                acc += kernel_x[static_cast<std::size_t>(i)] * padded[static_cast<std::size_t>(x + 2 * rx - i)];
            }
            out[x] = acc;
        }
    }

    // Vertical pass as row axpys.
    Frame out(w, h);
    for (int y = 0; y < h; ++y) {
        double* dst = &out(0, y);
        for (int i = 0; i <= 2 * ry; ++i) {
            const double k = kernel_y[static_cast<std::size_t>(i)];
            if (k == 0.0) {
                continue;
            }
            const double* src = &tmp(0, clamp_index(y - (i - ry), h));
            for (int x = 0; x < w; ++x) {
                dst[x] += k * src[x];
            }
        }
    }
    return out;
}

Frame convolve2d(const Frame& input, const SpatialKernel& kernel) {
    const int w = input.width();
    const int h = input.height();
    const int r = kernel.radius();
    const int pw = w + 2 * r;
    const int ph = h + 2 * r;

    std::vector<double> padded(static_cast<std::size_t>(pw) * static_cast<std::size_t>(ph));
    for (int y = 0; y < ph; ++y) {
        const int sy = clamp_index(y - r, h);
        for (int x = 0; x < pw; ++x) {
            padded[static_cast<std::size_t>(y) * pw + x] = input(clamp_index(x - r, w), sy);
        }
    }

    Frame out(w, h);
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const double k = kernel.at(dx, dy);
            if (k == 0.0) {
                continue;
            }
            for (int y = 0; y < h; ++y) {
                // in(x - dx, y - dy) lives at padded(x - dx + r, y - dy + r).
                const double* src = &padded[static_cast<std::size_t>(y - dy + r) * pw + (r - dx)];
                double* dst = &out(0, y);
                for (int x = 0; x < w; ++x) {
                    dst[x] += k * src[x];
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

TemporalConvolver::TemporalConvolver(std::vector<TemporalKernel> kernels) : kernels_(std::move(kernels)) {
    if (kernels_.empty()) {
        throw ValidationError("temporal convolver needs at least one kernel");
    }
    capacity_ = 0;
    for (const auto& k : kernels_) {
        capacity_ = std::max(capacity_, k.length());
    }
}

void TemporalConvolver::reset() {
    history_.clear();
    head_ = -1;
    seen_ = 0;
    width_ = 0;
    height_ = 0;
}

std::vector<Frame> TemporalConvolver::push(const Frame& input) {
    if (seen_ == 0) {
        width_ = input.width();
        height_ = input.height();
        history_.assign(static_cast<std::size_t>(capacity_), {});
    } else if (input.width() != width_ || input.height() != height_) {
        throw StreamError("frame " + std::to_string(seen_) + " is " + std::to_string(input.width()) + "x" +
                          std::to_string(input.height()) + ", stream is " + std::to_string(width_) + "x" +
                          std::to_string(height_));
    }

    head_ = (head_ + 1) % capacity_;
    auto& slot = history_[static_cast<std::size_t>(head_)];
    slot.assign(input.pixels().begin(), input.pixels().end());
    ++seen_;

    std::vector<Frame> outputs;
    outputs.reserve(kernels_.size());
    for (std::size_t k = 0; k < kernels_.size(); ++k) {
        outputs.emplace_back(width_, height_);
    }

    const std::size_t n = slot.size();
    const int lags = static_cast<int>(std::min<std::size_t>(seen_, static_cast<std::size_t>(capacity_)));
    for (int s = 0; s < lags; ++s) {
        const auto& past = history_[static_cast<std::size_t>((head_ - s + capacity_) % capacity_)];
        const double* src = past.data();
        for (std::size_t k = 0; k < kernels_.size(); ++k) {
            if (s >= kernels_[k].length()) {
                continue;
            }
            const double tap = kernels_[k][s];
            if (tap == 0.0) {
                continue;
            }
            double* dst = outputs[k].pixels().data();
            for (std::size_t i = 0; i < n; ++i) {
                dst[i] += tap * src[i];
            }
        }
    }
    return outputs;
}

} // namespace flyvis
