#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flyvis/core.hpp"
#include "flyvis/kernels.hpp"

namespace flyvis {

/// Separable 2-D convolution, clamp-to-edge borders. Both kernels have odd
/// length 2r+1 and are indexed from offset -r.
Frame convolve_separable(const Frame& input, std::span<const double> kernel_x, std::span<const double> kernel_y);

/// Dense 2-D convolution out(x,y) = sum W(dx,dy) in(x-dx, y-dy), clamp-to-edge.
/// Zero taps are skipped.
Frame convolve2d(const Frame& input, const SpatialKernel& kernel);

/// Streaming causal FIR over a frame sequence. Several kernels share one
/// history ring, so each frame is stored once regardless of kernel count.
/// History starts zero-filled.
class TemporalConvolver {
public:
    explicit TemporalConvolver(std::vector<TemporalKernel> kernels);

    /// Feeds the next frame and writes one filtered frame per kernel.
    /// Throws StreamError if the frame shape differs from earlier frames.
    std::vector<Frame> push(const Frame& input);

    const std::vector<TemporalKernel>& kernels() const noexcept { return kernels_; }
    int history_capacity() const noexcept { return capacity_; }
    std::size_t frames_seen() const noexcept { return seen_; }
    void reset();

private:
    std::vector<TemporalKernel> kernels_;
    int capacity_;
    std::vector<std::vector<double>> history_;
    int head_ = -1;
    std::size_t seen_ = 0;
    int width_ = 0;
    int height_ = 0;
};

} // namespace flyvis
