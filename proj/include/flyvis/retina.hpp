#pragma once

#include <vector>

#include "flyvis/convolution.hpp"
#include "flyvis/core.hpp"
#include "flyvis/kernels.hpp"

namespace flyvis {

/// Ommatidium layer: unit-sum Gaussian blur (sigma1), applied separably.
class Ommatidia {
public:
    explicit Ommatidia(const ModelConfig& config);

    Frame apply(const Frame& frame) const;
    const std::vector<double>& kernel_1d() const noexcept { return kernel_1d_; }

private:
    std::vector<double> kernel_1d_;
};

Frame ommatidia(const Frame& frame, const ModelConfig& config);

/// Large monopolar cells: per-pixel causal convolution with the band-pass
/// impulse response. One instance per stream.
class Lmc {
public:
    explicit Lmc(const ModelConfig& config);
    explicit Lmc(TemporalKernel kernel);

    Frame push(const Frame& photoreceptor_frame);

    const TemporalKernel& kernel() const { return convolver_.kernels().front(); }
    void reset() { convolver_.reset(); }

private:
    TemporalConvolver convolver_;
};

/// Runs a whole sequence through a fresh Lmc.
std::vector<Frame> lmc(const std::vector<Frame>& photoreceptor_stream, const ModelConfig& config);

} // namespace flyvis
