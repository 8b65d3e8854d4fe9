#include "flyvis/retina.hpp"

namespace flyvis {

Ommatidia::Ommatidia(const ModelConfig& config)
    : kernel_1d_(gaussian1d(config.sigma1, config.spatial_kernel_radius_factor)) {}

Frame Ommatidia::apply(const Frame& frame) const { return convolve_separable(frame, kernel_1d_, kernel_1d_); }

Frame ommatidia(const Frame& frame, const ModelConfig& config) { return Ommatidia(config).apply(frame); }

Lmc::Lmc(const ModelConfig& config) : Lmc(bandpass_kernel(config)) {}

Lmc::Lmc(TemporalKernel kernel) : convolver_({std::move(kernel)}) {}

Frame Lmc::push(const Frame& photoreceptor_frame) { return std::move(convolver_.push(photoreceptor_frame).front()); }

std::vector<Frame> lmc(const std::vector<Frame>& photoreceptor_stream, const ModelConfig& config) {
    Lmc stage(config);
    std::vector<Frame> out;
    out.reserve(photoreceptor_stream.size());
    for (const auto& f : photoreceptor_stream) {
        out.push_back(stage.push(f));
    }
    return out;
}

} // namespace flyvis
