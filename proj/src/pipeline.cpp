#include "flyvis/pipeline.hpp"

#include <chrono>

namespace flyvis {

DetectionMode parse_mode(std::string_view name) {
    if (name == "stmd") {
        return DetectionMode::stmd;
    }
    if (name == "tsdn") {
        return DetectionMode::tsdn;
    }
    throw ValidationError("unknown mode '" + std::string(name) + "' (expected stmd or tsdn)", "mode");
}

std::string_view to_string(DetectionMode mode) { return mode == DetectionMode::stmd ? "stmd" : "tsdn"; }

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::ommatidia: return "ommatidia";
    case Stage::lmc: return "lmc";
    case Stage::medulla: return "medulla";
    case Stage::stmd_correlation: return "stmd_correlation";
    case Stage::lateral_inhibition: return "lateral_inhibition";
    case Stage::lptc: return "lptc";
    case Stage::tsdn: return "tsdn";
    case Stage::count: break;
    }
    return "?";
}

namespace {

class StageClock {
public:
    explicit StageClock(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
    ~StageClock() {
        sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    StageClock(const StageClock&) = delete;
    StageClock& operator=(const StageClock&) = delete;

private:
    double& sink_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace

Pipeline::Pipeline(const ModelConfig& config)
    : config_((config.validate(), config)),
      directions_(config.directions()),
      ommatidia_(config),
      lmc_(config),
      medulla_(config),
      inhibition_(config) {}

int Pipeline::warmup_frames() const noexcept {
    return lmc_.kernel().length() + medulla_.max_delay_length() - 1;
}

int warmup_frames(const ModelConfig& config) {
    config.validate();
    const int lmc_length = bandpass_kernel(config).length();
    int delay_length = 0;
    for (const auto& [n, tau] : {std::pair{config.n3, config.tau3}, std::pair{config.n4, config.tau4},
                                 std::pair{config.n5, config.tau5}, std::pair{config.n6, config.tau6}}) {
        delay_length = std::max(delay_length, gamma_kernel(n, tau, config.kernel_truncation_factor).length());
    }
    return lmc_length + delay_length - 1;
}

PipelineFrame Pipeline::push(const Frame& input) {
    input.check_input_range();
    auto& s = seconds_;
    const auto slot = [&](Stage stage) -> double& { return s[static_cast<std::size_t>(stage)]; };

    Frame photoreceptors = [&] {
        StageClock clock(slot(Stage::ommatidia));
        return ommatidia_.apply(input);
    }();
    Frame lamina = [&] {
        StageClock clock(slot(Stage::lmc));
        return lmc_.push(photoreceptors);
    }();
    MedullaOutputs medulla = [&] {
        StageClock clock(slot(Stage::medulla));
        return medulla_.push(lamina);
    }();
    ResponseVolume d = [&] {
        StageClock clock(slot(Stage::stmd_correlation));
        return correlate(medulla, directions_, config_);
    }();
    ResponseVolume e = [&] {
        StageClock clock(slot(Stage::lateral_inhibition));
        return inhibition_.apply(d);
    }();
    ResponseVolume f = [&] {
        StageClock clock(slot(Stage::lptc));
        return lptc_correlate(medulla, directions_, config_);
    }();

    StageClock clock(slot(Stage::tsdn));
    const int psi = background_direction_index(f);
    ResponseVolume t = integrate(e, f, directions_.angle(psi), config_);
    return PipelineFrame{frames_++, std::move(d), std::move(e), std::move(f), std::move(t), psi, directions_.angle(psi)};
}

} // namespace flyvis
