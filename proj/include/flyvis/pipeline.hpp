#pragma once

#include <array>
#include <string_view>

#include "flyvis/core.hpp"
#include "flyvis/lptc.hpp"
#include "flyvis/medulla.hpp"
#include "flyvis/retina.hpp"
#include "flyvis/stmd.hpp"
#include "flyvis/tsdn.hpp"

namespace flyvis {

enum class DetectionMode { stmd, tsdn };

DetectionMode parse_mode(std::string_view name);
std::string_view to_string(DetectionMode mode);

/// Everything the model produces for one input frame.
struct PipelineFrame {
    int t = 0;
    ResponseVolume d;
    ResponseVolume e;
    ResponseVolume f;
    ResponseVolume t_volume;
    int background_index = 0;
    double background_direction = 0.0;

    const ResponseVolume& output(DetectionMode mode) const { return mode == DetectionMode::stmd ? e : t_volume; }
};

enum class Stage { ommatidia, lmc, medulla, stmd_correlation, lateral_inhibition, lptc, tsdn, count };

std::string_view to_string(Stage stage);

/// Frame-at-a-time model: ommatidia -> LMC -> medulla -> {STMD, LPTC} -> TSDN.
/// Only the temporal rings hold history, so memory is bounded by the longest
/// temporal kernel regardless of sequence length.
class Pipeline {
public:
    explicit Pipeline(const ModelConfig& config);

    /// Throws ValidationError for values outside [0,255], StreamError on a size change.
    PipelineFrame push(const Frame& input);

    const ModelConfig& config() const noexcept { return config_; }
    const DirectionSet& directions() const noexcept { return directions_; }

    /// Frames affected by the zero-history start: any frame index below this
    /// has a receptive history reaching before frame 0.
    int warmup_frames() const noexcept;
    int frames_processed() const noexcept { return frames_; }

    /// Accumulated wall-clock seconds per stage.
    const std::array<double, static_cast<std::size_t>(Stage::count)>& stage_seconds() const noexcept {
        return seconds_;
    }

private:
    ModelConfig config_;
    DirectionSet directions_;
    Ommatidia ommatidia_;
    Lmc lmc_;
    Medulla medulla_;
    LateralInhibition inhibition_;
    int frames_ = 0;
    std::array<double, static_cast<std::size_t>(Stage::count)> seconds_{};
};

/// Warm-up length implied by a config without building a pipeline.
int warmup_frames(const ModelConfig& config);

} // namespace flyvis
