#pragma once

#include <string_view>
#include <vector>

#include "flyvis/core.hpp"
#include "flyvis/stimulus.hpp"

namespace flyvis {

enum class TuningAttribute { weber_contrast, velocity, width, height };

/// Accepts weber_contrast (alias contrast), velocity, width, height.
TuningAttribute parse_tuning_attribute(std::string_view name);
std::string_view to_string(TuningAttribute attribute);

struct TuningCurve {
    TuningAttribute attribute = TuningAttribute::weber_contrast;
    std::vector<double> values;
    std::vector<double> stmd;     // normalized to max 1 (all zero if the raw max is 0)
    std::vector<double> lptc;
    std::vector<double> stmd_raw; // peak E per sample
    std::vector<double> lptc_raw; // peak F per sample
};

/// 100x100 uniform white scene with a 5x5 black target moving leftward at
/// 250 px/s; 500 frames. The target may leave the frame.
StimulusSpec tuning_base_spec();

/// Copy of `base` with one attribute set to `value`. The target trajectory is
/// rebuilt as a straight line that crosses the frame centre halfway through
/// the steady-state part of the sequence, keeping the base direction.
/// Contrast c sets the target luminance to background - 255 c.
StimulusSpec tuning_stimulus(const StimulusSpec& base, TuningAttribute attribute, double value, int warmup);

/// Peak E and F inside the (w+2d)x(h+2d) window around the true target, over
/// steady-state frames whose window lies fully inside the frame.
struct TuningResponse {
    double stmd = 0.0;
    double lptc = 0.0;
    int frames_measured = 0;
};

TuningResponse measure_tuning_response(const StimulusSpec& spec, const ModelConfig& config, int surround = 10);

/// Runs one stimulus per grid value and normalizes each neuron's series.
/// Throws ValidationError for an empty grid, a cluttered base background or
/// an out-of-range attribute value.
TuningCurve tuning_experiment(TuningAttribute attribute, const std::vector<double>& grid, const StimulusSpec& base,
                              const ModelConfig& config);

} // namespace flyvis
