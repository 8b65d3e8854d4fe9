#include "flyvis/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flyvis/pipeline.hpp"

namespace flyvis {

TuningAttribute parse_tuning_attribute(std::string_view name) {
    if (name == "weber_contrast" || name == "contrast") {
        return TuningAttribute::weber_contrast;
    }
    if (name == "velocity") {
        return TuningAttribute::velocity;
    }
    if (name == "width") {
        return TuningAttribute::width;
    }
    if (name == "height") {
        return TuningAttribute::height;
    }
    throw ValidationError("unknown tuning attribute '" + std::string(name) +
                              "' (expected weber_contrast, velocity, width or height)",
                          "attribute");
}

std::string_view to_string(TuningAttribute attribute) {
    switch (attribute) {
    case TuningAttribute::weber_contrast: return "weber_contrast";
    case TuningAttribute::velocity: return "velocity";
    case TuningAttribute::width: return "width";
    case TuningAttribute::height: return "height";
    }
    return "?";
}

StimulusSpec tuning_base_spec() {
    StimulusSpec spec;
    spec.width = 100;
    spec.height = 100;
    spec.duration = 500;
    spec.background.kind = BackgroundKind::uniform;
    spec.background.luminance = 255.0;
    spec.background_velocity = 0.0;
    spec.clip_target = true;
    TargetSpec target;
    target.luminance = 0.0;
    target.width = 5;
    target.height = 5;
    target.trajectory = LinearTrajectory{50.0, 50.0, 250.0, std::numbers::pi};
    spec.target = target;
    return spec;
}

namespace {

int pixel_extent(double value, const char* field) {
    const double r = std::round(value);
    if (!(r >= 1.0) || std::abs(value - r) > 1e-9 || r > 1e6) {
        throw ValidationError(std::string(field) + " must be a positive whole number of pixels", field);
    }
    return static_cast<int>(r);
}

} // namespace

StimulusSpec tuning_stimulus(const StimulusSpec& base, TuningAttribute attribute, double value, int warmup) {
    if (!base.target) {
        throw ValidationError("tuning stimulus needs a target", "target");
    }
    if (base.background.kind != BackgroundKind::uniform) {
        throw ValidationError("tuning stimulus needs a uniform background", "background");
    }
    if (!std::isfinite(value)) {
        throw ValidationError("tuning value must be finite", "grid");
    }
    StimulusSpec spec = base;
    spec.clip_target = true;
    auto& target = *spec.target;

    double speed = 250.0;
    double direction = std::numbers::pi;
    if (const auto* linear = std::get_if<LinearTrajectory>(&base.target->trajectory)) {
        speed = linear->speed;
        direction = linear->direction;
    }

    switch (attribute) {
    case TuningAttribute::weber_contrast: {
        if (value < 0.0 || value > 1.0) {
            throw ValidationError("Weber contrast must lie in [0,1]", "grid");
        }
        const double lum = base.background.luminance - 255.0 * value;
        if (lum < -1e-9) {
            throw ValidationError("background too dark for Weber contrast " + std::to_string(value), "grid");
        }
        target.luminance = std::max(lum, 0.0);
        break;
    }
    case TuningAttribute::velocity:
        if (value < 0.0) {
            throw ValidationError("velocity must be non-negative", "grid");
        }
        speed = value;
        break;
    case TuningAttribute::width:
        target.width = pixel_extent(value, "width");
        break;
    case TuningAttribute::height:
        target.height = pixel_extent(value, "height");
        break;
    }

    const double mid_ms = 0.5 * (spec.time_ms(warmup) + spec.time_ms(spec.duration - 1));
    const double cx = 0.5 * spec.width;
    const double cy = 0.5 * spec.height;
    const double travelled = speed * mid_ms / 1000.0;
    target.trajectory = LinearTrajectory{cx - travelled * std::cos(direction), cy - travelled * std::sin(direction),
                                         speed, direction};
    return spec;
}

TuningResponse measure_tuning_response(const StimulusSpec& spec, const ModelConfig& config, int surround) {
    if (!spec.target) {
        throw ValidationError("tuning stimulus needs a target", "target");
    }
    Pipeline pipeline(config);
    const int warmup = pipeline.warmup_frames();
    spec.validate(warmup);
    const StimulusRenderer renderer(spec);
    const int w = spec.target->width;
    const int h = spec.target->height;

    // Last frame whose window is inside the frame; nothing after it counts.
    int last = -1;
    std::vector<PixelRect> windows(static_cast<std::size_t>(spec.duration));
    for (int k = 0; k < spec.duration; ++k) {
        const auto s = renderer.truth(k);
        const auto r = centered_rect(s.x, s.y, w, h);
        const PixelRect win{r.x0 - surround, r.y0 - surround, w + 2 * surround, h + 2 * surround};
        windows[static_cast<std::size_t>(k)] = win;
        if (k >= warmup && win.x0 >= 0 && win.y0 >= 0 && win.x0 + win.w <= spec.width &&
            win.y0 + win.h <= spec.height) {
            last = k;
        }
    }

    TuningResponse out;
    for (int k = 0; k <= last; ++k) {
        const auto frame = pipeline.push(renderer.render(k));
        const auto& win = windows[static_cast<std::size_t>(k)];
        if (k < warmup || win.x0 < 0 || win.y0 < 0 || win.x0 + win.w > spec.width || win.y0 + win.h > spec.height) {
            continue;
        }
        ++out.frames_measured;
        for (int d = 0; d < frame.e.directions().count(); ++d) {
            for (int y = win.y0; y < win.y0 + win.h; ++y) {
                for (int x = win.x0; x < win.x0 + win.w; ++x) {
                    out.stmd = std::max(out.stmd, frame.e.at(x, y, d));
                    out.lptc = std::max(out.lptc, frame.f.at(x, y, d));
                }
            }
        }
    }
    return out;
}

TuningCurve tuning_experiment(TuningAttribute attribute, const std::vector<double>& grid, const StimulusSpec& base,
                              const ModelConfig& config) {
    if (grid.empty()) {
        throw ValidationError("tuning grid is empty", "grid");
    }
    const int warmup = warmup_frames(config);
    TuningCurve curve;
    curve.attribute = attribute;
    for (double value : grid) {
        const auto spec = tuning_stimulus(base, attribute, value, warmup);
        const auto r = measure_tuning_response(spec, config);
        if (r.frames_measured == 0) {
            throw ValidationError("no steady-state frame keeps the target window inside the frame", "duration");
        }
        curve.values.push_back(value);
        curve.stmd_raw.push_back(r.stmd);
        curve.lptc_raw.push_back(r.lptc);
    }
    const auto normalize = [](const std::vector<double>& raw) {
        const double peak = *std::max_element(raw.begin(), raw.end());
        std::vector<double> out(raw.size(), 0.0);
        if (peak > 0.0) {
            std::transform(raw.begin(), raw.end(), out.begin(), [peak](double v) { return v / peak; });
        }
        return out;
    };
    curve.stmd = normalize(curve.stmd_raw);
    curve.lptc = normalize(curve.lptc_raw);
    return curve;
}

} // namespace flyvis
