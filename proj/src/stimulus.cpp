#include "flyvis/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "flyvis/io.hpp"
#include "text_util.hpp"

namespace flyvis {

namespace {

/// Uniform [0,1) from the raw engine output; avoids the implementation-defined
/// std::uniform_real_distribution so panoramas are reproducible across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

void add_value_noise(Frame& out, Rng& rng, const ClutterParams& p) {
    const int w = out.width();
    const int h = out.height();
    std::vector<double> accum(out.size(), 0.0);
    double amplitude = 1.0;
    double total_amplitude = 0.0;
    for (int octave = 0; octave < p.noise_octaves; ++octave) {
        const int cell = std::max(2, p.noise_cell >> octave);
        const int lw = w / cell + 2;
        const int lh = h / cell + 2;
        std::vector<double> lattice(static_cast<std::size_t>(lw * lh));
        for (double& v : lattice) {
            v = rng.uniform(-1.0, 1.0);
        }
        for (int y = 0; y < h; ++y) {
            const int gy = y / cell;
            const double fy = smoothstep(static_cast<double>(y % cell) / cell);
            for (int x = 0; x < w; ++x) {
                const int gx = x / cell;
                const double fx = smoothstep(static_cast<double>(x % cell) / cell);
                const auto at = [&](int i, int j) { return lattice[static_cast<std::size_t>(j * lw + i)]; };
                const double top = at(gx, gy) + fx * (at(gx + 1, gy) - at(gx, gy));
                const double bottom = at(gx, gy + 1) + fx * (at(gx + 1, gy + 1) - at(gx, gy + 1));
                accum[static_cast<std::size_t>(y) * w + x] += amplitude * (top + fy * (bottom - top));
            }
        }
        total_amplitude += amplitude;
        amplitude *= 0.5;
    }
    auto px = out.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] += p.noise_contrast * accum[i] / std::max(total_amplitude, 1e-12);
    }
}

void add_shapes(Frame& out, Rng& rng, const ClutterParams& p) {
    const int w = out.width();
    const int h = out.height();
    const auto count = static_cast<long>(std::lround(p.shape_density * w * h / 10000.0));
    const double log_min = std::log(p.min_shape_size);
    const double log_max = std::log(std::max(p.max_shape_size, p.min_shape_size));
    for (long i = 0; i < count; ++i) {
        const double size = std::exp(rng.uniform(log_min, log_max));
        const double aspect = std::exp(rng.uniform(-0.7, 0.7));
        const double sw = size * std::sqrt(aspect);
        const double sh = size / std::sqrt(aspect);
        const double cx = rng.uniform(0.0, w);
        const double cy = rng.uniform(0.0, h);
        const bool ellipse = rng.uniform() < 0.5;
        const double lum = rng.uniform(0.0, 255.0);

        const int x0 = std::max(0, static_cast<int>(std::floor(cx - sw / 2)));
        const int x1 = std::min(w - 1, static_cast<int>(std::ceil(cx + sw / 2)));
        const int y0 = std::max(0, static_cast<int>(std::floor(cy - sh / 2)));
        const int y1 = std::min(h - 1, static_cast<int>(std::ceil(cy + sh / 2)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = (x + 0.5 - cx) / (sw / 2);
                const double dy = (y + 0.5 - cy) / (sh / 2);
                const bool inside = ellipse ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
                if (inside) {
                    out(x, y) = lum;
                }
            }
        }
    }
}

} // namespace

Frame procedural_background(std::uint64_t seed, int width, int height, const ClutterParams& clutter) {
    if (clutter.noise_cell < 1 || clutter.noise_octaves < 0 || clutter.min_shape_size <= 0.0 ||
        clutter.shape_density < 0.0) {
        throw ValidationError("invalid clutter parameters", "clutter");
    }
    Frame out(width, height, 128.0);
    Rng rng(seed);
    add_value_noise(out, rng, clutter);
    add_shapes(out, rng, clutter);
    for (double& v : out.pixels()) {
        v = std::clamp(v, 0.0, 255.0);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::pair<double, double> benchmark_sinusoid(double t_ms) {
    if (!(t_ms >= 0.0 && t_ms <= 1000.0)) {
        throw ValidationError("sinusoid trajectory defined for t in [0, 1000] ms, got " + std::to_string(t_ms), "t");
    }
    const double u = (t_ms + 300.0) / 1000.0;
    return {500.0 - 250.0 * u, 125.0 + 15.0 * std::sin(4.0 * std::numbers::pi * u)};
}

TrajectoryState evaluate_trajectory(const Trajectory& trajectory, double t_ms) {
    struct Visitor {
        double t;
        TrajectoryState operator()(const LinearTrajectory& l) const {
            const double s = l.speed * t / 1000.0;
            return {l.start_x + s * std::cos(l.direction), l.start_y + s * std::sin(l.direction),
                    wrap_angle(l.direction)};
        }
        TrajectoryState operator()(const SinusoidTrajectory& s) const {
            const auto [x, y] = benchmark_sinusoid(t);
            const double u = (t + 300.0) / 1000.0;
            const double vx = -250.0;
            const double vy = 15.0 * 4.0 * std::numbers::pi * std::cos(4.0 * std::numbers::pi * u);
            return {s.scale * x, s.scale * y, wrap_angle(std::atan2(vy, vx))};
        }
        TrajectoryState operator()(const WaypointTrajectory& w) const {
            const auto& p = w.points;
            if (p.empty()) {
                throw ValidationError("waypoint trajectory needs at least one point", "waypoints");
            }
            if (p.size() == 1 || t <= p.front().t_ms) {
                const double dir = p.size() > 1 ? std::atan2(p[1].y - p[0].y, p[1].x - p[0].x) : 0.0;
                return {p.front().x, p.front().y, wrap_angle(dir)};
            }
            for (std::size_t i = 1; i < p.size(); ++i) {
                if (t <= p[i].t_ms) {
                    const double span = p[i].t_ms - p[i - 1].t_ms;
                    const double f = span > 0.0 ? (t - p[i - 1].t_ms) / span : 1.0;
                    return {p[i - 1].x + f * (p[i].x - p[i - 1].x), p[i - 1].y + f * (p[i].y - p[i - 1].y),
                            wrap_angle(std::atan2(p[i].y - p[i - 1].y, p[i].x - p[i - 1].x))};
                }
            }
            const auto& a = p[p.size() - 2];
            const auto& b = p.back();
            return {b.x, b.y, wrap_angle(std::atan2(b.y - a.y, b.x - a.x))};
        }
    };
    return std::visit(Visitor{t_ms}, trajectory);
}

// ---------------------------------------------------------------------------

PixelRect centered_rect(double cx, double cy, int w, int h) {
    return {static_cast<int>(std::floor(cx - w / 2.0 + 0.5)), static_cast<int>(std::floor(cy - h / 2.0 + 0.5)), w, h};
}

int required_panorama_width(const StimulusSpec& spec) {
    return spec.width + static_cast<int>(std::ceil(std::abs(spec.background_velocity) * spec.duration / spec.sample_rate));
}

void StimulusSpec::validate(int warmup) const {
    if (width <= 0 || height <= 0) {
        throw ValidationError("stimulus dimensions must be positive", "width");
    }
    if (duration <= 0) {
        throw ValidationError("duration must be positive", "duration");
    }
    if (warmup > 0 && duration <= warmup) {
        throw ValidationError("duration " + std::to_string(duration) + " must exceed the warm-up length " +
                                  std::to_string(warmup),
                              "duration");
    }
    if (!(std::isfinite(sample_rate) && sample_rate > 0.0)) {
        throw ValidationError("sample_rate must be positive", "sample_rate");
    }
    if (!std::isfinite(background_velocity)) {
        throw ValidationError("background_velocity must be finite", "background_velocity");
    }
    if (background.kind == BackgroundKind::uniform && !(background.luminance >= 0.0 && background.luminance <= 255.0)) {
        throw ValidationError("background luminance must be within [0,255]", "background_luminance");
    }
    if (background.kind == BackgroundKind::panorama && background.panorama_path.empty()) {
        throw ValidationError("panorama background needs panorama_path", "panorama_path");
    }
    if (!target) {
        return;
    }
    if (!(target->luminance >= 0.0 && target->luminance <= 255.0)) {
        throw ValidationError("target luminance must be within [0,255]", "target_luminance");
    }
    if (target->width < 1 || target->height < 1) {
        throw ValidationError("target size must be at least 1x1", "target_width");
    }
    for (int k = 0; k < duration; ++k) {
        const auto s = evaluate_trajectory(target->trajectory, time_ms(k));
        if (clip_target) {
            continue;
        }
        const auto r = centered_rect(s.x, s.y, target->width, target->height);
        if (r.x0 < 0 || r.y0 < 0 || r.x0 + r.w > width || r.y0 + r.h > height) {
            throw ValidationError("target leaves the frame at frame " + std::to_string(k), "trajectory");
        }
    }
}

// ---------------------------------------------------------------------------

StimulusRenderer::StimulusRenderer(StimulusSpec spec)
    : spec_((spec.validate(), std::move(spec))), panorama_(1, 1) {
    const int needed = required_panorama_width(spec_);
    switch (spec_.background.kind) {
    case BackgroundKind::procedural:
        panorama_ = procedural_background(spec_.background.seed, needed, spec_.height, spec_.background.clutter);
        break;
    case BackgroundKind::uniform:
        panorama_ = Frame(needed, spec_.height, spec_.background.luminance);
        break;
    case BackgroundKind::panorama:
        panorama_ = read_pgm(spec_.background.panorama_path);
        if (panorama_.height() != spec_.height) {
            throw ValidationError("panorama height " + std::to_string(panorama_.height()) + " differs from frame height " +
                                      std::to_string(spec_.height),
                                  "panorama_path");
        }
        if (panorama_.width() < needed) {
            throw ValidationError("panorama is " + std::to_string(panorama_.width()) + " px wide, need at least " +
                                      std::to_string(needed),
                                  "panorama_path");
        }
        break;
    }
    if (spec_.background_velocity > 0.0) {
        base_offset_ = static_cast<int>(std::ceil(spec_.background_velocity * spec_.duration / spec_.sample_rate));
    }
}

void StimulusRenderer::render_background(int frame, Frame& out) const {
    const int pw = panorama_.width();
    const double shift = spec_.background_velocity * frame / spec_.sample_rate;
    for (int x = 0; x < spec_.width; ++x) {
        const double u = x + base_offset_ - shift;
        const double fl = std::floor(u);
        const double frac = u - fl;
        int i0 = static_cast<int>(fl) % pw;
        if (i0 < 0) {
            i0 += pw;
        }
        const int i1 = (i0 + 1) % pw;
        for (int y = 0; y < spec_.height; ++y) {
            const double a = panorama_(i0, y);
            out(x, y) = frac == 0.0 ? a : a + frac * (panorama_(i1, y) - a);
        }
    }
}

Frame StimulusRenderer::render(int frame) const {
    if (frame < 0 || frame >= spec_.duration) {
        throw ValidationError("frame index " + std::to_string(frame) + " out of range", "frame");
    }
    Frame out(spec_.width, spec_.height);
    render_background(frame, out);
    if (spec_.target) {
        const auto s = evaluate_trajectory(spec_.target->trajectory, spec_.time_ms(frame));
        const auto r = centered_rect(s.x, s.y, spec_.target->width, spec_.target->height);
        for (int y = std::max(0, r.y0); y < std::min(spec_.height, r.y0 + r.h); ++y) {
            for (int x = std::max(0, r.x0); x < std::min(spec_.width, r.x0 + r.w); ++x) {
                out(x, y) = spec_.target->luminance;
            }
        }
    }
    return out;
}

TruthSample StimulusRenderer::truth(int frame) const {
    TruthSample s;
    s.t = frame;
    if (!spec_.target) {
        return s;
    }
    const auto state = evaluate_trajectory(spec_.target->trajectory, spec_.time_ms(frame));
    s.x = state.x;
    s.y = state.y;
    s.direction = state.direction;
    s.present = state.x >= 0.0 && state.x < spec_.width && state.y >= 0.0 && state.y < spec_.height;
    return s;
}

GroundTruthTrack StimulusRenderer::track() const {
    GroundTruthTrack track;
    if (spec_.target) {
        track.target_width = spec_.target->width;
        track.target_height = spec_.target->height;
    }
    track.samples.reserve(static_cast<std::size_t>(spec_.duration));
    for (int k = 0; k < spec_.duration; ++k) {
        track.samples.push_back(truth(k));
    }
    return track;
}

std::pair<ImageSequence, GroundTruthTrack> generate(const StimulusSpec& spec) {
    const StimulusRenderer renderer(spec);
    ImageSequence seq;
    seq.sample_rate = spec.sample_rate;
    seq.frames.reserve(static_cast<std::size_t>(spec.duration));
    for (int k = 0; k < spec.duration; ++k) {
        seq.frames.push_back(renderer.render(k));
    }
    return {std::move(seq), renderer.track()};
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string_view background_name(BackgroundKind kind) {
    switch (kind) {
    case BackgroundKind::procedural: return "procedural";
    case BackgroundKind::uniform: return "uniform";
    case BackgroundKind::panorama: return "panorama";
    }
    return "procedural";
}

std::vector<Waypoint> parse_waypoints(std::string_view text, int line) {
    std::vector<Waypoint> points;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find(',', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto item = detail::trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (item.empty()) {
            continue;
        }
        const auto c1 = item.find(':');
        const auto c2 = c1 == std::string_view::npos ? c1 : item.find(':', c1 + 1);
        if (c2 == std::string_view::npos) {
            throw ParseError("waypoint must be t:x:y, got '" + std::string(item) + "'", line);
        }
        points.push_back({detail::parse_double(item.substr(0, c1), line),
                          detail::parse_double(item.substr(c1 + 1, c2 - c1 - 1), line),
                          detail::parse_double(item.substr(c2 + 1), line)});
    }
    return points;
}

} // namespace

StimulusSpec parse_stimulus_spec(std::string_view text) {
    StimulusSpec spec;
    TargetSpec target;
    bool has_target = true;
    std::string trajectory = "sinusoid";
    LinearTrajectory linear;
    SinusoidTrajectory sinusoid;
    WaypointTrajectory waypoints;

    detail::for_each_key_value(text, [&](std::string_view key, std::string_view value, int line) {
        using detail::parse_double;
        using detail::parse_int;
        if (key == "width") {
            spec.width = parse_int(value, line);
        } else if (key == "height") {
            spec.height = parse_int(value, line);
        } else if (key == "duration") {
            spec.duration = parse_int(value, line);
        } else if (key == "sample_rate") {
            spec.sample_rate = parse_double(value, line);
        } else if (key == "background") {
            if (value == "procedural") {
                spec.background.kind = BackgroundKind::procedural;
            } else if (value == "uniform") {
                spec.background.kind = BackgroundKind::uniform;
            } else if (value == "panorama") {
                spec.background.kind = BackgroundKind::panorama;
            } else {
                throw ParseError("unknown background '" + std::string(value) + "'", line);
            }
        } else if (key == "seed") {
            spec.background.seed = static_cast<std::uint64_t>(detail::parse_int64(value, line));
        } else if (key == "background_luminance") {
            spec.background.luminance = parse_double(value, line);
        } else if (key == "panorama_path") {
            spec.background.panorama_path = std::string(value);
        } else if (key == "clutter_noise_cell") {
            spec.background.clutter.noise_cell = parse_int(value, line);
        } else if (key == "clutter_noise_octaves") {
            spec.background.clutter.noise_octaves = parse_int(value, line);
        } else if (key == "clutter_noise_contrast") {
            spec.background.clutter.noise_contrast = parse_double(value, line);
        } else if (key == "clutter_shape_density") {
            spec.background.clutter.shape_density = parse_double(value, line);
        } else if (key == "clutter_min_size") {
            spec.background.clutter.min_shape_size = parse_double(value, line);
        } else if (key == "clutter_max_size") {
            spec.background.clutter.max_shape_size = parse_double(value, line);
        } else if (key == "background_velocity") {
            spec.background_velocity = parse_double(value, line);
        } else if (key == "target") {
            has_target = detail::parse_bool(value, line);
        } else if (key == "target_luminance") {
            target.luminance = parse_double(value, line);
        } else if (key == "target_width") {
            target.width = parse_int(value, line);
        } else if (key == "target_height") {
            target.height = parse_int(value, line);
        } else if (key == "trajectory") {
            if (value != "linear" && value != "sinusoid" && value != "waypoints") {
                throw ParseError("unknown trajectory '" + std::string(value) + "'", line);
            }
            trajectory = std::string(value);
        } else if (key == "trajectory_scale") {
            sinusoid.scale = parse_double(value, line);
        } else if (key == "start_x") {
            linear.start_x = parse_double(value, line);
        } else if (key == "start_y") {
            linear.start_y = parse_double(value, line);
        } else if (key == "target_speed") {
            linear.speed = parse_double(value, line);
        } else if (key == "target_direction") {
            linear.direction = parse_double(value, line);
        } else if (key == "waypoints") {
            waypoints.points = parse_waypoints(value, line);
        } else if (key == "clip_target") {
            spec.clip_target = detail::parse_bool(value, line);
        } else {
            throw ParseError("unknown key '" + std::string(key) + "'", line);
        }
    });

    if (trajectory == "linear") {
        target.trajectory = linear;
    } else if (trajectory == "waypoints") {
        target.trajectory = waypoints;
    } else {
        target.trajectory = sinusoid;
    }
    spec.target = has_target ? std::optional<TargetSpec>(target) : std::nullopt;
    spec.validate();
    return spec;
}

StimulusSpec load_stimulus_spec(const std::string& path) { return parse_stimulus_spec(detail::read_text_file(path)); }

std::string serialize_stimulus_spec(const StimulusSpec& spec) {
    using detail::format_double;
    std::string out;
    const auto put = [&](std::string_view key, const std::string& value) {
        out.append(key).append(" = ").append(value).append("\n");
    };
    put("width", std::to_string(spec.width));
    put("height", std::to_string(spec.height));
    put("duration", std::to_string(spec.duration));
    put("sample_rate", format_double(spec.sample_rate));
    put("background", std::string(background_name(spec.background.kind)));
    put("seed", std::to_string(spec.background.seed));
    put("background_luminance", format_double(spec.background.luminance));
    if (!spec.background.panorama_path.empty()) {
        put("panorama_path", spec.background.panorama_path);
    }
    const auto& c = spec.background.clutter;
    put("clutter_noise_cell", std::to_string(c.noise_cell));
    put("clutter_noise_octaves", std::to_string(c.noise_octaves));
    put("clutter_noise_contrast", format_double(c.noise_contrast));
    put("clutter_shape_density", format_double(c.shape_density));
    put("clutter_min_size", format_double(c.min_shape_size));
    put("clutter_max_size", format_double(c.max_shape_size));
    put("background_velocity", format_double(spec.background_velocity));
    put("clip_target", spec.clip_target ? "true" : "false");
    put("target", spec.target ? "true" : "false");
    if (!spec.target) {
        return out;
    }
    const auto& t = *spec.target;
    put("target_luminance", format_double(t.luminance));
    put("target_width", std::to_string(t.width));
    put("target_height", std::to_string(t.height));
    if (const auto* l = std::get_if<LinearTrajectory>(&t.trajectory)) {
        put("trajectory", "linear");
        put("start_x", format_double(l->start_x));
        put("start_y", format_double(l->start_y));
        put("target_speed", format_double(l->speed));
        put("target_direction", format_double(l->direction));
    } else if (const auto* s = std::get_if<SinusoidTrajectory>(&t.trajectory)) {
        put("trajectory", "sinusoid");
        put("trajectory_scale", format_double(s->scale));
    } else {
        const auto& w = std::get<WaypointTrajectory>(t.trajectory);
        std::string list;
        for (const auto& p : w.points) {
            if (!list.empty()) {
                list += ", ";
            }
            list += format_double(p.t_ms) + ":" + format_double(p.x) + ":" + format_double(p.y);
        }
        put("trajectory", "waypoints");
        put("waypoints", list);
    }
    return out;
}

} // namespace flyvis
