#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "flyvis/core.hpp"

namespace flyvis {

// ---------------------------------------------------------------------------
// Backgrounds

/// Procedural clutter: smooth multi-octave value noise plus randomly placed
/// rectangles and ellipses, some of them target-sized.
struct ClutterParams {
    int noise_cell = 48;          // coarsest noise lattice spacing (px)
    int noise_octaves = 4;
    double noise_contrast = 70.0; // peak deviation of the noise from mid-grey
    double shape_density = 30.0;  // shapes per 10000 px^2
    double min_shape_size = 2.0;  // px
    double max_shape_size = 28.0; // px

    friend bool operator==(const ClutterParams&, const ClutterParams&) = default;
};

enum class BackgroundKind { procedural, uniform, panorama };

struct BackgroundSpec {
    BackgroundKind kind = BackgroundKind::procedural;
    std::uint64_t seed = 1;
    ClutterParams clutter;
    double luminance = 255.0;  // uniform backgrounds
    std::string panorama_path; // 8-bit PGM, height must match the frame

    friend bool operator==(const BackgroundSpec&, const BackgroundSpec&) = default;
};

/// Deterministic clutter panorama for a given seed.
Frame procedural_background(std::uint64_t seed, int width, int height, const ClutterParams& clutter = {});

// ---------------------------------------------------------------------------
// Trajectories

/// Constant velocity from (start_x, start_y) at t = 0.
struct LinearTrajectory {
    double start_x = 0.0;
    double start_y = 0.0;
    double speed = 250.0;   // px/s
    double direction = 0.0; // radians, image coordinates (y down)

    friend bool operator==(const LinearTrajectory&, const LinearTrajectory&) = default;
};

/// Curvilinear benchmark path (see benchmark_sinusoid), optionally scaled about
/// the origin for reduced frame sizes.
struct SinusoidTrajectory {
    double scale = 1.0;

    friend bool operator==(const SinusoidTrajectory&, const SinusoidTrajectory&) = default;
};

struct Waypoint {
    double t_ms;
    double x;
    double y;

    friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// Piecewise-linear path through time-stamped points; holds still outside them.
struct WaypointTrajectory {
    std::vector<Waypoint> points;

    friend bool operator==(const WaypointTrajectory&, const WaypointTrajectory&) = default;
};

using Trajectory = std::variant<LinearTrajectory, SinusoidTrajectory, WaypointTrajectory>;

/// Benchmark target path for t in [0, 1000] ms:
///   x = 500 - 250 (t+300)/1000,  y = 125 + 15 sin(4 pi (t+300)/1000).
std::pair<double, double> benchmark_sinusoid(double t_ms);

struct TrajectoryState {
    double x;
    double y;
    double direction; // [0, 2pi), from the path derivative
};

TrajectoryState evaluate_trajectory(const Trajectory& trajectory, double t_ms);

// ---------------------------------------------------------------------------
// Stimulus

struct TargetSpec {
    double luminance = 0.0;
    int width = 5;  // x extent
    int height = 5; // y extent
    Trajectory trajectory = SinusoidTrajectory{};

    friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

struct StimulusSpec {
    int width = 500;
    int height = 250;
    int duration = 1001; // frames
    double sample_rate = 1000.0;
    BackgroundSpec background;
    double background_velocity = 250.0; // px/s, positive = rightward
    std::optional<TargetSpec> target = TargetSpec{};
    /// Allow the target to leave the frame (it is clipped). Off by default.
    bool clip_target = false;

    /// Throws ValidationError on broken invariants. `warmup` > 0 additionally
    /// requires duration > warmup.
    void validate(int warmup = 0) const;

    double time_ms(int frame) const { return 1000.0 * frame / sample_rate; }

    friend bool operator==(const StimulusSpec&, const StimulusSpec&) = default;
};

StimulusSpec parse_stimulus_spec(std::string_view text);
StimulusSpec load_stimulus_spec(const std::string& path);
std::string serialize_stimulus_spec(const StimulusSpec& spec);

/// Integer pixel rectangle [x0, x0+w) x [y0, y0+h).
struct PixelRect {
    int x0;
    int y0;
    int w;
    int h;
};

/// Rectangle of size w x h whose centre is (cx, cy) rounded to pixels.
PixelRect centered_rect(double cx, double cy, int w, int h);

struct TruthSample {
    int t = 0;
    double x = 0.0;
    double y = 0.0;
    double direction = 0.0;
    bool present = false;

    friend bool operator==(const TruthSample&, const TruthSample&) = default;
};

struct GroundTruthTrack {
    std::vector<TruthSample> samples;
    int target_width = 0;
    int target_height = 0;

    std::size_t size() const noexcept { return samples.size(); }
    const TruthSample& at(int t) const { return samples.at(static_cast<std::size_t>(t)); }
};

/// Renders frames on demand; holds only the background panorama.
class StimulusRenderer {
public:
    explicit StimulusRenderer(StimulusSpec spec);

    int frame_count() const noexcept { return spec_.duration; }
    const StimulusSpec& spec() const noexcept { return spec_; }
    const Frame& panorama() const noexcept { return panorama_; }

    Frame render(int frame) const;
    TruthSample truth(int frame) const;
    GroundTruthTrack track() const;

private:
    void render_background(int frame, Frame& out) const;

    StimulusSpec spec_;
    Frame panorama_;
    int base_offset_ = 0;
};

/// Minimum panorama width the spec needs.
int required_panorama_width(const StimulusSpec& spec);

std::pair<ImageSequence, GroundTruthTrack> generate(const StimulusSpec& spec);

} // namespace flyvis
