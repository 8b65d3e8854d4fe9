#pragma once

#include <span>
#include <vector>

#include "flyvis/core.hpp"
#include "flyvis/detection.hpp"
#include "flyvis/stimulus.hpp"

namespace flyvis {

/// |mu_target - mu_surround| / 255, where the surround is the (w+2d)x(h+2d)
/// rectangle around the target minus the target itself.
double weber_contrast(const Frame& frame, double cx, double cy, int w, int h, int d = 10);

/// Outcome of matching one frame's detections against the truth.
struct FrameMatch {
    int t = 0;
    int detections = 0;
    bool target_present = false;
    int matched = -1; // index into the frame's detections, -1 if none
    double distance = 0.0;

    int false_detections() const noexcept { return detections - (matched >= 0 ? 1 : 0); }
};

/// At most one detection per frame is true: the nearest one within `radius`
/// (Euclidean), ties going to the larger response, then the lower index.
FrameMatch match_frame(std::span<const Detection> detections, const TruthSample& truth, double radius);

struct EvalReport {
    double detection_rate = 0.0;   // true detections / frames with a target
    double false_alarm_rate = 0.0; // false detections / frames evaluated
    int frames_evaluated = 0;
    int actual_targets = 0;
    int true_detections = 0;
    int false_detections = 0;
    std::vector<FrameMatch> frames;
};

/// Scores frames [warmup, per_frame.size()). Entry t of `per_frame` holds the
/// detections of frame t.
EvalReport match_and_score(const std::vector<std::vector<Detection>>& per_frame, const GroundTruthTrack& truth,
                           double radius = 5.0, int warmup = 0);

/// Recomputes the rates from match records.
EvalReport summarize(std::vector<FrameMatch> frames);

// ---------------------------------------------------------------------------
// ROC

struct RocPoint {
    double beta;
    double false_alarm_rate;
    double detection_rate;
};

/// Streams response volumes frame by frame and scores every threshold of an
/// ascending grid without keeping the volumes.
class RocAccumulator {
public:
    /// Throws ValidationError unless `beta_grid` is non-empty and ascending.
    RocAccumulator(std::vector<double> beta_grid, double radius = 5.0, int warmup = 0);

    void add(int t, const ResponseVolume& volume, const TruthSample& truth);
    void add(int t, const PeakMap& peaks, const DirectionSet& directions, const TruthSample& truth);

    std::vector<RocPoint> points() const;
    const std::vector<double>& grid() const noexcept { return grid_; }

private:
    std::vector<double> grid_;
    double radius_;
    int warmup_;
    std::vector<std::vector<FrameMatch>> matches_;
};

/// In-memory convenience over RocAccumulator; volumes[t] is frame t.
std::vector<RocPoint> roc_sweep(const std::vector<ResponseVolume>& volumes, const GroundTruthTrack& truth,
                                const std::vector<double>& beta_grid, double radius = 5.0, int warmup = 0);

/// Parses `a:b:step` (inclusive, ascending) or a comma list such as
/// `10,50,inf`. Throws ValidationError when the result is empty or not ascending.
std::vector<double> parse_grid(std::string_view text);

struct RocComparison {
    bool dominates = false;       // margin >= -tolerance everywhere on the common F_A range
    double worst_margin = 0.0;    // min over compared points of D_R(a) - D_R(b)
    int compared_points = 0;
    int strict_improvements = 0;  // points of `a` where D_R(a) > D_R(b) (interpolated)
};

/// Compares curve `a` against `b` by linear interpolation of D_R over F_A.
/// Points are merged per F_A keeping the highest D_R; comparisons are made at
/// every F_A of either curve inside the common range.
RocComparison compare_roc(const std::vector<RocPoint>& a, const std::vector<RocPoint>& b, double tolerance);

} // namespace flyvis
