#include "flyvis/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "text_util.hpp"

namespace flyvis {

double weber_contrast(const Frame& frame, double cx, double cy, int w, int h, int d) {
    if (w < 1 || h < 1 || d < 1) {
        throw ValidationError("target size and surround width must be positive", "w");
    }
    const auto target = centered_rect(cx, cy, w, h);
    const PixelRect outer{target.x0 - d, target.y0 - d, w + 2 * d, h + 2 * d};
    if (outer.x0 < 0 || outer.y0 < 0 || outer.x0 + outer.w > frame.width() || outer.y0 + outer.h > frame.height()) {
        throw ValidationError("background rectangle around the target leaves the frame", "center");
    }
    double target_sum = 0.0;
    double surround_sum = 0.0;
    for (int y = outer.y0; y < outer.y0 + outer.h; ++y) {
        for (int x = outer.x0; x < outer.x0 + outer.w; ++x) {
            const bool inside = x >= target.x0 && x < target.x0 + w && y >= target.y0 && y < target.y0 + h;
            (inside ? target_sum : surround_sum) += frame(x, y);
        }
    }
    const double target_mean = target_sum / (w * h);
    const double surround_mean = surround_sum / (outer.w * outer.h - w * h);
    return std::abs(target_mean - surround_mean) / 255.0;
}

// ---------------------------------------------------------------------------

FrameMatch match_frame(std::span<const Detection> detections, const TruthSample& truth, double radius) {
    FrameMatch m;
    m.t = truth.t;
    m.detections = static_cast<int>(detections.size());
    m.target_present = truth.present;
    if (!truth.present) {
        return m;
    }
    for (std::size_t i = 0; i < detections.size(); ++i) {
        const double dist = std::hypot(detections[i].x - truth.x, detections[i].y - truth.y);
        if (dist > radius) {
            continue;
        }
        const bool better = m.matched < 0 || dist < m.distance ||
                            (dist == m.distance &&
                             detections[i].response > detections[static_cast<std::size_t>(m.matched)].response);
        if (better) {
            m.matched = static_cast<int>(i);
            m.distance = dist;
        }
    }
    return m;
}

EvalReport summarize(std::vector<FrameMatch> frames) {
    EvalReport r;
    r.frames = std::move(frames);
    r.frames_evaluated = static_cast<int>(r.frames.size());
    for (const auto& f : r.frames) {
        r.actual_targets += f.target_present ? 1 : 0;
        r.true_detections += f.matched >= 0 ? 1 : 0;
        r.false_detections += f.false_detections();
    }
    r.detection_rate = r.actual_targets > 0 ? static_cast<double>(r.true_detections) / r.actual_targets : 0.0;
    r.false_alarm_rate = r.frames_evaluated > 0 ? static_cast<double>(r.false_detections) / r.frames_evaluated : 0.0;
    return r;
}

EvalReport match_and_score(const std::vector<std::vector<Detection>>& per_frame, const GroundTruthTrack& truth,
                           double radius, int warmup) {
    if (!(radius > 0.0)) {
        throw ValidationError("match radius must be positive", "radius");
    }
    if (truth.size() < per_frame.size()) {
        throw ValidationError("ground truth covers " + std::to_string(truth.size()) + " frames, detections " +
                                  std::to_string(per_frame.size()),
                              "truth");
    }
    std::vector<FrameMatch> frames;
    for (std::size_t t = static_cast<std::size_t>(std::max(warmup, 0)); t < per_frame.size(); ++t) {
        frames.push_back(match_frame(per_frame[t], truth.samples[t], radius));
        frames.back().t = static_cast<int>(t);
    }
    return summarize(std::move(frames));
}

// ---------------------------------------------------------------------------

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw ValidationError("threshold grid is empty", "beta_grid");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ValidationError("threshold grid must be strictly ascending", "beta_grid");
        }
    }
}

} // namespace

RocAccumulator::RocAccumulator(std::vector<double> beta_grid, double radius, int warmup)
    : grid_(std::move(beta_grid)), radius_(radius), warmup_(warmup), matches_(grid_.size()) {
    check_grid(grid_);
    if (!(radius > 0.0)) {
        throw ValidationError("match radius must be positive", "radius");
    }
}

void RocAccumulator::add(int t, const ResponseVolume& volume, const TruthSample& truth) {
    add(t, peak_map(volume), volume.directions(), truth);
}

void RocAccumulator::add(int t, const PeakMap& peaks, const DirectionSet& directions, const TruthSample& truth) {
    if (t < warmup_) {
        return;
    }
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const auto detections = extract_detections(peaks, directions, grid_[i], t);
        auto m = match_frame(detections, truth, radius_);
        m.t = t;
        matches_[i].push_back(m);
    }
}

std::vector<RocPoint> RocAccumulator::points() const {
    std::vector<RocPoint> out;
    out.reserve(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const auto report = summarize(matches_[i]);
        out.push_back({grid_[i], report.false_alarm_rate, report.detection_rate});
    }
    return out;
}

std::vector<RocPoint> roc_sweep(const std::vector<ResponseVolume>& volumes, const GroundTruthTrack& truth,
                                const std::vector<double>& beta_grid, double radius, int warmup) {
    RocAccumulator acc(beta_grid, radius, warmup);
    for (std::size_t t = 0; t < volumes.size(); ++t) {
        acc.add(static_cast<int>(t), volumes[t], truth.samples.at(t));
    }
    return acc.points();
}

std::vector<double> parse_grid(std::string_view text) {
    std::vector<double> grid;
    text = detail::trim(text);
    if (text.find(':') != std::string_view::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string_view::npos) {
            throw ValidationError("grid must be a:b:step or a comma list", "grid");
        }
        double a = 0.0;
        double b = 0.0;
        double step = 0.0;
        try {
            a = detail::parse_double(detail::trim(text.substr(0, c1)), 1);
            b = detail::parse_double(detail::trim(text.substr(c1 + 1, c2 - c1 - 1)), 1);
            step = detail::parse_double(detail::trim(text.substr(c2 + 1)), 1);
        } catch (const ParseError& e) {
            throw ValidationError(std::string("bad grid: ") + e.what(), "grid");
        }
        if (!(step > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
            throw ValidationError("grid a:b:step needs finite bounds and step > 0", "grid");
        }
        if (b < a) {
            throw ValidationError("grid must be ascending (a <= b)", "grid");
        }
        const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
        for (long i = 0; i <= n; ++i) {
            grid.push_back(a + static_cast<double>(i) * step);
        }
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto comma = text.find(',', pos);
            if (comma == std::string_view::npos) {
                comma = text.size();
            }
            const auto item = detail::trim(text.substr(pos, comma - pos));
            pos = comma + 1;
            if (item.empty()) {
                continue;
            }
            try {
                grid.push_back(detail::parse_double(item, 1));
            } catch (const ParseError& e) {
                throw ValidationError(std::string("bad grid value: ") + e.what(), "grid");
            }
        }
    }
    check_grid(grid);
    return grid;
}

// ---------------------------------------------------------------------------

namespace {

struct Curve {
    std::vector<double> fa;
    std::vector<double> dr;

    double at(double x) const {
        const auto it = std::lower_bound(fa.begin(), fa.end(), x);
        const auto i = static_cast<std::size_t>(it - fa.begin());
        if (i < fa.size() && fa[i] == x) {
            return dr[i];
        }
        if (i == 0) {
            return dr.front();
        }
        if (i == fa.size()) {
            return dr.back();
        }
        const double f = (x - fa[i - 1]) / (fa[i] - fa[i - 1]);
        return dr[i - 1] + f * (dr[i] - dr[i - 1]);
    }
};

Curve make_curve(const std::vector<RocPoint>& points) {
    std::vector<RocPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const RocPoint& a, const RocPoint& b) {
        return a.false_alarm_rate < b.false_alarm_rate ||
               (a.false_alarm_rate == b.false_alarm_rate && a.detection_rate > b.detection_rate);
    });
    Curve c;
    for (const auto& p : sorted) {
        if (!c.fa.empty() && c.fa.back() == p.false_alarm_rate) {
            continue;
        }
        c.fa.push_back(p.false_alarm_rate);
        c.dr.push_back(p.detection_rate);
    }
    return c;
}

} // namespace

RocComparison compare_roc(const std::vector<RocPoint>& a, const std::vector<RocPoint>& b, double tolerance) {
    RocComparison result;
    if (a.empty() || b.empty()) {
        return result;
    }
    const Curve ca = make_curve(a);
    const Curve cb = make_curve(b);
    const double lo = std::max(ca.fa.front(), cb.fa.front());
    const double hi = std::min(ca.fa.back(), cb.fa.back());
    if (lo > hi) {
        return result;
    }
    std::vector<double> xs;
    for (const auto* c : {&ca, &cb}) {
        for (double x : c->fa) {
            if (x >= lo && x <= hi) {
                xs.push_back(x);
            }
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    result.worst_margin = std::numeric_limits<double>::infinity();
    for (double x : xs) {
        result.worst_margin = std::min(result.worst_margin, ca.at(x) - cb.at(x));
    }
    result.compared_points = static_cast<int>(xs.size());
    result.dominates = result.worst_margin >= -tolerance;
    for (std::size_t i = 0; i < ca.fa.size(); ++i) {
        if (ca.fa[i] >= lo && ca.fa[i] <= hi && ca.dr[i] > cb.at(ca.fa[i]) + 1e-12) {
            ++result.strict_improvements;
        }
    }
    return result;
}

} // namespace flyvis
