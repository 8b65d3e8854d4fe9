#include "flyvis/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <variant>

#include "text_util.hpp"

namespace flyvis {

Frame::Frame(int width, int height, double fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("frame dimensions must be positive, got " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Frame::Frame(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("frame dimensions must be positive, got " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw ValidationError("frame data length " + std::to_string(data_.size()) + " does not match " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
}

void Frame::check_input_range() const {
    for (std::size_t i = 0; i < data_.size(); ++i) {
        const double v = data_[i];
        if (!(v >= 0.0 && v <= 255.0)) {
            throw ValidationError("input pixel " + std::to_string(i) + " outside [0,255]: " + std::to_string(v));
        }
    }
}

void ImageSequence::validate() const {
    if (!(sample_rate > 0.0)) {
        throw ValidationError("sample_rate must be positive", "sample_rate");
    }
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (!frames[i].same_shape(frames.front())) {
            throw ValidationError("frame " + std::to_string(i) + " has different dimensions than frame 0");
        }
    }
}

// ---------------------------------------------------------------------------

double wrap_angle(double radians) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(radians, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    if (r >= two_pi) {
        r = 0.0;
    }
    return r;
}

DirectionSet::DirectionSet(int count) {
    if (count < 2) {
        throw ValidationError("direction count must be >= 2, got " + std::to_string(count), "direction_count");
    }
    angles_.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        angles_[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / count;
    }
}

namespace {

double circular_distance(double a, double b) {
    const double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, 2.0 * std::numbers::pi - d);
}

} // namespace

std::optional<int> DirectionSet::index_of(double radians, double tolerance) const {
    const int i = nearest_index(radians);
    if (circular_distance(angles_[static_cast<std::size_t>(i)], radians) <= tolerance) {
        return i;
    }
    return std::nullopt;
}

int DirectionSet::nearest_index(double radians) const {
    const double step = 2.0 * std::numbers::pi / count();
    const long i = std::lround(wrap_angle(radians) / step);
    return static_cast<int>(i % count());
}

DirectionSet direction_set(int count) { return DirectionSet(count); }

// ---------------------------------------------------------------------------
// ModelConfig

namespace {

using FieldRef = std::variant<int ModelConfig::*, double ModelConfig::*>;

struct FieldEntry {
    std::string_view key;
    FieldRef ref;
};

constexpr FieldEntry kFields[] = {
    {"sigma1", &ModelConfig::sigma1},
    {"n1", &ModelConfig::n1},
    {"tau1", &ModelConfig::tau1},
    {"n2", &ModelConfig::n2},
    {"tau2", &ModelConfig::tau2},
    {"n3", &ModelConfig::n3},
    {"tau3", &ModelConfig::tau3},
    {"n4", &ModelConfig::n4},
    {"tau4", &ModelConfig::tau4},
    {"n5", &ModelConfig::n5},
    {"tau5", &ModelConfig::tau5},
    {"n6", &ModelConfig::n6},
    {"tau6", &ModelConfig::tau6},
    {"alpha1", &ModelConfig::alpha1},
    {"a", &ModelConfig::a},
    {"b", &ModelConfig::b},
    {"sigma2", &ModelConfig::sigma2},
    {"sigma3", &ModelConfig::sigma3},
    {"e", &ModelConfig::e},
    {"rho", &ModelConfig::rho},
    {"alpha2", &ModelConfig::alpha2},
    {"beta", &ModelConfig::beta},
    {"gamma", &ModelConfig::gamma},
    {"direction_count", &ModelConfig::direction_count},
    {"kernel_truncation_factor", &ModelConfig::kernel_truncation_factor},
    {"spatial_kernel_radius_factor", &ModelConfig::spatial_kernel_radius_factor},
};

void require(bool ok, std::string_view field, const std::string& what) {
    if (!ok) {
        throw ValidationError(std::string(field) + ": " + what, std::string(field));
    }
}

} // namespace

void ModelConfig::validate() const {
    const std::pair<std::string_view, double> sigmas[] = {{"sigma1", sigma1}, {"sigma2", sigma2}, {"sigma3", sigma3}};
    for (const auto& [name, v] : sigmas) {
        require(std::isfinite(v) && v > 0.0, name, "must be > 0");
    }
    const std::pair<std::string_view, double> taus[] = {{"tau1", tau1}, {"tau2", tau2}, {"tau3", tau3},
                                                        {"tau4", tau4}, {"tau5", tau5}, {"tau6", tau6}};
    for (const auto& [name, v] : taus) {
        require(std::isfinite(v) && v > 0.0, name, "must be > 0");
    }
    const std::pair<std::string_view, int> orders[] = {{"n1", n1}, {"n2", n2}, {"n3", n3},
                                                       {"n4", n4}, {"n5", n5}, {"n6", n6}};
    for (const auto& [name, v] : orders) {
        require(v >= 1, name, "must be an integer >= 1");
    }
    require(std::isfinite(alpha1) && alpha1 > 0.0, "alpha1", "must be > 0");
    require(std::isfinite(alpha2) && alpha2 >= 0.0, "alpha2", "must be >= 0");
    require(sigma3 > sigma2, "sigma3", "must exceed sigma2");
    require(std::isfinite(a) && std::isfinite(b) && std::isfinite(e) && std::isfinite(rho), "a",
            "inhibition constants must be finite");
    require(!std::isnan(beta), "beta", "must be a number");
    require(!std::isnan(gamma), "gamma", "must be a number");
    require(direction_count >= 2, "direction_count", "must be >= 2");
    require(std::isfinite(kernel_truncation_factor) && kernel_truncation_factor > 0.0, "kernel_truncation_factor",
            "must be > 0");
    require(std::isfinite(spatial_kernel_radius_factor) && spatial_kernel_radius_factor >= 2.0,
            "spatial_kernel_radius_factor", "must be >= 2");
}

ModelConfig parse_config(std::string_view text) {
    ModelConfig config;
    detail::for_each_key_value(text, [&](std::string_view key, std::string_view value, int line) {
        const auto* entry = std::find_if(std::begin(kFields), std::end(kFields),
                                         [&](const FieldEntry& f) { return f.key == key; });
        if (entry == std::end(kFields)) {
            throw ParseError("unknown key '" + std::string(key) + "'", line);
        }
        std::visit(
            [&](auto member) {
                using T = std::remove_reference_t<decltype(config.*member)>;
                if constexpr (std::is_same_v<T, int>) {
                    config.*member = detail::parse_int(value, line);
                } else {
                    config.*member = detail::parse_double(value, line);
                }
            },
            entry->ref);
    });
    config.validate();
    return config;
}

ModelConfig load_config(const std::string& path) {
    return parse_config(detail::read_text_file(path));
}

std::string serialize_config(const ModelConfig& config) {
    std::string out;
    for (const auto& entry : kFields) {
        out += entry.key;
        out += " = ";
        std::visit(
            [&](auto member) {
                using T = std::remove_reference_t<decltype(config.*member)>;
                if constexpr (std::is_same_v<T, int>) {
                    out += std::to_string(config.*member);
                } else {
                    out += detail::format_double(config.*member);
                }
            },
            entry.ref);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// ResponseVolume

ResponseVolume::ResponseVolume(int width, int height, DirectionSet directions, double fill)
    : width_(width), height_(height), directions_(std::move(directions)) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("response volume dimensions must be positive");
    }
    values_.assign(channel_size() * static_cast<std::size_t>(directions_.count()), fill);
}

Frame ResponseVolume::channel_frame(int d) const {
    const auto c = channel(d);
    return Frame(width_, height_, std::vector<double>(c.begin(), c.end()));
}

void ResponseVolume::set_channel(int d, const Frame& frame) {
    if (frame.width() != width_ || frame.height() != height_) {
        throw ValidationError("channel frame dimensions do not match response volume");
    }
    std::copy(frame.pixels().begin(), frame.pixels().end(), channel(d).begin());
}

double ResponseVolume::channel_sum(int d) const {
    const auto c = channel(d);
    return std::accumulate(c.begin(), c.end(), 0.0);
}

} // namespace flyvis
