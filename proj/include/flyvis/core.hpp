#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flyvis {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a documented invariant. `field()` names the offending
/// parameter when there is one.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message, std::string field = {})
        : Error(message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, int line)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Streaming stage received a frame inconsistent with its state.
class StreamError : public Error {
public:
    using Error::Error;
};

/// A stage was asked for an input it was not configured to produce.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Frame
// ---------------------------------------------------------------------------

/// Real-valued 2-D luminance grid, row-major. Input frames live in [0,255];
/// intermediate stages reuse the type with unbounded values.
class Frame {
public:
    Frame(int width, int height, double fill = 0.0);
    Frame(int width, int height, std::vector<double> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
    double operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

    std::span<double> pixels() noexcept { return data_; }
    std::span<const double> pixels() const noexcept { return data_; }

    bool same_shape(const Frame& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    /// Throws ValidationError unless every value is within [0,255].
    void check_input_range() const;

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<double> data_;
};

struct ImageSequence {
    std::vector<Frame> frames;
    double sample_rate = 1000.0;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Directions
// ---------------------------------------------------------------------------

/// Evenly quantized directions theta_i = 2*pi*i/count.
class DirectionSet {
public:
    explicit DirectionSet(int count);

    int count() const noexcept { return static_cast<int>(angles_.size()); }
    double angle(int index) const { return angles_.at(static_cast<std::size_t>(index)); }
    std::span<const double> angles() const noexcept { return angles_; }

    /// Index whose angle matches `radians` modulo 2*pi, if any.
    std::optional<int> index_of(double radians, double tolerance = 1e-9) const;

    /// Index of the direction closest to `radians` (circular distance).
    int nearest_index(double radians) const;

    friend bool operator==(const DirectionSet& a, const DirectionSet& b) { return a.count() == b.count(); }

private:
    std::vector<double> angles_;
};

DirectionSet direction_set(int count);

/// Wraps an angle into [0, 2*pi).
double wrap_angle(double radians);

// ---------------------------------------------------------------------------
// Model configuration
// ---------------------------------------------------------------------------

/// Model parameters. Defaults are the reference parameter set; the
/// remaining fields are discretization choices and detection thresholds.
struct ModelConfig {
    // ommatidia
    double sigma1 = 1.0;
    // LMC band-pass
    int n1 = 2;
    double tau1 = 3.0;
    int n2 = 6;
    double tau2 = 9.0;
    // STMD delays
    int n3 = 3;
    double tau3 = 15.0;
    int n4 = 5;
    double tau4 = 25.0;
    int n5 = 8;
    double tau5 = 40.0;
    // LPTC delay
    int n6 = 5;
    double tau6 = 15.0;
    // correlation baseline (pixels)
    double alpha1 = 3.0;
    // lateral inhibition kernel
    double a = 1.0;
    double b = 3.0;
    double sigma2 = 1.5;
    double sigma3 = 3.0;
    double e = 1.0;
    double rho = 0.0;
    // TSDN suppression gain
    double alpha2 = 3.5;
    // thresholds
    double beta = 150.0;
    double gamma = 50.0;
    // discretization
    int direction_count = 8;
    double kernel_truncation_factor = 5.0;
    double spatial_kernel_radius_factor = 3.0;

    /// Throws ValidationError naming the first field that breaks an invariant.
    void validate() const;

    DirectionSet directions() const { return DirectionSet(direction_count); }

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Parses `key = value` lines (`#` starts a comment). Missing keys keep their
/// defaults; unknown keys and malformed lines raise ParseError.
ModelConfig parse_config(std::string_view text);

/// Reads and parses a config file. Throws IoError if it cannot be read.
ModelConfig load_config(const std::string& path);

/// Serializes every field with enough precision to round-trip exactly.
std::string serialize_config(const ModelConfig& config);

// ---------------------------------------------------------------------------
// Response volumes
// ---------------------------------------------------------------------------

/// Scalar field over (x, y, direction), stored channel-major.
class ResponseVolume {
public:
    ResponseVolume(int width, int height, DirectionSet directions, double fill = 0.0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    const DirectionSet& directions() const noexcept { return directions_; }
    int channel_count() const noexcept { return directions_.count(); }
    std::size_t channel_size() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    std::span<double> channel(int d) noexcept { return {values_.data() + offset(d), channel_size()}; }
    std::span<const double> channel(int d) const noexcept { return {values_.data() + offset(d), channel_size()}; }

    double& at(int x, int y, int d) noexcept { return values_[offset(d) + pixel(x, y)]; }
    double at(int x, int y, int d) const noexcept { return values_[offset(d) + pixel(x, y)]; }

    std::span<const double> values() const noexcept { return values_; }

    Frame channel_frame(int d) const;
    void set_channel(int d, const Frame& frame);

    double channel_sum(int d) const;

    bool same_layout(const ResponseVolume& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && directions_ == other.directions_;
    }

    friend bool operator==(const ResponseVolume&, const ResponseVolume&) = default;

private:
    std::size_t offset(int d) const noexcept { return static_cast<std::size_t>(d) * channel_size(); }
    std::size_t pixel(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    DirectionSet directions_;
    std::vector<double> values_;
};

} // namespace flyvis
