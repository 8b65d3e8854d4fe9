#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "flyvis/convolution.hpp"
#include "flyvis/core.hpp"

namespace flyvis {

/// Gamma delay parameters (order, time constant in frames).
struct DelayKey {
    int n;
    double tau;

    auto operator<=>(const DelayKey&) const = default;
    std::string to_string() const;
};

struct OnOffChannels {
    Frame on;  // Tm3: max(L, 0)
    Frame off; // Tm2: max(-L, 0)
};

OnOffChannels rectify(const Frame& lmc_frame);

/// Medulla outputs for one time step. Delayed channels exist only for the
/// (n, tau) pairs the medulla was configured with.
struct MedullaOutputs {
    Frame tm3;
    Frame tm2;
    std::map<DelayKey, Frame> delayed_on;  // Mi1
    std::map<DelayKey, Frame> delayed_off; // Tm1

    /// Throw ConfigurationError when the requested delay was not computed.
    const Frame& mi1(DelayKey key) const;
    const Frame& tm1(DelayKey key) const;
};

/// A single Gamma delay line over a stream of frames.
class DelayLine {
public:
    DelayLine(int n, double tau, double truncation_factor);

    Frame push(const Frame& frame);
    const TemporalKernel& kernel() const { return convolver_.kernels().front(); }

private:
    TemporalConvolver convolver_;
};

/// Runs a whole stream through a fresh DelayLine.
std::vector<Frame> delay(const std::vector<Frame>& channel_stream, int n, double tau, const ModelConfig& config);

/// Stateful medulla stage. ON delays default to (n3,tau3) and (n6,tau6); OFF
/// delays to (n4,tau4), (n5,tau5) and (n6,tau6). Each channel keeps a single
/// history ring shared by all of its delays.
class Medulla {
public:
    explicit Medulla(const ModelConfig& config);
    Medulla(std::vector<DelayKey> on_delays, std::vector<DelayKey> off_delays, double truncation_factor);

    MedullaOutputs push(const Frame& lmc_frame);

    const std::vector<DelayKey>& on_delays() const noexcept { return on_keys_; }
    const std::vector<DelayKey>& off_delays() const noexcept { return off_keys_; }
    /// Longest delay kernel length in frames.
    int max_delay_length() const noexcept;

private:
    std::vector<DelayKey> on_keys_;
    std::vector<DelayKey> off_keys_;
    TemporalConvolver on_;
    TemporalConvolver off_;
};

} // namespace flyvis
