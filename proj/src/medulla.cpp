#include "flyvis/medulla.hpp"

#include <algorithm>

#include "text_util.hpp"

namespace flyvis {

std::string DelayKey::to_string() const { return "(n=" + std::to_string(n) + ", tau=" + detail::format_double(tau) + ")"; }

OnOffChannels rectify(const Frame& lmc_frame) {
    OnOffChannels out{Frame(lmc_frame.width(), lmc_frame.height()), Frame(lmc_frame.width(), lmc_frame.height())};
    const auto src = lmc_frame.pixels();
    auto on = out.on.pixels();
    auto off = out.off.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        on[i] = std::max(src[i], 0.0);
        off[i] = std::max(-src[i], 0.0);
    }
    return out;
}

namespace {

const Frame& find_delay(const std::map<DelayKey, Frame>& channels, DelayKey key, const char* name) {
    const auto it = channels.find(key);
    if (it == channels.end()) {
        throw ConfigurationError(std::string(name) + " delay " + key.to_string() + " was not computed");
    }
    return it->second;
}

std::vector<DelayKey> unique_keys(std::vector<DelayKey> keys) {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

std::vector<TemporalKernel> kernels_for(const std::vector<DelayKey>& keys, double truncation_factor) {
    std::vector<TemporalKernel> kernels;
    kernels.reserve(keys.size());
    for (const auto& k : keys) {
        kernels.push_back(gamma_kernel(k.n, k.tau, truncation_factor));
    }
    return kernels;
}

} // namespace

const Frame& MedullaOutputs::mi1(DelayKey key) const { return find_delay(delayed_on, key, "Mi1"); }
const Frame& MedullaOutputs::tm1(DelayKey key) const { return find_delay(delayed_off, key, "Tm1"); }

DelayLine::DelayLine(int n, double tau, double truncation_factor)
    : convolver_({gamma_kernel(n, tau, truncation_factor)}) {}

Frame DelayLine::push(const Frame& frame) { return std::move(convolver_.push(frame).front()); }

std::vector<Frame> delay(const std::vector<Frame>& channel_stream, int n, double tau, const ModelConfig& config) {
    DelayLine line(n, tau, config.kernel_truncation_factor);
    std::vector<Frame> out;
    out.reserve(channel_stream.size());
    for (const auto& f : channel_stream) {
        out.push_back(line.push(f));
    }
    return out;
}

Medulla::Medulla(const ModelConfig& config)
    : Medulla({{config.n3, config.tau3}, {config.n6, config.tau6}},
              {{config.n4, config.tau4}, {config.n5, config.tau5}, {config.n6, config.tau6}},
              config.kernel_truncation_factor) {}

Medulla::Medulla(std::vector<DelayKey> on_delays, std::vector<DelayKey> off_delays, double truncation_factor)
    : on_keys_(unique_keys(std::move(on_delays))),
      off_keys_(unique_keys(std::move(off_delays))),
      on_(kernels_for(on_keys_, truncation_factor)),
      off_(kernels_for(off_keys_, truncation_factor)) {}

int Medulla::max_delay_length() const noexcept { return std::max(on_.history_capacity(), off_.history_capacity()); }

MedullaOutputs Medulla::push(const Frame& lmc_frame) {
    auto channels = rectify(lmc_frame);
    auto on_delayed = on_.push(channels.on);
    auto off_delayed = off_.push(channels.off);

    MedullaOutputs out{std::move(channels.on), std::move(channels.off), {}, {}};
    for (std::size_t i = 0; i < on_keys_.size(); ++i) {
        out.delayed_on.emplace(on_keys_[i], std::move(on_delayed[i]));
    }
    for (std::size_t i = 0; i < off_keys_.size(); ++i) {
        out.delayed_off.emplace(off_keys_[i], std::move(off_delayed[i]));
    }
    return out;
}

} // namespace flyvis
