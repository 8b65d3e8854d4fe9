#include "flyvis/tsdn.hpp"

namespace flyvis {

int background_direction_index(const ResponseVolume& f) {
    int best = 0;
    double best_sum = f.channel_sum(0);
    for (int d = 1; d < f.channel_count(); ++d) {
        const double s = f.channel_sum(d);
        if (s > best_sum) {
            best_sum = s;
            best = d;
        }
    }
    return best;
}

double estimate_background_direction(const ResponseVolume& f) {
    return f.directions().angle(background_direction_index(f));
}

ResponseVolume integrate(const ResponseVolume& e, const ResponseVolume& f, double psi_star, const ModelConfig& config) {
    if (!e.same_layout(f)) {
        throw ValidationError("STMD and LPTC volumes differ in size or direction set");
    }
    const auto psi = e.directions().index_of(psi_star);
    if (!psi) {
        throw ValidationError("background direction " + std::to_string(psi_star) + " is not in the direction set",
                              "psi_star");
    }
    ResponseVolume t = e;
    if (config.alpha2 != 0.0) {
        auto dst = t.channel(*psi);
        const auto inhibition = f.channel(*psi);
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] -= config.alpha2 * inhibition[i];
        }
    }
    return t;
}

std::vector<Detection> detect_tsdn(const ResponseVolume& t_volume, double beta, int t) {
    return extract_detections(t_volume, beta, t);
}

} // namespace flyvis
