#include "flyvis/lptc.hpp"

#include <algorithm>

#include "flyvis/stmd.hpp"

namespace flyvis {

ResponseVolume lptc_correlate(const MedullaOutputs& medulla, const DirectionSet& directions,
                              const ModelConfig& config) {
    const DelayKey key{config.n6, config.tau6};
    const Frame& tm3 = medulla.tm3;
    const Frame& tm2 = medulla.tm2;
    const Frame& mi1 = medulla.mi1(key);
    const Frame& tm1 = medulla.tm1(key);

    const int w = tm3.width();
    const int h = tm3.height();
    ResponseVolume out(w, h, directions);
    for (int d = 0; d < directions.count(); ++d) {
        const auto off = partner_offset(directions.angle(d), config.alpha1);
        auto dst = out.channel(d);
        for (int y = 0; y < h; ++y) {
            const int py = y + off.dy;
            if (py < 0 || py >= h) {
                continue;
            }
            const int x0 = std::max(0, -off.dx);
            const int x1 = std::min(w, w - off.dx);
            for (int x = x0; x < x1; ++x) {
                const int px = x + off.dx;
                dst[static_cast<std::size_t>(y) * w + x] = tm3(x, y) * mi1(px, py) + tm2(x, y) * tm1(px, py);
            }
        }
    }
    return out;
}

std::vector<Detection> detect_background(const ResponseVolume& f, double gamma, int t) {
    return extract_detections(f, gamma, t);
}

} // namespace flyvis
