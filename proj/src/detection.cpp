#include "flyvis/detection.hpp"

#include <cstdint>

namespace flyvis {

PeakMap peak_map(const ResponseVolume& volume) {
    PeakMap map;
    map.width = volume.width();
    map.height = volume.height();
    const std::size_t n = volume.channel_size();
    map.value.assign(volume.channel(0).begin(), volume.channel(0).end());
    map.channel.assign(n, 0);
    for (int d = 1; d < volume.channel_count(); ++d) {
        const auto c = volume.channel(d);
        for (std::size_t i = 0; i < n; ++i) {
            if (c[i] > map.value[i]) {
                map.value[i] = c[i];
                map.channel[i] = d;
            }
        }
    }
    return map;
}

std::vector<Detection> extract_detections(const PeakMap& peaks, const DirectionSet& directions, double threshold,
                                          int t) {
    const int w = peaks.width;
    const int h = peaks.height;
    const std::size_t n = peaks.value.size();

    std::vector<std::uint8_t> visited(n, 0);
    std::vector<int> stack;
    std::vector<Detection> detections;

    for (std::size_t start = 0; start < n; ++start) {
        if (visited[start] || !(peaks.value[start] > threshold)) {
            continue;
        }
        visited[start] = 1;
        stack.assign(1, static_cast<int>(start));
        std::size_t best = start;
        while (!stack.empty()) {
            const int idx = stack.back();
            stack.pop_back();
            const auto uidx = static_cast<std::size_t>(idx);
            if (peaks.value[uidx] > peaks.value[best] ||
                (peaks.value[uidx] == peaks.value[best] && uidx < best)) {
                best = uidx;
            }
            const int x = idx % w;
            const int y = idx / w;
            for (int dy = -1; dy <= 1; ++dy) {
                const int ny = y + dy;
                if (ny < 0 || ny >= h) {
                    continue;
                }
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx;
                    if ((dx == 0 && dy == 0) || nx < 0 || nx >= w) {
                        continue;
                    }
                    const auto nidx = static_cast<std::size_t>(ny) * static_cast<std::size_t>(w) +
                                      static_cast<std::size_t>(nx);
                    if (!visited[nidx] && peaks.value[nidx] > threshold) {
                        visited[nidx] = 1;
                        stack.push_back(static_cast<int>(nidx));
                    }
                }
            }
        }
        Detection det;
        det.t = t;
        det.x = static_cast<int>(best % static_cast<std::size_t>(w));
        det.y = static_cast<int>(best / static_cast<std::size_t>(w));
        det.direction_index = peaks.channel[best];
        det.direction = directions.angle(det.direction_index);
        det.response = peaks.value[best];
        detections.push_back(det);
    }
    return detections;
}

std::vector<Detection> extract_detections(const ResponseVolume& volume, double threshold, int t) {
    return extract_detections(peak_map(volume), volume.directions(), threshold, t);
}

} // namespace flyvis
