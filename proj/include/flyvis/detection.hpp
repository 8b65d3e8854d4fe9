#pragma once

#include <vector>

#include "flyvis/core.hpp"

namespace flyvis {

struct Detection {
    int t = 0;
    int x = 0;
    int y = 0;
    double direction = 0.0;
    int direction_index = 0;
    double response = 0.0;

    friend bool operator==(const Detection&, const Detection&) = default;
};

/// Per-pixel maximum over direction channels and the channel attaining it
/// (lowest index on ties).
struct PeakMap {
    int width = 0;
    int height = 0;
    std::vector<double> value;
    std::vector<int> channel;
};

PeakMap peak_map(const ResponseVolume& volume);

/// Groups pixels whose peak exceeds `threshold` into 8-connected components
/// and reports one detection per component at its strongest pixel. Components
/// are listed in raster order of their first pixel.
std::vector<Detection> extract_detections(const PeakMap& peaks, const DirectionSet& directions, double threshold,
                                          int t = 0);

std::vector<Detection> extract_detections(const ResponseVolume& volume, double threshold, int t = 0);

} // namespace flyvis
