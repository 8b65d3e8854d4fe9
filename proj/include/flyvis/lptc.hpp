#pragma once

#include <vector>

#include "flyvis/core.hpp"
#include "flyvis/detection.hpp"
#include "flyvis/medulla.hpp"

namespace flyvis {

/// Two-quadrant wide-field correlator
///   F = Tm3(x) * Mi1_(n6,tau6)(x') + Tm2(x) * Tm1_(n6,tau6)(x'),
/// with the same partner geometry as the STMD correlation.
ResponseVolume lptc_correlate(const MedullaOutputs& medulla, const DirectionSet& directions,
                              const ModelConfig& config);

/// Background-object detections where max_psi F exceeds gamma.
std::vector<Detection> detect_background(const ResponseVolume& f, double gamma, int t = 0);

} // namespace flyvis
