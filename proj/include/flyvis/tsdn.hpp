#pragma once

#include <vector>

#include "flyvis/core.hpp"
#include "flyvis/detection.hpp"

namespace flyvis {

/// Channel index maximizing the full-frame sum of F; lowest index on ties.
int background_direction_index(const ResponseVolume& f);

/// Angle of background_direction_index(f).
double estimate_background_direction(const ResponseVolume& f);

/// T = E - alpha2 * F(., ., psi) on the psi channel; T = E elsewhere.
/// Throws ValidationError when psi_star is not one of the direction angles or
/// the volumes disagree in layout.
ResponseVolume integrate(const ResponseVolume& e, const ResponseVolume& f, double psi_star, const ModelConfig& config);

std::vector<Detection> detect_tsdn(const ResponseVolume& t_volume, double beta, int t = 0);

} // namespace flyvis
