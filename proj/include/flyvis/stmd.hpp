#pragma once

#include <vector>

#include "flyvis/core.hpp"
#include "flyvis/detection.hpp"
#include "flyvis/kernels.hpp"
#include "flyvis/medulla.hpp"

namespace flyvis {

struct PixelOffset {
    int dx;
    int dy;
};

/// Offset from a detector pixel to its correlation partner for preferred
/// direction `theta`. The partner lies `alpha1` pixels upstream,
/// (-alpha1 cos theta, -alpha1 sin theta) rounded to the nearest pixel, so that
/// a pattern travelling along theta reaches the partner first.
PixelOffset partner_offset(double theta, double alpha1);

/// Directional three-way correlation
///   D = Tm3(x) * [Tm1_(n4,tau4)(x) + Mi1_(n3,tau3)(x')] * Tm1_(n5,tau5)(x').
/// Partners outside the frame contribute zero.
ResponseVolume correlate(const MedullaOutputs& medulla, const DirectionSet& directions, const ModelConfig& config);

/// Lateral inhibition with W = A*[g]^+ + B*[g]^-, applied per direction
/// channel with clamp-to-edge borders.
///
/// The dense kernel is never applied directly. Using [g]^- = g - [g]^+,
///   W = B*g + (A - B)*[g]^+,
/// and g = G_s2 - e*G_s3 - rho is a sum of separable terms over the square
/// support, leaving only the small positive core as a dense convolution.
class LateralInhibition {
public:
    explicit LateralInhibition(const ModelConfig& config);

    Frame apply(const Frame& d) const;
    ResponseVolume apply(const ResponseVolume& d) const;

    const SpatialKernel& kernel() const noexcept { return kernel_; }

private:
    SpatialKernel kernel_;
    double a_;
    double b_;
    double e_;
    double rho_;
    std::vector<double> narrow_;  // unnormalized 1-D factor of G_s2
    std::vector<double> wide_;    // unnormalized 1-D factor of G_s3
    std::vector<double> box_;
    SpatialKernel positive_core_; // [g]^+ cropped to its support
};

ResponseVolume inhibit(const ResponseVolume& d, const ModelConfig& config);

/// Thresholds max_theta E at beta; see extract_detections.
std::vector<Detection> detect_stmd(const ResponseVolume& e, double beta, int t = 0);

} // namespace flyvis
