#pragma once

#include <span>
#include <vector>

#include "flyvis/core.hpp"

namespace flyvis {

/// Square 2-D kernel with support [-radius, radius]^2, row-major.
class SpatialKernel {
public:
    SpatialKernel(int radius, std::vector<double> weights);

    int radius() const noexcept { return radius_; }
    int side() const noexcept { return 2 * radius_ + 1; }
    double at(int dx, int dy) const noexcept {
        return weights_[static_cast<std::size_t>((dy + radius_) * side() + (dx + radius_))];
    }
    std::span<const double> weights() const noexcept { return weights_; }
    double sum() const;

private:
    int radius_;
    std::vector<double> weights_;
};

/// Causal FIR taps indexed by integer lag 0..length-1 (frames).
class TemporalKernel {
public:
    explicit TemporalKernel(std::vector<double> taps);

    int length() const noexcept { return static_cast<int>(taps_.size()); }
    double operator[](int lag) const noexcept { return taps_[static_cast<std::size_t>(lag)]; }
    std::span<const double> taps() const noexcept { return taps_; }
    double sum() const;

private:
    std::vector<double> taps_;
};

/// Isotropic Gaussian 1/(2 pi s^2) exp(-(x^2+y^2)/(2 s^2)) at integer offsets.
double gaussian_density(double sigma, double dx, double dy);

/// Sampled Gaussian on radius ceil(radius_factor*sigma), renormalized to unit sum.
SpatialKernel gaussian2d(double sigma, double radius_factor);

/// Unit-sum 1-D factor of gaussian2d: gaussian2d(s,f).at(dx,dy) == g[dx]*g[dy].
std::vector<double> gaussian1d(double sigma, double radius_factor);

/// Gamma kernel (n t)^n exp(-n t / tau) / ((n-1)! tau^(n+1)).
double gamma_density(int n, double tau, double t);

/// Raw (unnormalized) samples of the Gamma kernel at t = 0..ceil(f*tau)-1.
TemporalKernel gamma_kernel(int n, double tau, double truncation_factor);

/// LMC impulse response: difference of a fast and a slow Gamma kernel. Each
/// lobe is scaled to unit discrete sum before subtraction, so the kernel has
/// exactly zero DC gain like its continuous counterpart.
TemporalKernel bandpass_kernel(int n1, double tau1, int n2, double tau2, double truncation_factor);

/// Difference-of-Gaussians profile G_s2 - e*G_s3 - rho (raw densities).
double inhibition_profile(double sigma2, double sigma3, double e, double rho, double dx, double dy);

/// Lateral inhibition kernel A*[g]^+ + B*[g]^- on radius ceil(radius_factor*sigma3).
SpatialKernel inhibition_kernel(double sigma2, double sigma3, double e, double rho, double a, double b,
                                double radius_factor);

// Convenience overloads reading parameters from a config.
TemporalKernel bandpass_kernel(const ModelConfig& config);
SpatialKernel inhibition_kernel(const ModelConfig& config);

} // namespace flyvis
