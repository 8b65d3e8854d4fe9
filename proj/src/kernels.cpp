#include "flyvis/kernels.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace flyvis {

SpatialKernel::SpatialKernel(int radius, std::vector<double> weights)
    : radius_(radius), weights_(std::move(weights)) {
    if (radius < 0) {
        throw ValidationError("kernel radius must be >= 0");
    }
    if (weights_.size() != static_cast<std::size_t>(side() * side())) {
        throw ValidationError("kernel weight count does not match radius");
    }
    for (double w : weights_) {
        if (!std::isfinite(w)) {
            throw ValidationError("kernel weights must be finite");
        }
    }
}

double SpatialKernel::sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

TemporalKernel::TemporalKernel(std::vector<double> taps) : taps_(std::move(taps)) {
    if (taps_.empty()) {
        throw ValidationError("temporal kernel needs at least one tap");
    }
    for (double t : taps_) {
        if (!std::isfinite(t)) {
            throw ValidationError("temporal kernel taps must be finite");
        }
    }
}

double TemporalKernel::sum() const { return std::accumulate(taps_.begin(), taps_.end(), 0.0); }

// ---------------------------------------------------------------------------

namespace {

int support_radius(double sigma, double radius_factor) {
    return static_cast<int>(std::ceil(radius_factor * sigma));
}

void check_sigma(double sigma, const char* name) {
    if (!(std::isfinite(sigma) && sigma > 0.0)) {
        throw ValidationError(std::string(name) + " must be > 0", name);
    }
}

void check_radius_factor(double radius_factor) {
    if (!(std::isfinite(radius_factor) && radius_factor >= 2.0)) {
        throw ValidationError("radius factor must be >= 2", "spatial_kernel_radius_factor");
    }
}

} // namespace

double gaussian_density(double sigma, double dx, double dy) {
    const double s2 = sigma * sigma;
    return std::exp(-(dx * dx + dy * dy) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

SpatialKernel gaussian2d(double sigma, double radius_factor) {
    check_sigma(sigma, "sigma");
    check_radius_factor(radius_factor);
    const int r = support_radius(sigma, radius_factor);
    const int side = 2 * r + 1;
    std::vector<double> w(static_cast<std::size_t>(side * side));
    double total = 0.0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const double v = gaussian_density(sigma, dx, dy);
            w[static_cast<std::size_t>((dy + r) * side + (dx + r))] = v;
            total += v;
        }
    }
    for (double& v : w) {
        v /= total;
    }
    return SpatialKernel(r, std::move(w));
}

std::vector<double> gaussian1d(double sigma, double radius_factor) {
    check_sigma(sigma, "sigma");
    check_radius_factor(radius_factor);
    const int r = support_radius(sigma, radius_factor);
    std::vector<double> g(static_cast<std::size_t>(2 * r + 1));
    double total = 0.0;
    for (int d = -r; d <= r; ++d) {
        const double v = std::exp(-(d * d) / (2.0 * sigma * sigma));
        g[static_cast<std::size_t>(d + r)] = v;
        total += v;
    }
    for (double& v : g) {
        v /= total;
    }
    return g;
}

// ---------------------------------------------------------------------------

double gamma_density(int n, double tau, double t) {
    if (t < 0.0) {
        return 0.0;
    }
    // Evaluated in log space so large orders do not overflow (n t)^n.
    if (t == 0.0) {
        return 0.0;
    }
    const double log_value = n * std::log(n * t) - n * t / tau - std::lgamma(static_cast<double>(n)) -
                             (n + 1) * std::log(tau);
    return std::exp(log_value);
}

TemporalKernel gamma_kernel(int n, double tau, double truncation_factor) {
    if (n < 1) {
        throw ValidationError("gamma kernel order must be >= 1, got " + std::to_string(n), "n");
    }
    if (!(std::isfinite(tau) && tau > 0.0)) {
        throw ValidationError("gamma kernel time constant must be > 0", "tau");
    }
    if (!(std::isfinite(truncation_factor) && truncation_factor > 0.0)) {
        throw ValidationError("truncation factor must be > 0", "kernel_truncation_factor");
    }
    const int length = std::max(1, static_cast<int>(std::ceil(truncation_factor * tau)));
    std::vector<double> taps(static_cast<std::size_t>(length));
    for (int t = 0; t < length; ++t) {
        taps[static_cast<std::size_t>(t)] = gamma_density(n, tau, t);
    }
    return TemporalKernel(std::move(taps));
}

TemporalKernel bandpass_kernel(int n1, double tau1, int n2, double tau2, double truncation_factor) {
    const TemporalKernel fast = gamma_kernel(n1, tau1, truncation_factor);
    const TemporalKernel slow = gamma_kernel(n2, tau2, truncation_factor);
    const double fast_sum = fast.sum();
    const double slow_sum = slow.sum();
    const int length = std::max(fast.length(), slow.length());
    std::vector<double> taps(static_cast<std::size_t>(length), 0.0);
    for (int t = 0; t < length; ++t) {
        const double f = t < fast.length() ? fast[t] / fast_sum : 0.0;
        const double s = t < slow.length() ? slow[t] / slow_sum : 0.0;
        taps[static_cast<std::size_t>(t)] = f - s;
    }
    return TemporalKernel(std::move(taps));
}

TemporalKernel bandpass_kernel(const ModelConfig& config) {
    return bandpass_kernel(config.n1, config.tau1, config.n2, config.tau2, config.kernel_truncation_factor);
}

// ---------------------------------------------------------------------------

double inhibition_profile(double sigma2, double sigma3, double e, double rho, double dx, double dy) {
    return gaussian_density(sigma2, dx, dy) - e * gaussian_density(sigma3, dx, dy) - rho;
}

SpatialKernel inhibition_kernel(double sigma2, double sigma3, double e, double rho, double a, double b,
                                double radius_factor) {
    check_sigma(sigma2, "sigma2");
    check_sigma(sigma3, "sigma3");
    check_radius_factor(radius_factor);
    if (!(sigma3 > sigma2)) {
        throw ValidationError("inhibition kernel requires sigma3 > sigma2", "sigma3");
    }
    const int r = support_radius(sigma3, radius_factor);
    const int side = 2 * r + 1;
    std::vector<double> w(static_cast<std::size_t>(side * side));
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const double g = inhibition_profile(sigma2, sigma3, e, rho, dx, dy);
            w[static_cast<std::size_t>((dy + r) * side + (dx + r))] = a * std::max(g, 0.0) + b * std::min(g, 0.0);
        }
    }
    return SpatialKernel(r, std::move(w));
}

SpatialKernel inhibition_kernel(const ModelConfig& config) {
    return inhibition_kernel(config.sigma2, config.sigma3, config.e, config.rho, config.a, config.b,
                             config.spatial_kernel_radius_factor);
}

} // namespace flyvis
