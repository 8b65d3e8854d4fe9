#include "doctest.h"
#include "flyvis/convolution.hpp"
#include "support.hpp"

using namespace flyvis;
using namespace flyvis::testing;

TEST_SUITE("convolution") {

TEST_CASE("separable matches dense on random frames") {
    const auto k = gaussian2d(1.0, 3.0);
    const auto g = gaussian1d(1.0, 3.0);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto f = random_frame(16, 16, seed);
        CHECK(max_abs_diff(convolve_separable(f, g, g), dense_convolution(f, k)) < 1e-9);
    }
}

TEST_CASE("separable with distinct axis kernels") {
    const std::vector<double> kx{0.1, 0.5, 0.4};
    const std::vector<double> ky{0.2, 0.3, 0.1, 0.3, 0.1};
    std::vector<double> w(static_cast<std::size_t>(5 * 5), 0.0);
    for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            w[static_cast<std::size_t>((dy + 2) * 5 + (dx + 2))] =
                kx[static_cast<std::size_t>(dx + 1)] * ky[static_cast<std::size_t>(dy + 2)];
        }
    }
    const SpatialKernel dense(2, w);
    const auto f = random_frame(9, 7, 3);
    CHECK(max_abs_diff(convolve_separable(f, kx, ky), dense_convolution(f, dense)) < 1e-9);
}

TEST_CASE("dense convolution matches brute force") {
    const auto k = inhibition_kernel(ModelConfig{});
    const auto f = random_frame(16, 16, 9);
    CHECK(max_abs_diff(convolve2d(f, k), dense_convolution(f, k)) < 1e-9);
}

TEST_CASE("convolution orientation: out(x) = sum k(d) in(x - d)") {
    Frame impulse(7, 7);
    impulse(3, 3) = 1.0;
    std::vector<double> w(9, 0.0);
    w[static_cast<std::size_t>(1 * 3 + 2)] = 1.0; // k(1, 0)
    const auto out = convolve2d(impulse, SpatialKernel(1, w));
    CHECK(out(4, 3) == 1.0);
    CHECK(out(2, 3) == 0.0);
}

TEST_CASE("clamp-to-edge keeps constants constant") {
    const Frame f(5, 4, 42.0);
    const auto k = gaussian2d(1.0, 3.0);
    const auto out = convolve2d(f, k);
    for (double v : out.pixels()) {
        CHECK(v == doctest::Approx(42.0).epsilon(1e-12));
    }
}

TEST_CASE("streaming temporal convolution matches whole-signal convolution") {
    const ModelConfig c;
    const std::vector<TemporalKernel> kernels{bandpass_kernel(c), gamma_kernel(3, 15.0, 5.0),
                                              gamma_kernel(8, 40.0, 5.0), TemporalKernel({0.5, -0.25, 1.0})};
    const auto seq = random_sequence(16, 16, 64, 21);
    TemporalConvolver conv(kernels);
    std::vector<std::vector<Frame>> ref;
    for (const auto& k : kernels) {
        ref.push_back(whole_signal_convolution(seq, k));
    }
    for (std::size_t t = 0; t < seq.size(); ++t) {
        const auto outs = conv.push(seq[t]);
        REQUIRE(outs.size() == kernels.size());
        for (std::size_t i = 0; i < kernels.size(); ++i) {
            CHECK(max_abs_diff(outs[i], ref[i][t]) < 1e-9);
        }
    }
    CHECK(conv.frames_seen() == 64);
    CHECK(conv.history_capacity() == 200);
}

TEST_CASE("temporal convolver state") {
    TemporalConvolver conv({TemporalKernel({1.0, 1.0})});
    const Frame a(2, 2, 1.0);
    CHECK(conv.push(a)[0](0, 0) == 1.0);
    CHECK(conv.push(a)[0](0, 0) == 2.0);
    CHECK_THROWS_AS(conv.push(Frame(3, 2)), StreamError);
    conv.reset();
    CHECK(conv.frames_seen() == 0);
    CHECK(conv.push(Frame(3, 2, 1.0))[0](0, 0) == 1.0);
}

TEST_CASE("impulse response reproduces the kernel") {
    const auto k = gamma_kernel(5, 15.0, 5.0);
    TemporalConvolver conv({k});
    for (int t = 0; t < k.length() + 5; ++t) {
        const Frame in(1, 1, t == 0 ? 1.0 : 0.0);
        const double out = conv.push(in)[0](0, 0);
        CHECK(out == doctest::Approx(t < k.length() ? k[t] : 0.0).epsilon(1e-15));
    }
}

}
