#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "flyvis/pipeline.hpp"
#include "flyvis/stimulus.hpp"
#include "flyvis/stmd.hpp"
#include "support.hpp"

using namespace flyvis;
using namespace flyvis::testing;

namespace {

MedullaOutputs random_medulla(int w, int h, std::uint64_t seed, const ModelConfig& c) {
    MedullaOutputs m{random_frame(w, h, seed), random_frame(w, h, seed + 1), {}, {}};
    m.delayed_on.emplace(DelayKey{c.n3, c.tau3}, random_frame(w, h, seed + 2));
    m.delayed_on.emplace(DelayKey{c.n6, c.tau6}, random_frame(w, h, seed + 3));
    m.delayed_off.emplace(DelayKey{c.n4, c.tau4}, random_frame(w, h, seed + 4));
    m.delayed_off.emplace(DelayKey{c.n5, c.tau5}, random_frame(w, h, seed + 5));
    m.delayed_off.emplace(DelayKey{c.n6, c.tau6}, random_frame(w, h, seed + 6));
    return m;
}

MedullaOutputs mirror(const MedullaOutputs& m) {
    MedullaOutputs out{testing::mirror(m.tm3), testing::mirror(m.tm2), {}, {}};
    for (const auto& [k, f] : m.delayed_on) {
        out.delayed_on.emplace(k, testing::mirror(f));
    }
    for (const auto& [k, f] : m.delayed_off) {
        out.delayed_off.emplace(k, testing::mirror(f));
    }
    return out;
}

} // namespace

TEST_SUITE("stmd") {

TEST_CASE("partner offsets sit upstream of the preferred direction") {
    const DirectionSet dirs(8);
    const int expected[8][2] = {{-3, 0}, {-2, -2}, {0, -3}, {2, -2}, {3, 0}, {2, 2}, {0, 3}, {-2, 2}};
    for (int i = 0; i < 8; ++i) {
        const auto o = partner_offset(dirs.angle(i), 3.0);
        CHECK(o.dx == expected[i][0]);
        CHECK(o.dy == expected[i][1]);
    }
}

TEST_CASE("correlation matches the three-way product") {
    const ModelConfig c;
    const DirectionSet dirs(8);
    const auto m = random_medulla(12, 10, 31, c);
    const auto d = correlate(m, dirs, c);
    const auto& near = m.tm1({c.n4, c.tau4});
    const auto& mi1 = m.mi1({c.n3, c.tau3});
    const auto& far = m.tm1({c.n5, c.tau5});
    for (int k = 0; k < 8; ++k) {
        const auto o = partner_offset(dirs.angle(k), c.alpha1);
        for (int y = 0; y < 10; ++y) {
            for (int x = 0; x < 12; ++x) {
                const int px = x + o.dx;
                const int py = y + o.dy;
                const bool inside = px >= 0 && px < 12 && py >= 0 && py < 10;
                const double expected =
                    inside ? m.tm3(x, y) * (near(x, y) + mi1(px, py)) * far(px, py) : 0.0;
                CHECK(d.at(x, y, k) == doctest::Approx(expected).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("correlation of a zero medulla is zero and D is non-negative") {
    const ModelConfig c;
    auto m = random_medulla(8, 8, 2, c);
    const auto d = correlate(m, DirectionSet(8), c);
    for (double v : d.values()) {
        CHECK(v >= 0.0);
    }
    m.tm3 = Frame(8, 8);
    const auto z = correlate(m, DirectionSet(8), c);
    CHECK(max_abs(z.values()) == 0.0);
}

TEST_CASE("correlation needs its delay channels") {
    const ModelConfig c;
    auto m = random_medulla(4, 4, 3, c);
    m.delayed_off.erase(DelayKey{c.n5, c.tau5});
    CHECK_THROWS_AS(correlate(m, DirectionSet(8), c), ConfigurationError);
}

TEST_CASE("mirror symmetry of the correlation") {
    const ModelConfig c;
    const DirectionSet dirs(8);
    const auto m = random_medulla(13, 9, 77, c);
    const auto d = correlate(m, dirs, c);
    const auto dm = correlate(mirror(m), dirs, c);
    for (int k = 0; k < 8; ++k) {
        const int mk = (12 - k) % 8;
        for (int y = 0; y < 9; ++y) {
            for (int x = 0; x < 13; ++x) {
                CHECK(std::abs(d.at(x, y, k) - dm.at(12 - x, y, mk)) <= 1e-6);
            }
        }
    }
}

TEST_CASE("fast lateral inhibition matches brute force") {
    const ModelConfig c;
    const LateralInhibition inh(c);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto d = random_frame(16, 16, seed, 0.0, 1e3);
        CHECK(max_abs_diff(inh.apply(d), dense_convolution(d, inh.kernel())) < 1e-9);
    }
    ModelConfig odd = c;
    odd.rho = 0.002;
    odd.a = 2.0;
    odd.e = 0.8;
    const LateralInhibition inh2(odd);
    const auto d = random_frame(16, 16, 5);
    CHECK(max_abs_diff(inh2.apply(d), dense_convolution(d, inhibition_kernel(odd))) < 1e-9);
}

TEST_CASE("inhibition of a single pixel reproduces the kernel") {
    const ModelConfig c;
    Frame d(25, 25);
    d(12, 12) = 2.0;
    const auto e = LateralInhibition(c).apply(d);
    const auto k = inhibition_kernel(c);
    CHECK(e(12, 12) > 0.0);
    for (int dy = -9; dy <= 9; ++dy) {
        for (int dx = -9; dx <= 9; ++dx) {
            CHECK(e(12 + dx, 12 + dy) == doctest::Approx(2.0 * k.at(dx, dy)).epsilon(1e-9).scale(1e-12));
        }
    }
    CHECK(e(16, 12) < 0.0);
    CHECK(max_abs(LateralInhibition(c).apply(Frame(5, 5)).pixels()) == 0.0);
}

TEST_CASE("inhibition acts per channel") {
    const ModelConfig c;
    ResponseVolume d(10, 10, DirectionSet(8));
    d.at(5, 5, 3) = 1.0;
    const auto e = inhibit(d, c);
    for (int k = 0; k < 8; ++k) {
        if (k != 3) {
            CHECK(max_abs(e.channel(k)) == 0.0);
        }
    }
    CHECK(e.at(5, 5, 3) > 0.0);
}

TEST_CASE("detection: nothing above threshold") {
    ResponseVolume e(8, 8, DirectionSet(8), 1.0);
    CHECK(detect_stmd(e, 1.0).empty());
    CHECK(detect_stmd(e, 5.0).empty());
}

TEST_CASE("detection: single pixel reports its direction") {
    ResponseVolume e(8, 8, DirectionSet(8));
    e.at(3, 4, 1) = 10.0;
    e.at(3, 4, 2) = 9.0;
    const auto dets = detect_stmd(e, 5.0, 17);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].x == 3);
    CHECK(dets[0].y == 4);
    CHECK(dets[0].t == 17);
    CHECK(dets[0].direction_index == 1);
    CHECK(dets[0].direction == doctest::Approx(std::numbers::pi / 4));
    CHECK(dets[0].response == 10.0);
}

TEST_CASE("detection: separate blobs and connectivity") {
    ResponseVolume e(60, 20, DirectionSet(8));
    for (int dy = 0; dy < 3; ++dy) {
        for (int dx = 0; dx < 3; ++dx) {
            e.at(5 + dx, 5 + dy, 0) = 10.0 + dx + dy;
            e.at(45 + dx, 5 + dy, 4) = 20.0 - dx;
        }
    }
    e.at(8, 8, 0) = 1.0 + 10.0; // diagonal neighbour joins the first blob
    const auto dets = detect_stmd(e, 5.0);
    REQUIRE(dets.size() == 2);
    CHECK(dets[0].x == 7);
    CHECK(dets[0].y == 7);
    CHECK(dets[1].x == 45);
    CHECK(dets[1].direction_index == 4);
    CHECK(dets[1].response == 20.0);
}

TEST_CASE("detection: ties go to the lowest raster index and lowest channel") {
    ResponseVolume e(5, 5, DirectionSet(8));
    e.at(1, 2, 6) = 7.0;
    e.at(2, 2, 6) = 7.0;
    e.at(1, 2, 3) = 7.0;
    const auto dets = detect_stmd(e, 0.0);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].x == 1);
    CHECK(dets[0].y == 2);
    CHECK(dets[0].direction_index == 3);
}

TEST_CASE("detection count is monotone in beta for unimodal blobs") {
    ResponseVolume e(64, 48, DirectionSet(8));
    const double centres[][3] = {{10, 10, 300}, {30, 12, 180}, {50, 30, 90}, {15, 38, 240}, {40, 40, 400}};
    for (int k = 0; k < 8; ++k) {
        for (int y = 0; y < 48; ++y) {
            for (int x = 0; x < 64; ++x) {
                double v = -20.0;
                for (const auto& c : centres) {
                    const double r2 = (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]);
                    v = std::max(v, c[2] * (1.0 - 0.1 * k) * std::exp(-r2 / 8.0));
                }
                e.at(x, y, k) = v;
            }
        }
    }
    std::size_t prev = SIZE_MAX;
    for (double beta = 1.0; beta <= 420.0; beta += 2.5) {
        const auto n = detect_stmd(e, beta).size();
        CHECK(n <= prev);
        prev = n;
    }
    CHECK(detect_stmd(e, 1.0).size() == 5);
    CHECK(detect_stmd(e, -30.0).size() == 1);
    CHECK(detect_stmd(e, std::numeric_limits<double>::infinity()).empty());
}

TEST_CASE("a saddle splits into two components as beta rises") {
    // Component grouping counts regions, so a bimodal blob yields one
    // detection below its saddle and two above it.
    ResponseVolume e(9, 3, DirectionSet(8));
    const double row[9] = {0, 5, 10, 5, 4, 5, 10, 5, 0};
    for (int x = 0; x < 9; ++x) {
        e.at(x, 1, 0) = row[x];
    }
    CHECK(detect_stmd(e, 3.0).size() == 1);
    CHECK(detect_stmd(e, 4.5).size() == 2);
}

TEST_CASE("rightward target drives the zero-angle channel") {
    const ModelConfig c;
    StimulusSpec spec;
    spec.width = 100;
    spec.height = 30;
    spec.duration = warmup_frames(c) + 40;
    spec.background.kind = BackgroundKind::uniform;
    spec.background_velocity = 0.0;
    spec.target = TargetSpec{0.0, 5, 5, LinearTrajectory{10.0, 15.0, 250.0, 0.0}};
    const StimulusRenderer r(spec);
    Pipeline p(c);
    std::vector<double> sums(8, 0.0);
    for (int k = 0; k < spec.duration; ++k) {
        const auto out = p.push(r.render(k));
        if (k >= p.warmup_frames()) {
            for (int d = 0; d < 8; ++d) {
                sums[static_cast<std::size_t>(d)] += out.d.channel_sum(d);
            }
        }
    }
    CHECK(std::max_element(sums.begin(), sums.end()) - sums.begin() == 0);
}

}
