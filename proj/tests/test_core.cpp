#include <cmath>
#include <numbers>

#include "doctest.h"
#include "flyvis/core.hpp"

using namespace flyvis;

TEST_SUITE("core") {

TEST_CASE("frame construction and access") {
    Frame f(3, 2, 7.0);
    CHECK(f.width() == 3);
    CHECK(f.height() == 2);
    CHECK(f.size() == 6);
    f(2, 1) = 9.0;
    CHECK(f.pixels()[5] == 9.0);
    CHECK_THROWS_AS(Frame(0, 4), ValidationError);
    CHECK_THROWS_AS(Frame(2, 2, std::vector<double>(3)), ValidationError);
}

TEST_CASE("input range check") {
    Frame f(2, 2, 255.0);
    CHECK_NOTHROW(f.check_input_range());
    f(0, 0) = -0.5;
    CHECK_THROWS_AS(f.check_input_range(), ValidationError);
    f(0, 0) = 255.5;
    CHECK_THROWS_AS(f.check_input_range(), ValidationError);
}

TEST_CASE("image sequence validation") {
    ImageSequence s{{Frame(2, 2), Frame(2, 2)}, 1000.0};
    CHECK_NOTHROW(s.validate());
    s.frames.emplace_back(3, 2);
    CHECK_THROWS_AS(s.validate(), ValidationError);
    ImageSequence bad{{Frame(2, 2)}, 0.0};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("direction set") {
    const DirectionSet d(8);
    REQUIRE(d.count() == 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(d.angle(i) == doctest::Approx(2 * std::numbers::pi * i / 8));
    }
    CHECK(d.index_of(std::numbers::pi) == 4);
    CHECK(d.index_of(-std::numbers::pi / 2) == 6);
    CHECK(d.index_of(2 * std::numbers::pi) == 0);
    CHECK_FALSE(d.index_of(0.3).has_value());
    CHECK(d.nearest_index(0.3) == 0);
    CHECK(d.nearest_index(6.2) == 0);
    CHECK(d.nearest_index(2.5) == 3);
    CHECK_THROWS_AS(DirectionSet(1), ValidationError);
}

TEST_CASE("wrap angle") {
    CHECK(wrap_angle(-std::numbers::pi / 2) == doctest::Approx(3 * std::numbers::pi / 2));
    CHECK(wrap_angle(5 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
    const double w = wrap_angle(2 * std::numbers::pi);
    CHECK(w >= 0.0);
    CHECK(w < 2 * std::numbers::pi);
}

TEST_CASE("default parameters") {
    const ModelConfig c;
    CHECK(c.sigma1 == 1.0);
    CHECK(c.n1 == 2);
    CHECK(c.tau1 == 3.0);
    CHECK(c.n2 == 6);
    CHECK(c.tau2 == 9.0);
    CHECK(c.n3 == 3);
    CHECK(c.tau3 == 15.0);
    CHECK(c.n4 == 5);
    CHECK(c.tau4 == 25.0);
    CHECK(c.n5 == 8);
    CHECK(c.tau5 == 40.0);
    CHECK(c.n6 == 5);
    CHECK(c.tau6 == 15.0);
    CHECK(c.alpha1 == 3.0);
    CHECK(c.a == 1.0);
    CHECK(c.b == 3.0);
    CHECK(c.sigma2 == 1.5);
    CHECK(c.sigma3 == 3.0);
    CHECK(c.e == 1.0);
    CHECK(c.rho == 0.0);
    CHECK(c.alpha2 == 3.5);
    CHECK(c.beta == 150.0);
    CHECK(c.direction_count == 8);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("config validation names the field") {
    const auto field_of = [](ModelConfig c) {
        try {
            c.validate();
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string();
    };
    ModelConfig c;
    c.sigma1 = 0.0;
    CHECK(field_of(c) == "sigma1");
    c = {};
    c.tau4 = -1.0;
    CHECK(field_of(c) == "tau4");
    c = {};
    c.n5 = 0;
    CHECK(field_of(c) == "n5");
    c = {};
    c.sigma3 = 1.0;
    CHECK(field_of(c) == "sigma3");
    c = {};
    c.alpha2 = -0.1;
    CHECK(field_of(c) == "alpha2");
    c = {};
    c.direction_count = 1;
    CHECK(field_of(c) == "direction_count");
    c = {};
    c.beta = std::nan("");
    CHECK(field_of(c) == "beta");
}

TEST_CASE("config parsing") {
    const auto c = parse_config("# comment\nalpha2 = 0\n  beta=42.5  # trailing\n\nn3 = 4\n");
    CHECK(c.alpha2 == 0.0);
    CHECK(c.beta == 42.5);
    CHECK(c.n3 == 4);
    CHECK(c.tau1 == 3.0);

    try {
        parse_config("beta = 1\nbogus = 2\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_config("beta 1\n"), ParseError);
    CHECK_THROWS_AS(parse_config("n1 = 2.5\n"), ParseError);
    CHECK_THROWS_AS(parse_config("beta = abc\n"), ParseError);
    CHECK_THROWS_AS(parse_config("sigma1 = 0\n"), ValidationError);
    CHECK_THROWS_AS(load_config("/nonexistent/flyvis.cfg"), IoError);
}

TEST_CASE("config round trip is exact") {
    ModelConfig c;
    c.beta = 0.1 + 0.2;
    c.sigma2 = 1.0 / 3.0;
    c.alpha2 = 1e-17;
    c.n4 = 7;
    CHECK(parse_config(serialize_config(c)) == c);
    CHECK(parse_config(serialize_config(ModelConfig{})) == ModelConfig{});
}

TEST_CASE("response volume layout") {
    ResponseVolume v(4, 3, DirectionSet(8));
    CHECK(v.channel_count() == 8);
    CHECK(v.values().size() == 4 * 3 * 8);
    v.at(1, 2, 5) = 3.0;
    CHECK(v.channel(5)[2 * 4 + 1] == 3.0);
    CHECK(v.channel_sum(5) == 3.0);
    CHECK(v.channel_sum(4) == 0.0);
    Frame f(4, 3, 1.0);
    v.set_channel(2, f);
    CHECK(v.channel_frame(2) == f);
    CHECK_THROWS_AS(v.set_channel(0, Frame(3, 3)), ValidationError);
    CHECK(v.same_layout(ResponseVolume(4, 3, DirectionSet(8))));
    CHECK_FALSE(v.same_layout(ResponseVolume(4, 3, DirectionSet(4))));
}

}
