#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "flyvis/io.hpp"
#include "support.hpp"

using namespace flyvis;
using namespace flyvis::testing;

namespace {

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / ("flyvis_io_" + name)) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

StimulusSpec tiny_spec() {
    StimulusSpec spec;
    spec.width = 30;
    spec.height = 20;
    spec.duration = 6;
    spec.background_velocity = 250.0;
    spec.target = TargetSpec{0.0, 3, 3, LinearTrajectory{5.0, 10.0, 1000.0, 0.0}};
    return spec;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("PGM round trip of integer frames") {
    const TempDir dir("pgm");
    Frame f(7, 5);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 7; ++x) {
            f(x, y) = (x * 37 + y * 11) % 256;
        }
    }
    write_pgm(dir / "a.pgm", f);
    CHECK(read_pgm(dir / "a.pgm") == f);
}

TEST_CASE("PGM write rounds and clamps") {
    const TempDir dir("pgm_clamp");
    Frame f(3, 1);
    f(0, 0) = -4.0;
    f(1, 0) = 12.6;
    f(2, 0) = 400.0;
    write_pgm(dir / "b.pgm", f);
    const auto g = read_pgm(dir / "b.pgm");
    CHECK(g(0, 0) == 0.0);
    CHECK(g(1, 0) == 13.0);
    CHECK(g(2, 0) == 255.0);
}

TEST_CASE("PGM read errors") {
    const TempDir dir("pgm_bad");
    CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), IoError);
    write_text_file(dir / "ascii.pgm", "P2\n1 1\n255\n0\n");
    CHECK_THROWS_AS(read_pgm(dir / "ascii.pgm"), IoError);
    write_text_file(dir / "short.pgm", "P5\n4 4\n255\nab");
    CHECK_THROWS_AS(read_pgm(dir / "short.pgm"), IoError);
}

TEST_CASE("manifest round trip and errors") {
    SequenceManifest m;
    m.width = 10;
    m.height = 4;
    m.sample_rate = 500.0;
    m.frames = {"f0.pgm", "f1.pgm"};
    const auto back = SequenceManifest::parse(m.serialize());
    CHECK(back.width == 10);
    CHECK(back.sample_rate == 500.0);
    CHECK(back.frames == m.frames);
    CHECK_THROWS_AS(SequenceManifest::parse("width = 1\nheight = 1\nspeed = 3\n"), ParseError);
    CHECK_THROWS_AS(SequenceManifest::parse("width = 0\nheight = 1\n"), ValidationError);
    CHECK_THROWS_AS(SequenceManifest::parse("width = 2\nheight = 1\nframe_count = 3\nframe = a.pgm\n"),
                    ValidationError);
}

TEST_CASE("sequence directory round trip") {
    const TempDir dir("seq");
    const StimulusRenderer r(tiny_spec());
    write_sequence(dir.path.string(), r);
    const SequenceReader reader(dir.path.string());
    REQUIRE(reader.frame_count() == 6);
    CHECK(reader.manifest().width == 30);
    for (int k = 0; k < 6; ++k) {
        auto expected = r.render(k);
        for (auto& v : expected.pixels()) {
            v = std::clamp(std::round(v), 0.0, 255.0);
        }
        CHECK(reader.read(k) == expected);
    }
    REQUIRE(reader.has_ground_truth());
    const auto truth = reader.ground_truth();
    const auto expected = r.track();
    REQUIRE(truth.size() == expected.size());
    for (std::size_t k = 0; k < truth.size(); ++k) {
        CHECK(truth.samples[k] == expected.samples[k]);
    }
    CHECK(truth.target_width == 3);
    CHECK(load_stimulus_spec(dir / std::string(kStimulusFile)) == tiny_spec());
}

TEST_CASE("missing frame names its index") {
    const TempDir dir("seq_missing");
    write_sequence(dir.path.string(), StimulusRenderer(tiny_spec()));
    const SequenceReader reader(dir.path.string());
    std::filesystem::remove(dir / reader.manifest().frames[3]);
    CHECK_NOTHROW(reader.read(2));
    try {
        reader.read(3);
        FAIL("expected an io error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("frame 3") != std::string::npos);
    }
    CHECK_THROWS_AS(reader.read(6), ValidationError);
    CHECK_THROWS_AS(SequenceReader(dir / "nowhere"), IoError);
}

TEST_CASE("ground truth CSV round trip") {
    GroundTruthTrack track;
    for (int k = 0; k < 5; ++k) {
        track.samples.push_back({k, 0.1 * k + 1.0 / 3.0, 2.0, 3.141592653589793, k != 2});
    }
    const TempDir dir("gt");
    std::ostringstream out;
    write_ground_truth_csv(out, track);
    write_text_file(dir / "gt.csv", out.str());
    const auto back = read_ground_truth_csv(dir / "gt.csv", 5);
    for (int k = 0; k < 5; ++k) {
        CHECK(back.at(k).present == track.at(k).present);
        if (track.at(k).present) {
            CHECK(back.at(k) == track.at(k));
        }
    }
    write_text_file(dir / "bad.csv", "t,x,y,theta\n1,2,3\n");
    CHECK_THROWS_AS(read_ground_truth_csv(dir / "bad.csv", 5), ParseError);
}

TEST_CASE("detections CSV and number formatting") {
    std::ostringstream out;
    write_detections_header(out);
    write_detections_csv(out, {Detection{3, 4, 5, 0.0, 0, 151.5}});
    CHECK(out.str() == "t,x,y,theta,response\n3,4,5,0,151.5\n");
    CHECK(format_number(0.1) == "0.1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("unwritable output directory") {
    const TempDir dir("unwritable");
    write_text_file(dir / "file", "x");
    CHECK_THROWS_AS(ensure_directory(dir / "file"), IoError);
    CHECK_THROWS_AS(write_text_file(dir / "no/such/dir/f.txt", "x"), IoError);
}

}
