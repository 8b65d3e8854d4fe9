#include "flyvis/io.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace fs = std::filesystem;

namespace flyvis {

std::string format_number(double v) { return detail::format_double(v); }

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create directory '" + dir + "': " + (ec ? ec.message() : "not a directory"));
    }
    const fs::path probe = fs::path(dir) / ".flyvis_write_probe";
    {
        std::ofstream out(probe);
        if (!out) {
            throw IoError("directory '" + dir + "' is not writable");
        }
    }
    fs::remove(probe, ec);
}

// ---------------------------------------------------------------------------
// PGM

void write_pgm(const std::string& path, const Frame& frame) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
    std::vector<unsigned char> bytes(frame.size());
    const auto px = frame.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        bytes[i] = static_cast<unsigned char>(std::clamp(std::lround(px[i]), 0L, 255L));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
    std::string token;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') {
                c = in.get();
            }
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    return token;
}

} // namespace

Frame read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    if (pgm_token(in) != "P5") {
        throw IoError("'" + path + "' is not a binary PGM (P5)");
    }
    int w = 0;
    int h = 0;
    int maxval = 0;
    try {
        w = std::stoi(pgm_token(in));
        h = std::stoi(pgm_token(in));
        maxval = std::stoi(pgm_token(in));
    } catch (const std::exception&) {
        throw IoError("'" + path + "' has a malformed PGM header");
    }
    if (w <= 0 || h <= 0 || maxval != 255) {
        throw IoError("'" + path + "' must be a P5 PGM with positive size and maxval 255");
    }
    std::vector<unsigned char> bytes(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
        throw IoError("'" + path + "' is truncated");
    }
    std::vector<double> data(bytes.begin(), bytes.end());
    return Frame(w, h, std::move(data));
}

// ---------------------------------------------------------------------------
// Manifest

std::string SequenceManifest::serialize() const {
    std::string out;
    out += "width = " + std::to_string(width) + "\n";
    out += "height = " + std::to_string(height) + "\n";
    out += "sample_rate = " + detail::format_double(sample_rate) + "\n";
    out += "frame_count = " + std::to_string(frames.size()) + "\n";
    for (const auto& f : frames) {
        out += "frame = " + f + "\n";
    }
    return out;
}

SequenceManifest SequenceManifest::parse(std::string_view text) {
    SequenceManifest m;
    long declared = -1;
    detail::for_each_key_value(text, [&](std::string_view key, std::string_view value, int line) {
        if (key == "width") {
            m.width = detail::parse_int(value, line);
        } else if (key == "height") {
            m.height = detail::parse_int(value, line);
        } else if (key == "sample_rate") {
            m.sample_rate = detail::parse_double(value, line);
        } else if (key == "frame_count") {
            declared = detail::parse_int(value, line);
        } else if (key == "frame") {
            m.frames.emplace_back(value);
        } else {
            throw ParseError("unknown manifest key '" + std::string(key) + "'", line);
        }
    });
    if (m.width <= 0 || m.height <= 0) {
        throw ValidationError("manifest must declare positive width and height", "width");
    }
    if (!(m.sample_rate > 0.0)) {
        throw ValidationError("manifest sample_rate must be positive", "sample_rate");
    }
    if (declared >= 0 && declared != static_cast<long>(m.frames.size())) {
        throw ValidationError("manifest declares " + std::to_string(declared) + " frames but lists " +
                                  std::to_string(m.frames.size()),
                              "frame_count");
    }
    return m;
}

// ---------------------------------------------------------------------------
// Sequences

namespace {

std::string frame_name(int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%05d.pgm", k);
    return buf;
}

std::string join(const std::string& dir, std::string_view name) { return (fs::path(dir) / name).string(); }

} // namespace

void write_sequence(const std::string& dir, const StimulusRenderer& renderer) {
    ensure_directory(dir);
    const auto& spec = renderer.spec();
    SequenceManifest manifest{spec.width, spec.height, spec.sample_rate, {}};
    for (int k = 0; k < renderer.frame_count(); ++k) {
        const auto name = frame_name(k);
        write_pgm(join(dir, name), renderer.render(k));
        manifest.frames.push_back(name);
    }
    write_text_file(join(dir, kManifestFile), manifest.serialize());
    write_text_file(join(dir, kStimulusFile), serialize_stimulus_spec(spec));

    std::ostringstream truth;
    write_ground_truth_csv(truth, renderer.track());
    write_text_file(join(dir, kGroundTruthFile), truth.str());
}

SequenceReader::SequenceReader(std::string dir) : dir_(std::move(dir)) {
    const auto path = join(dir_, kManifestFile);
    if (!fs::exists(path)) {
        throw IoError("sequence directory '" + dir_ + "' has no " + std::string(kManifestFile));
    }
    manifest_ = SequenceManifest::parse(detail::read_text_file(path));
    if (manifest_.frames.empty()) {
        throw ValidationError("sequence '" + dir_ + "' contains no frames", "frames");
    }
}

Frame SequenceReader::read(int k) const {
    if (k < 0 || k >= frame_count()) {
        throw ValidationError("frame index " + std::to_string(k) + " out of range", "frame");
    }
    const auto path = join(dir_, manifest_.frames[static_cast<std::size_t>(k)]);
    if (!fs::exists(path)) {
        throw IoError("frame " + std::to_string(k) + " missing: '" + path + "'");
    }
    Frame f = read_pgm(path);
    if (f.width() != manifest_.width || f.height() != manifest_.height) {
        throw ValidationError("frame " + std::to_string(k) + " is " + std::to_string(f.width()) + "x" +
                                  std::to_string(f.height()) + ", manifest says " + std::to_string(manifest_.width) +
                                  "x" + std::to_string(manifest_.height),
                              "frame");
    }
    return f;
}

bool SequenceReader::has_ground_truth() const { return fs::exists(join(dir_, kGroundTruthFile)); }

GroundTruthTrack SequenceReader::ground_truth() const {
    auto track = read_ground_truth_csv(join(dir_, kGroundTruthFile), frame_count());
    const auto spec_path = join(dir_, kStimulusFile);
    if (fs::exists(spec_path)) {
        const auto spec = load_stimulus_spec(spec_path);
        if (spec.target) {
            track.target_width = spec.target->width;
            track.target_height = spec.target->height;
        }
    }
    return track;
}

// ---------------------------------------------------------------------------
// CSV

void write_ground_truth_csv(std::ostream& out, const GroundTruthTrack& track) {
    out << "t,x,y,theta\n";
    for (const auto& s : track.samples) {
        if (!s.present) {
            continue;
        }
        out << s.t << ',' << format_number(s.x) << ',' << format_number(s.y) << ',' << format_number(s.direction)
            << '\n';
    }
}

GroundTruthTrack read_ground_truth_csv(const std::string& path, int frame_count) {
    const auto text = detail::read_text_file(path);
    GroundTruthTrack track;
    track.samples.resize(static_cast<std::size_t>(frame_count));
    for (int k = 0; k < frame_count; ++k) {
        track.samples[static_cast<std::size_t>(k)].t = k;
    }
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = detail::trim(line);
        if (row.empty() || (line_no == 1 && row.substr(0, 1) == "t")) {
            continue;
        }
        std::vector<std::string_view> cols;
        std::size_t pos = 0;
        while (pos <= row.size()) {
            const auto comma = row.find(',', pos);
            cols.push_back(row.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            if (comma == std::string_view::npos) {
                break;
            }
            pos = comma + 1;
        }
        if (cols.size() != 4) {
            throw ParseError("ground truth rows need 4 columns (t,x,y,theta) in '" + path + "'", line_no);
        }
        const int t = detail::parse_int(cols[0], line_no);
        if (t < 0 || t >= frame_count) {
            continue;
        }
        auto& s = track.samples[static_cast<std::size_t>(t)];
        s.x = detail::parse_double(cols[1], line_no);
        s.y = detail::parse_double(cols[2], line_no);
        s.direction = detail::parse_double(cols[3], line_no);
        s.present = true;
    }
    return track;
}

void write_detections_header(std::ostream& out) { out << "t,x,y,theta,response\n"; }

void write_detections_csv(std::ostream& out, const std::vector<Detection>& detections) {
    for (const auto& d : detections) {
        out << d.t << ',' << d.x << ',' << d.y << ',' << format_number(d.direction) << ','
            << format_number(d.response) << '\n';
    }
}

} // namespace flyvis
