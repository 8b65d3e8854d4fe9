#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "flyvis/core.hpp"
#include "flyvis/detection.hpp"
#include "flyvis/stimulus.hpp"

namespace flyvis {

// Binary 8-bit PGM (P5, maxval 255). Values are rounded and clamped on write.
void write_pgm(const std::string& path, const Frame& frame);
Frame read_pgm(const std::string& path);

/// Text manifest describing a frame sequence on disk.
struct SequenceManifest {
    int width = 0;
    int height = 0;
    double sample_rate = 1000.0;
    std::vector<std::string> frames; // file names relative to the sequence directory

    std::string serialize() const;
    static SequenceManifest parse(std::string_view text);
};

inline constexpr std::string_view kManifestFile = "manifest.txt";
inline constexpr std::string_view kGroundTruthFile = "ground_truth.csv";
inline constexpr std::string_view kStimulusFile = "stimulus.txt";

/// Writes PGM frames, the manifest, the ground truth CSV and a snapshot of
/// the stimulus spec into `dir` (created if missing).
void write_sequence(const std::string& dir, const StimulusRenderer& renderer);

/// Streams frames of a sequence directory in order.
class SequenceReader {
public:
    explicit SequenceReader(std::string dir);

    const SequenceManifest& manifest() const noexcept { return manifest_; }
    int frame_count() const noexcept { return static_cast<int>(manifest_.frames.size()); }
    const std::string& dir() const noexcept { return dir_; }

    /// Reads frame k. Missing files and size mismatches name the frame index.
    Frame read(int k) const;

    bool has_ground_truth() const;
    GroundTruthTrack ground_truth() const;

private:
    std::string dir_;
    SequenceManifest manifest_;
};

// CSV writers. Floating values use the shortest exact representation.
void write_ground_truth_csv(std::ostream& out, const GroundTruthTrack& track);
GroundTruthTrack read_ground_truth_csv(const std::string& path, int frame_count);
void write_detections_header(std::ostream& out);
void write_detections_csv(std::ostream& out, const std::vector<Detection>& detections);

/// Writes `content` to `path`, throwing IoError with the path on failure.
void write_text_file(const std::string& path, std::string_view content);

/// Creates `dir` (and parents); throws IoError naming it if it is not writable.
void ensure_directory(const std::string& dir);

std::string format_number(double v);

} // namespace flyvis
