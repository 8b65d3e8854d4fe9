// flyvis: generate stimuli, run the detector, sweep ROC curves and tuning curves.
//
// Exit codes: 0 success, 1 validation or usage error, 2 I/O error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "flyvis/core.hpp"
#include "flyvis/eval.hpp"
#include "flyvis/io.hpp"
#include "flyvis/pipeline.hpp"
#include "flyvis/stimulus.hpp"
#include "flyvis/tuning.hpp"

namespace fs = std::filesystem;
using namespace flyvis;

namespace {

std::string path_in(const std::string& dir, std::string_view name) { return (fs::path(dir) / name).string(); }

ModelConfig config_from(const std::string& path) { return path.empty() ? ModelConfig{} : load_config(path); }

std::string read_if_exists(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return {};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Run manifest: everything needed to repeat the run. Timing lives elsewhere
// because it is not reproducible.
std::string run_manifest(std::string_view command, const std::string& args, const ModelConfig& config,
                         std::string_view stimulus, std::string_view outputs) {
    std::string out;
    out += "# flyvis run manifest\n";
    out += "command = " + std::string(command) + "\n";
    out += args;
    out += "outputs = " + std::string(outputs) + "\n";
    out += "\n[config]\n" + serialize_config(config);
    if (!stimulus.empty()) {
        out += "\n[stimulus]\n" + std::string(stimulus);
    }
    return out;
}

std::string timing_report(const Pipeline& pipeline, double total_seconds) {
    std::string out;
    const int frames = pipeline.frames_processed();
    out += "frames = " + std::to_string(frames) + "\n";
    out += "total_seconds = " + format_number(total_seconds) + "\n";
    out += "frames_per_second = " + format_number(total_seconds > 0 ? frames / total_seconds : 0.0) + "\n";
    for (int s = 0; s < static_cast<int>(Stage::count); ++s) {
        const double sec = pipeline.stage_seconds()[static_cast<std::size_t>(s)];
        out += std::string(to_string(static_cast<Stage>(s))) + "_seconds = " + format_number(sec) + "\n";
        out += std::string(to_string(static_cast<Stage>(s))) +
               "_frames_per_second = " + format_number(sec > 0 ? frames / sec : 0.0) + "\n";
    }
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string spec;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int cmd_generate(const GenerateArgs& a) {
    StimulusSpec spec = a.spec.empty() ? StimulusSpec{} : load_stimulus_spec(a.spec);
    if (a.seed) {
        spec.background.seed = *a.seed;
    }
    const StimulusRenderer renderer(spec);
    write_sequence(a.out, renderer);
    std::cout << "wrote " << renderer.frame_count() << " frames (" << spec.width << "x" << spec.height << ") to "
              << a.out << "\n";
    return 0;
}

struct DetectArgs {
    std::string sequence;
    std::string config;
    std::string mode = "tsdn";
    std::optional<double> beta;
    std::string out;
};

int cmd_detect(const DetectArgs& a) {
    ModelConfig config = config_from(a.config);
    if (a.beta) {
        config.beta = *a.beta;
        config.validate();
    }
    const DetectionMode mode = parse_mode(a.mode);
    const SequenceReader reader(a.sequence);
    ensure_directory(a.out);

    Pipeline pipeline(config);
    std::ostringstream csv;
    write_detections_header(csv);
    std::vector<std::vector<Detection>> per_frame;
    long total = 0;
    const auto start = std::chrono::steady_clock::now();
    for (int k = 0; k < reader.frame_count(); ++k) {
        const auto frame = pipeline.push(reader.read(k));
        auto detections = extract_detections(frame.output(mode), config.beta, k);
        write_detections_csv(csv, detections);
        total += static_cast<long>(detections.size());
        per_frame.push_back(std::move(detections));
    }
    const double elapsed = seconds_since(start);

    const int warmup = pipeline.warmup_frames();
    std::string summary;
    summary += "mode = " + std::string(to_string(mode)) + "\n";
    summary += "beta = " + format_number(config.beta) + "\n";
    summary += "frames = " + std::to_string(reader.frame_count()) + "\n";
    summary += "warmup_frames = " + std::to_string(warmup) + "\n";
    summary += "detections = " + std::to_string(total) + "\n";
    if (reader.has_ground_truth()) {
        const auto report = match_and_score(per_frame, reader.ground_truth(), 5.0, warmup);
        summary += "frames_evaluated = " + std::to_string(report.frames_evaluated) + "\n";
        summary += "true_detections = " + std::to_string(report.true_detections) + "\n";
        summary += "false_detections = " + std::to_string(report.false_detections) + "\n";
        summary += "detection_rate = " + format_number(report.detection_rate) + "\n";
        summary += "false_alarm_rate = " + format_number(report.false_alarm_rate) + "\n";
    }

    write_text_file(path_in(a.out, "detections.csv"), csv.str());
    write_text_file(path_in(a.out, "summary.txt"), summary);
    write_text_file(path_in(a.out, "timing.txt"), timing_report(pipeline, elapsed));
    write_text_file(path_in(a.out, "run_manifest.txt"),
                    run_manifest("detect",
                                 "sequence = " + a.sequence + "\nmode = " + std::string(to_string(mode)) + "\n",
                                 config, read_if_exists(path_in(a.sequence, kStimulusFile)),
                                 "detections.csv summary.txt timing.txt"));
    std::cout << summary;
    return 0;
}

struct RocArgs {
    std::string sequence;
    std::string config;
    std::string grid = "0:400:10";
    std::string out;
};

std::string roc_csv(const std::vector<RocPoint>& points) {
    std::string out = "beta,fa,dr\n";
    for (const auto& p : points) {
        out += format_number(p.beta) + "," + format_number(p.false_alarm_rate) + "," +
               format_number(p.detection_rate) + "\n";
    }
    return out;
}

int cmd_roc(const RocArgs& a) {
    const ModelConfig config = config_from(a.config);
    const auto grid = parse_grid(a.grid);
    const SequenceReader reader(a.sequence);
    if (!reader.has_ground_truth()) {
        throw IoError("sequence '" + a.sequence + "' has no " + std::string(kGroundTruthFile));
    }
    const auto truth = reader.ground_truth();
    ensure_directory(a.out);

    Pipeline pipeline(config);
    const int warmup = pipeline.warmup_frames();
    RocAccumulator stmd(grid, 5.0, warmup);
    RocAccumulator tsdn(grid, 5.0, warmup);
    const auto start = std::chrono::steady_clock::now();
    for (int k = 0; k < reader.frame_count(); ++k) {
        const auto frame = pipeline.push(reader.read(k));
        stmd.add(k, frame.e, truth.at(k));
        tsdn.add(k, frame.t_volume, truth.at(k));
    }
    const double elapsed = seconds_since(start);

    write_text_file(path_in(a.out, "roc_stmd.csv"), roc_csv(stmd.points()));
    write_text_file(path_in(a.out, "roc_tsdn.csv"), roc_csv(tsdn.points()));
    write_text_file(path_in(a.out, "timing.txt"), timing_report(pipeline, elapsed));
    write_text_file(path_in(a.out, "run_manifest.txt"),
                    run_manifest("roc", "sequence = " + a.sequence + "\nbeta_grid = " + a.grid + "\n", config,
                                 read_if_exists(path_in(a.sequence, kStimulusFile)),
                                 "roc_stmd.csv roc_tsdn.csv timing.txt"));
    std::cout << "wrote " << grid.size() << " thresholds per mode to " << a.out << "\n";
    return 0;
}

struct TuneArgs {
    std::string attribute;
    std::string grid;
    std::string config;
    std::string out;
};

int cmd_tune(const TuneArgs& a) {
    const ModelConfig config = config_from(a.config);
    const auto attribute = parse_tuning_attribute(a.attribute);
    const auto grid = parse_grid(a.grid);
    ensure_directory(a.out);
    const auto base = tuning_base_spec();
    const auto curve = tuning_experiment(attribute, grid, base, config);

    std::string csv = "value,stmd,lptc\n";
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        csv += format_number(curve.values[i]) + "," + format_number(curve.stmd[i]) + "," +
               format_number(curve.lptc[i]) + "\n";
    }
    const std::string name = "tuning_" + std::string(to_string(attribute)) + ".csv";
    write_text_file(path_in(a.out, name), csv);
    write_text_file(path_in(a.out, "run_manifest.txt"),
                    run_manifest("tune",
                                 "attribute = " + std::string(to_string(attribute)) + "\ngrid = " + a.grid + "\n",
                                 config, serialize_stimulus_spec(base), name));
    std::cout << csv;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bio-inspired small target motion detection"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Render a stimulus sequence to PGM frames");
    generate->add_option("spec", gen.spec, "Stimulus spec file (defaults if omitted)");
    generate->add_option("--seed", gen.seed, "Background seed override");
    generate->add_option("--out", gen.out, "Output directory")->required();

    DetectArgs det;
    auto* detect = app.add_subcommand("detect", "Run the model on a sequence and write detections");
    detect->add_option("sequence", det.sequence, "Sequence directory")->required();
    detect->add_option("--config", det.config, "Model config file");
    detect->add_option("--mode", det.mode, "stmd or tsdn")->check(CLI::IsMember({"stmd", "tsdn"}));
    detect->add_option("--beta", det.beta, "Detection threshold override");
    detect->add_option("--out", det.out, "Output directory")->required();

    RocArgs roc;
    auto* roc_cmd = app.add_subcommand("roc", "Sweep detection thresholds for both modes");
    roc_cmd->add_option("sequence", roc.sequence, "Sequence directory")->required();
    roc_cmd->add_option("--config", roc.config, "Model config file");
    roc_cmd->add_option("--beta-grid", roc.grid, "a:b:step or comma list, ascending");
    roc_cmd->add_option("--out", roc.out, "Output directory")->required();

    TuneArgs tune;
    auto* tune_cmd = app.add_subcommand("tune", "Measure a tuning curve on a clutter-free scene");
    tune_cmd->add_option("--attribute", tune.attribute, "weber_contrast, velocity, width or height")->required();
    tune_cmd->add_option("--grid", tune.grid, "a:b:step or comma list")->required();
    tune_cmd->add_option("--config", tune.config, "Model config file");
    tune_cmd->add_option("--out", tune.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*generate) {
            return cmd_generate(gen);
        }
        if (*detect) {
            return cmd_detect(det);
        }
        if (*roc_cmd) {
            return cmd_roc(roc);
        }
        return cmd_tune(tune);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << (e.field().empty() ? "" : " (" + e.field() + ")") << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
