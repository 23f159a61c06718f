#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oslo/config.hpp"
#include "oslo/pipeline.hpp"

namespace oslo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< nothing succeeded (evaluate)
inline constexpr int kExitIo = 2;
inline constexpr int kExitPipeline = 3;

/// Either `combined` or both `green` and `white`.
struct InputPaths {
    std::optional<std::filesystem::path> combined;
    std::optional<std::filesystem::path> green;
    std::optional<std::filesystem::path> white;
};

struct DetectOptions {
    InputPaths input;
    PipelineConfig config;
    std::filesystem::path out_dir;
    Method method = Method::Oslo;
    bool timings = false;      ///< per-stage timings in summary.json (not reproducible)
    bool diagnostics = false;  ///< cost table and curve in diagnostics.json, plot in cost_curves.png
    bool regions_csv = false;  ///< per-region statistics in regions.csv
    bool saliency_png = false;  ///< saliency maps as 8-bit PNGs
};

struct EvaluateOptions {
    std::filesystem::path manifest;
    std::vector<Method> methods{Method::Oslo};
    PipelineConfig config;
    std::filesystem::path out_dir;
    std::size_t workers = 1;
};

struct GenerateOptions {
    std::string suite;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir;
    std::size_t limit = 0;  ///< 0 = whole suite
};

struct DumpOptions {
    InputPaths input;
    PipelineConfig config;
    std::filesystem::path out_dir;
};

/// Writes labels.png, overlay.png, detections.csv and summary.json. On a
/// pipeline error writes error.json and returns kExitPipeline; on I/O errors
/// returns kExitIo (error.json is written when the output dir is usable).
int cmd_detect(const DetectOptions& options);

/// Writes report.csv, report.json and table.txt.
int cmd_evaluate(const EvaluateOptions& options);

/// Writes a synthetic suite and its manifest.
int cmd_generate(const GenerateOptions& options);

/// Writes intermediate maps: s_w, s_g, b_w, b_g, b_c, markers, cost curves.
int cmd_dump_stages(const DumpOptions& options);

/// Loads the green and white channels from either input form.
std::pair<IntensityImage, IntensityImage> load_inputs(const InputPaths& input);

}  // namespace oslo::cli
