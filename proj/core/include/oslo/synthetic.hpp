#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oslo/evaluation.hpp"
#include "oslo/image.hpp"

namespace oslo {

struct RangeD {
    double lo = 0.0;
    double hi = 0.0;
};

struct RangeI {
    int lo = 0;
    int hi = 0;
};

/// Parameters of one synthetic two-channel image.
///
/// Cells are soft-edged disks (cell bodies, green) with random-walk process
/// strokes and a smaller soft disk (nucleus, white) at the body center.
/// Bodies never overlap. Close pairs are placed rim to rim with one process
/// from each cell aimed at the other so their strokes cross. Distractor nuclei
/// are white disks without a body of their own, either clear of every cell or
/// lying on a process stroke outside all bodies.
struct SynthConfig {
    std::uint64_t seed = 1;
    int width = 1024;
    int height = 1024;
    int cell_count = 20;
    RangeD nucleus_radius{5.0, 7.0};
    RangeD body_radius{12.0, 16.0};
    RangeI process_count{3, 5};
    RangeD process_length{15.0, 35.0};
    double min_separation = 30.0;
    double noise_sigma = 0.02;
    double background_level = 0.05;
    int distractor_nuclei = 0;
    /// How many of the distractor nuclei sit on a process stroke (the rest lie
    /// clear of every cell and its processes).
    int distractors_on_processes = 0;

    RangeD body_amplitude{0.8, 0.9};
    double process_amplitude = 0.7;  ///< relative to the cell's body amplitude
    double nucleus_amplitude = 0.8;
    double low_contrast_fraction = 0.0;  ///< share of cells with dimmed nuclei
    double low_contrast_scale = 0.6;
    int close_pairs = 0;  ///< pairs of cells among cell_count with touching processes
    RangeD close_pair_gap{4.0, 10.0};  ///< rim-to-rim distance within a close pair
    double min_body_gap = 4.0;
    /// Width of the linear intensity ramp centered on the body radius (px).
    /// Wide ramps give dome-shaped bodies whose thresholded area shrinks
    /// smoothly with the level.
    double body_edge_width = 24.0;
    int retry_budget = 20000;

    /// Throws InvalidArgument for inconsistent ranges or counts.
    void validate() const;
};

struct SynthCell {
    PointD center;
    double nucleus_radius = 0.0;
    double body_radius = 0.0;
    double body_amplitude = 0.0;
    double nucleus_amplitude = 0.0;
    int partner = -1;  ///< index of the close-pair partner, or -1
};

struct SynthSample {
    IntensityImage green;
    IntensityImage white;
    GroundTruth truth;
    std::vector<SynthCell> cells;
    std::vector<PointD> distractors;
    /// Cell pairs whose rasterized process strokes share at least one pixel.
    std::size_t overlapping_process_pairs = 0;
};

/// Deterministic in `config` (including seed). Random numbers come from
/// std::mt19937_64; uniforms use the top 53 bits and normals use Box-Muller,
/// so samples are identical across standard libraries.
/// Throws InvalidArgument when placement fails within the retry budget.
SynthSample generate(const SynthConfig& config, std::string image_id = "synthetic");

/// Same as generate() without noise; used to check ground-truth consistency.
SynthSample generate_noiseless(SynthConfig config, std::string image_id = "synthetic");

enum class SuiteKind { Easy, Hard };

std::optional<SuiteKind> parse_suite(std::string_view name) noexcept;
std::string_view to_string(SuiteKind kind) noexcept;

inline constexpr std::size_t kSuiteSize = 50;

/// Per-image configurations of a named suite. Image i uses seed
/// splitmix64(seed + i) so each image can be regenerated on its own.
std::vector<SynthConfig> suite_configs(SuiteKind kind, std::uint64_t seed);
std::string suite_image_id(SuiteKind kind, std::size_t index);

/// Materializes the whole suite in memory (about 16 MB per 1024x1024 image).
std::vector<SynthSample> generate_suite(SuiteKind kind, std::uint64_t seed);

/// Writes `<id>_green.png`, `<id>_white.png` (16-bit), `<id>_truth.csv` and
/// `manifest.csv` under `dir`. `limit` caps the number of images (0 = all).
std::vector<ManifestEntry> write_suite(const std::filesystem::path& dir, SuiteKind kind,
                                       std::uint64_t seed, std::size_t limit = 0);

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace oslo
