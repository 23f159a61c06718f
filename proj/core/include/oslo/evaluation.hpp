#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oslo/config.hpp"
#include "oslo/grid.hpp"
#include "oslo/pipeline.hpp"

namespace oslo {

struct TruthCell {
    PointD centroid;
    std::optional<std::int32_t> mask_label;
};

struct GroundTruth {
    std::string image_id;
    std::vector<TruthCell> cells;

    std::vector<PointD> centroids() const;
};

struct MatchCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

/// Greedy one-to-one matching: candidate pairs within `radius` are taken in
/// ascending distance (ties by prediction index, then truth index) when both
/// ends are still free.
MatchCounts match_detections(std::span<const PointD> pred, std::span<const PointD> truth,
                             double radius);
MatchCounts match_detections(std::span<const PointD> pred, const GroundTruth& truth, double radius);

/// 0 when the denominator is 0.
double precision_of(const MatchCounts& m) noexcept;
double recall_of(const MatchCounts& m) noexcept;
/// Harmonic mean 2pr/(p+r); 0 when p + r = 0.
double f1_score(double precision, double recall);

struct ManifestEntry {
    std::string image_id;
    std::filesystem::path green_path;
    std::filesystem::path white_path;
    std::filesystem::path truth_path;
};

/// CSV `image_id,green_path,white_path,truth_path`; relative paths resolve
/// against the manifest's directory.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
std::string manifest_csv(std::span<const ManifestEntry> entries);

/// CSV `image_id,x,y` (rows for other image ids are skipped) or a 16-bit
/// label-mask PNG whose labels' centroids become the cells.
GroundTruth load_ground_truth(const std::filesystem::path& path, const std::string& image_id);
std::string ground_truth_csv(const GroundTruth& truth);

struct EvalRow {
    std::string image_id;
    Method method = Method::Oslo;
    MatchCounts counts;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::string error;  ///< non-empty when the image failed for this method

    bool ok() const noexcept { return error.empty(); }
};

struct MethodAverage {
    Method method = Method::Oslo;
    std::size_t images = 0;
    std::size_t failures = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> per_image;  ///< sorted by image id, then method order
    std::vector<MethodAverage> averages;
};

EvalRow score_detections(const std::string& image_id, Method method,
                         std::span<const PointD> predictions, const GroundTruth& truth,
                         double radius);

/// Averages of successful rows per method, in the order given.
std::vector<MethodAverage> average_by_method(std::span<const EvalRow> rows,
                                             std::span<const Method> methods);

/// Runs every method on every manifest entry with `workers` threads. Image or
/// truth read failures and pipeline errors are recorded per row.
EvalReport evaluate_dataset(std::span<const ManifestEntry> manifest,
                            std::span<const Method> methods, const PipelineConfig& config,
                            std::size_t workers = 1);

std::vector<PointD> detection_centroids(const SegmentationResult& result);

std::string report_csv(const EvalReport& report);
std::string report_json(const EvalReport& report);
/// Plain-text table: one row per image, one F1 column per method, and a final average row.
std::string report_table(const EvalReport& report, std::span<const Method> methods);

}  // namespace oslo
