#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "oslo/binarize.hpp"

namespace oslo {

enum class SurfaceMode { Distance, Gradient };

/// Tunables for detection and evaluation.
///
/// Config files are flat `key = value` lines; `#` starts a comment, blank
/// lines are ignored, unknown keys are rejected. Keys:
///   blur_radius, canny_blur_radius, canny_low, canny_high, level_grid,
///   lambda_grid, min_area, surface (distance|gradient), match_radius,
///   lambda (fixes the weight instead of searching), bradley_window
///   (odd, 0 = width/8), bradley_sensitivity.
struct PipelineConfig {
    int blur_radius = 2;
    CannyParams canny{};
    std::size_t level_grid = 256;
    std::size_t lambda_grid = 101;
    std::size_t min_area = 5;
    SurfaceMode surface = SurfaceMode::Distance;
    double match_radius = 15.0;
    std::optional<double> fixed_lambda;
    int bradley_window = 0;
    double bradley_sensitivity = 0.15;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;

    /// Applies one `key = value` assignment.
    void set(std::string_view key, std::string_view value);
};

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string to_config_text(const PipelineConfig& config);

std::string_view to_string(SurfaceMode mode) noexcept;

}  // namespace oslo
