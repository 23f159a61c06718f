#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oslo/binarize.hpp"
#include "oslo/config.hpp"
#include "oslo/image.hpp"
#include "oslo/level_select.hpp"
#include "oslo/regions.hpp"
#include "oslo/saliency.hpp"
#include "oslo/segment.hpp"

namespace oslo {

/// How the green-channel foreground is obtained. Oslo searches the saliency
/// level; the others binarize the green saliency map directly and share the
/// rest of the pipeline.
enum class Method { Oslo, Otsu, Canny, Bradley };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

/// Stages shared by every method: saliency maps and the white-channel foreground.
struct FrontEnd {
    SaliencyMap s_w;
    SaliencyMap s_g;
    BinaryMap b_w1;  ///< Otsu on the white saliency
    BinaryMap b_w2;  ///< hole-filled Canny edges of the white saliency
    BinaryMap b_w;
    RegionSet white_set;  ///< components of b_w at or above min_area
};

struct StageTiming {
    std::string stage;
    double milliseconds = 0.0;
};

struct PipelineRun {
    Method method = Method::Oslo;
    SegmentationResult result;
    BinaryMap b_g;
    BinaryMap b_c;
    RegionSet green_set;
    RegionPairing pairing;
    std::optional<RatioTable> ratios;
    std::optional<MinimaxResult> minimax;
    std::optional<double> bound;
    RegionSet markers;
    Grid<double> surface;
    std::vector<StageTiming> timings;
};

FrontEnd compute_front_end(const IntensityImage& green, const IntensityImage& white,
                           const PipelineConfig& config, std::vector<StageTiming>* timings = nullptr);

PipelineRun run_method(const FrontEnd& front, Method method, const PipelineConfig& config);

/// Full detection run. An image without white-channel foreground yields an
/// empty result; PipelineError propagates from level selection.
PipelineRun run_detailed(const IntensityImage& green, const IntensityImage& white,
                         const PipelineConfig& config, Method method = Method::Oslo);

SegmentationResult run_pipeline(const IntensityImage& green, const IntensityImage& white,
                                const PipelineConfig& config);

}  // namespace oslo
