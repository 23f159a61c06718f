#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oslo/error.hpp"
#include "oslo/evaluation.hpp"
#include "oslo/pipeline.hpp"

namespace oslo {
namespace {

struct Cell {
    double x;
    double y;
    double body_r;
    double nucleus_r;
    double amp;
};

// Dome-shaped green bodies with a bright white nucleus at each center.
std::pair<IntensityImage, IntensityImage> draw_cells(int w, int h, const std::vector<Cell>& cells) {
    std::vector<double> g(static_cast<std::size_t>(w * h), 0.05);
    std::vector<double> wt(static_cast<std::size_t>(w * h), 0.05);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y * w + x);
            for (const Cell& c : cells) {
                const double d = std::hypot(x - c.x, y - c.y);
                g[i] = std::max(g[i], c.amp * std::clamp((c.body_r + 12.0 - d) / 24.0, 0.0, 1.0));
                wt[i] = std::max(wt[i], 0.8 * std::clamp((c.nucleus_r + 1.0 - d) / 2.0, 0.0, 1.0));
            }
        }
    }
    return {IntensityImage(w, h, g), IntensityImage(w, h, wt)};
}

TEST(Pipeline, BlankInputCountsZero) {
    const IntensityImage blank = IntensityImage::filled(64, 48, 0.0);
    const SegmentationResult r = run_pipeline(blank, blank, PipelineConfig{});
    EXPECT_EQ(r.count, 0u);
    EXPECT_TRUE(r.detections.empty());
    EXPECT_EQ(r.label_map, LabelMap(64, 48, 0));
}

TEST(Pipeline, CountsWellSeparatedCells) {
    const std::vector<Cell> cells{{40, 40, 14, 6, 0.85},
                                  {160, 45, 13, 5, 0.8},
                                  {100, 110, 15, 6, 0.9},
                                  {40, 180, 14, 6, 0.82},
                                  {170, 170, 12, 5, 0.88}};
    const auto [green, white] = draw_cells(220, 220, cells);
    const PipelineRun run = run_detailed(green, white, PipelineConfig{});
    ASSERT_EQ(run.result.count, cells.size());
    ASSERT_TRUE(run.minimax.has_value());
    std::vector<PointD> truth;
    for (const Cell& c : cells) {
        truth.push_back({c.x, c.y});
    }
    const MatchCounts m = match_detections(detection_centroids(run.result), truth, 3.0);
    EXPECT_EQ(m.tp, cells.size());
    // Every detection owns a segment containing its nucleus centroid.
    for (const Detection& d : run.result.detections) {
        const int x = static_cast<int>(std::lround(d.nucleus_centroid.x));
        const int y = static_cast<int>(std::lround(d.nucleus_centroid.y));
        EXPECT_EQ(run.result.label_map(x, y), d.id);
    }
}

TEST(Pipeline, SeparatesTouchingPair) {
    const std::vector<Cell> cells{{60, 64, 14, 6, 0.85}, {92, 64, 14, 6, 0.85}};
    const auto [green, white] = draw_cells(150, 128, cells);
    const SegmentationResult r = run_pipeline(green, white, PipelineConfig{});
    ASSERT_EQ(r.count, 2u);
    std::set<std::int32_t> labels(r.label_map.values().begin(), r.label_map.values().end());
    labels.erase(0);
    EXPECT_EQ(labels, (std::set<std::int32_t>{1, 2}));
    EXPECT_NE(r.label_map(60, 64), r.label_map(92, 64));
}

TEST(Pipeline, Deterministic) {
    const std::vector<Cell> cells{{40, 40, 14, 6, 0.85}, {110, 70, 13, 5, 0.8}};
    const auto [green, white] = draw_cells(150, 120, cells);
    const PipelineRun a = run_detailed(green, white, PipelineConfig{});
    const PipelineRun b = run_detailed(green, white, PipelineConfig{});
    EXPECT_EQ(a.result.label_map, b.result.label_map);
    EXPECT_EQ(a.minimax->lambda_star, b.minimax->lambda_star);
    EXPECT_EQ(a.minimax->l_g, b.minimax->l_g);
}

TEST(Pipeline, BaselinesShareTheCountingTail) {
    const std::vector<Cell> cells{{40, 40, 14, 6, 0.85}, {110, 70, 13, 5, 0.8}};
    const auto [green, white] = draw_cells(150, 120, cells);
    const FrontEnd front = compute_front_end(green, white, PipelineConfig{});
    for (const Method m : {Method::Otsu, Method::Canny, Method::Bradley}) {
        const PipelineRun run = run_method(front, m, PipelineConfig{});
        EXPECT_FALSE(run.minimax.has_value());
        EXPECT_LE(run.result.count, 2u) << to_string(m);
        EXPECT_EQ(run.result.label_map.width(), 150);
    }
}

TEST(Pipeline, FixedWeightOverride) {
    const std::vector<Cell> cells{{40, 40, 14, 6, 0.85}, {110, 70, 13, 5, 0.8}};
    const auto [green, white] = draw_cells(150, 120, cells);
    PipelineConfig config;
    config.fixed_lambda = 0.3;
    const PipelineRun run = run_detailed(green, white, config);
    ASSERT_TRUE(run.minimax.has_value());
    EXPECT_EQ(run.minimax->lambda_star, 0.3);
    EXPECT_EQ(run.minimax->curves.size(), 1u);
}

TEST(Pipeline, RejectsMismatchedChannels) {
    EXPECT_THROW(run_pipeline(IntensityImage::filled(4, 4, 0.1), IntensityImage::filled(5, 4, 0.1),
                              PipelineConfig{}),
                 InvalidArgument);
}

TEST(Method, NamesRoundTrip) {
    for (const Method m : {Method::Oslo, Method::Otsu, Method::Canny, Method::Bradley}) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_EQ(parse_method("otsu_baseline"), Method::Otsu);
    EXPECT_FALSE(parse_method("sobel").has_value());
}

}  // namespace
}  // namespace oslo
