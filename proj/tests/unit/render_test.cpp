#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "oslo/render.hpp"

namespace oslo {
namespace {

TEST(Render, Gray8Quantization) {
    const Grid<std::uint8_t> g = to_gray8(Grid<double>(3, 1, std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_EQ(g.data(), (std::vector<std::uint8_t>{0, 128, 255}));
    BinaryMap b(2, 1);
    b(1, 0) = 1;
    EXPECT_EQ(to_gray8(b).data(), (std::vector<std::uint8_t>{0, 255}));
    const SaliencyMap raw(2, 1, {0.0, 0.25}, false);
    EXPECT_EQ(to_gray8(raw).data(), (std::vector<std::uint8_t>{0, 255}));
}

TEST(Render, OverlayMarksBoundariesAndCentroids) {
    const IntensityImage green = IntensityImage::filled(20, 20, 0.5);
    const IntensityImage white = IntensityImage::filled(20, 20, 0.0);
    LabelMap labels(20, 20, 0);
    for (int y = 5; y < 15; ++y) {
        for (int x = 5; x < 15; ++x) {
            labels(x, y) = 1;
        }
    }
    Detection d;
    d.id = 1;
    d.nucleus_centroid = {10, 10};
    const std::vector<Detection> dets{d};
    const Grid<Rgb> o = render_overlay(green, white, labels, dets);
    EXPECT_EQ(o.width(), 20);
    EXPECT_EQ(o(0, 0), (Rgb{0.0, 0.5, 0.0}));
    EXPECT_EQ(o(5, 8), (Rgb{1.0, 0.0, 1.0}));
    EXPECT_EQ(o(10, 10), (Rgb{1.0, 1.0, 0.0}));
}

TEST(Render, ColorizedLabelsAreDistinct) {
    LabelMap labels(10, 1, 0);
    for (int x = 1; x < 10; ++x) {
        labels(x, 0) = x;
    }
    const Grid<Rgb> c = colorize_labels(labels);
    EXPECT_EQ(c(0, 0), (Rgb{}));
    std::set<std::tuple<double, double, double>> colors;
    for (int x = 1; x < 10; ++x) {
        colors.insert({c(x, 0).r, c(x, 0).g, c(x, 0).b});
    }
    EXPECT_EQ(colors.size(), 9u);
}

TEST(Render, CostPlotCanvas) {
    MinimaxResult r;
    CostCurve curve;
    curve.lambda = 0.5;
    curve.samples = {{0.0, 3.0, 1, 5, 2}, {0.5, 2.0, 1, 3, 2}, {1.0, kInfeasibleCost, 0, 0, 0}};
    r.curves = {curve};
    r.l_g = 0.5;
    const Grid<Rgb> plot = plot_cost_curves(r, 200, 100);
    EXPECT_EQ(plot.width(), 200);
    EXPECT_EQ(plot.height(), 100);
    bool red = false;
    for (const Rgb& p : plot.values()) {
        red = red || (p.r > 0.8 && p.g < 0.1 && p.b < 0.1);
    }
    EXPECT_TRUE(red);
}

}  // namespace
}  // namespace oslo
