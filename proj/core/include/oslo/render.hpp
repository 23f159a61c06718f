#pragma once

#include <cstdint>
#include <span>

#include "oslo/binarize.hpp"
#include "oslo/grid.hpp"
#include "oslo/image.hpp"
#include "oslo/level_select.hpp"
#include "oslo/saliency.hpp"
#include "oslo/segment.hpp"

namespace oslo {

/// Quantizes [0,1] values to 8 bits (round to nearest).
Grid<std::uint8_t> to_gray8(const Grid<double>& values);
Grid<std::uint8_t> to_gray8(const IntensityImage& img);
/// Saliency is scaled by its maximum when not already normalized.
Grid<std::uint8_t> to_gray8(const SaliencyMap& map);
/// Foreground 255, background 0.
Grid<std::uint8_t> to_gray8(const BinaryMap& map);

/// Pseudo-colored composite (green channel in green, white in all three)
/// with label boundaries in magenta and a yellow cross at each nucleus centroid.
Grid<Rgb> render_overlay(const IntensityImage& green, const IntensityImage& white,
                         const LabelMap& labels, std::span<const Detection> detections);

/// Distinct deterministic color per label; background black.
Grid<Rgb> colorize_labels(const LabelMap& labels);

/// Line plot of E(L) for each curve (the selected one drawn last in red)
/// on a white canvas; infeasible levels are left as gaps.
Grid<Rgb> plot_cost_curves(const MinimaxResult& result, int width = 640, int height = 400);

}  // namespace oslo
