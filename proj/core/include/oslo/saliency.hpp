#pragma once

#include <span>
#include <vector>

#include "oslo/grid.hpp"
#include "oslo/image.hpp"

namespace oslo {

/// Full-resolution frequency-tuned saliency. Values are non-negative; once
/// normalized the maximum is 1 unless the map is identically zero.
class SaliencyMap {
public:
    SaliencyMap() = default;
    SaliencyMap(int width, int height, std::vector<double> values, bool normalized,
                double feature_mean = 0.0);

    int width() const noexcept { return grid_.width(); }
    int height() const noexcept { return grid_.height(); }
    std::size_t size() const noexcept { return grid_.size(); }
    bool normalized() const noexcept { return normalized_; }
    /// Mean intensity of the source image the map was computed from.
    double feature_mean() const noexcept { return feature_mean_; }

    double operator()(int x, int y) const noexcept { return grid_(x, y); }
    double operator[](std::size_t i) const noexcept { return grid_[i]; }
    std::span<const double> values() const noexcept { return grid_.values(); }
    const Grid<double>& grid() const noexcept { return grid_; }
    double max_value() const noexcept;

    /// View as an intensity image; requires a normalized map.
    IntensityImage as_image() const;

    friend bool operator==(const SaliencyMap&, const SaliencyMap&) = default;

private:
    Grid<double> grid_;
    bool normalized_ = false;
    double feature_mean_ = 0.0;
};

/// value(x,y) = |mean(img) - blur(img)(x,y)|. With one scalar feature per
/// channel the L2 norm of the feature difference is an absolute value.
SaliencyMap ft_saliency(const IntensityImage& img, const GaussianKernel& kernel);

/// Divides by the maximum. An all-zero map is returned unchanged, flagged normalized.
SaliencyMap normalize(const SaliencyMap& map);

}  // namespace oslo
