#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oslo/grid.hpp"
#include "oslo/image.hpp"
#include "oslo/saliency.hpp"

namespace oslo {

/// Foreground mask; nonzero bytes are foreground.
class BinaryMap : public Grid<std::uint8_t> {
public:
    using Grid<std::uint8_t>::Grid;
    BinaryMap(Grid<std::uint8_t> g) : Grid<std::uint8_t>(std::move(g)) {}  // NOLINT

    bool test(int x, int y) const noexcept { return (*this)(x, y) != 0; }
    bool test(std::size_t i) const noexcept { return (*this)[i] != 0; }
    std::size_t count() const noexcept;
};

struct CannyParams {
    int blur_radius = 2;
    double low_ratio = 0.1;
    double high_ratio = 0.25;

    /// Throws InvalidArgument unless 0 < low < high < 1 and blur_radius >= 0.
    void validate() const;
};

/// Index of the histogram bin maximizing the between-class variance, where
/// class 0 is bins [0, t] and class 1 is bins (t, end). Compared exactly in
/// integer arithmetic; ties go to the lowest bin. A histogram with a single
/// occupied bin returns that bin.
std::size_t otsu_bin(std::span<const std::uint64_t> hist);

/// otsu_bin mapped to [0,1] as bin / (bins - 1).
double otsu_threshold(std::span<const std::uint64_t> hist);

/// Foreground where the 256-bin histogram bin of a value exceeds the Otsu bin.
BinaryMap otsu_binarize(std::span<const double> values, int width, int height);
BinaryMap otsu_binarize(const SaliencyMap& map);

/// Foreground where value >= level (inclusive).
BinaryMap threshold_at(const SaliencyMap& map, double level);

BinaryMap canny_edges(const IntensityImage& img, const CannyParams& params);

/// Background pixels not 4-connected to the image border become foreground.
BinaryMap fill_holes(const BinaryMap& map);

/// Pixelwise OR; throws InvalidArgument on dimension mismatch.
BinaryMap binary_or(const BinaryMap& a, const BinaryMap& b);
BinaryMap fuse_white(const BinaryMap& b1, const BinaryMap& b2);

/// Mean of each window x window neighbourhood clipped to the image, computed
/// from a fixed-point integral image.
Grid<double> local_means(const IntensityImage& img, int window);

/// Bradley-Roth adaptive threshold: foreground iff value > local_mean * (1 - sensitivity).
BinaryMap bradley_threshold(const IntensityImage& img, int window, double sensitivity);

/// Sobel gradient magnitude with replicated borders.
Grid<double> sobel_magnitude(const Grid<double>& img);

}  // namespace oslo
