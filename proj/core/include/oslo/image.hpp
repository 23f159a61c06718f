#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "oslo/grid.hpp"

namespace oslo {

/// Single-channel image with intensities normalized to [0,1].
/// Immutable after construction; the constructor rejects out-of-range values.
class IntensityImage {
public:
    IntensityImage() = default;
    IntensityImage(int width, int height, std::vector<double> pixels);

    static IntensityImage filled(int width, int height, double value);

    int width() const noexcept { return grid_.width(); }
    int height() const noexcept { return grid_.height(); }
    std::size_t size() const noexcept { return grid_.size(); }
    bool empty() const noexcept { return grid_.empty(); }

    double operator()(int x, int y) const noexcept { return grid_(x, y); }
    double operator[](std::size_t i) const noexcept { return grid_[i]; }
    std::span<const double> pixels() const noexcept { return grid_.values(); }
    const Grid<double>& grid() const noexcept { return grid_; }

    double mean() const noexcept;

    friend bool operator==(const IntensityImage&, const IntensityImage&) = default;

private:
    Grid<double> grid_;
};

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Pseudo-colored composite of the two fluorescence channels.
class CombinedImage {
public:
    CombinedImage() = default;
    CombinedImage(int width, int height, std::vector<Rgb> pixels);

    int width() const noexcept { return grid_.width(); }
    int height() const noexcept { return grid_.height(); }
    std::size_t size() const noexcept { return grid_.size(); }
    bool empty() const noexcept { return grid_.empty(); }

    const Rgb& operator()(int x, int y) const noexcept { return grid_(x, y); }
    const Rgb& operator[](std::size_t i) const noexcept { return grid_[i]; }
    std::span<const Rgb> pixels() const noexcept { return grid_.values(); }

    friend bool operator==(const CombinedImage&, const CombinedImage&) = default;

private:
    Grid<Rgb> grid_;
};

/// Normalized 1D smoothing kernel applied separably.
///
/// The frequency-tuned saliency derivation telescopes a bank of band-pass
/// difference-of-Gaussian filters with standard-deviation ratio rho over N
/// stages into a single DoG whose wide lobe tends to the image mean. Only the
/// narrow lobe survives as a runtime parameter: this kernel. rho, N and the
/// wide sigma are not configurable.
class GaussianKernel {
public:
    /// Validates: odd length, non-negative, sums to 1 within 1e-9, symmetric.
    explicit GaussianKernel(std::vector<double> weights);

    /// Binomial approximation of a Gaussian: row 2*radius of Pascal's triangle
    /// normalized by 4^radius. radius 2 gives (1,4,6,4,1)/16.
    static GaussianKernel binomial(int radius);

    /// Sampled Gaussian of the given sigma, truncated at ceil(3 sigma).
    static GaussianKernel sampled(double sigma);

    int radius() const noexcept { return static_cast<int>(weights_.size() / 2); }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    std::vector<double> weights_;
};

/// Splits a green/white pseudo-colored composite: white = min(r,g,b),
/// green = g - white.
std::pair<IntensityImage, IntensityImage> extract_channels(const CombinedImage& img);

/// Inverse of extract_channels for exact green/white mixtures.
CombinedImage compose_channels(const IntensityImage& green, const IntensityImage& white);

/// Separable convolution (rows then columns), borders replicated.
Grid<double> convolve_separable(const Grid<double>& src, std::span<const double> weights);

IntensityImage gaussian_blur(const IntensityImage& img, const GaussianKernel& kernel);

/// Value v lands in bin floor(v * (bins - 1) + 0.5).
std::size_t histogram_bin(double v, std::size_t bins) noexcept;
std::vector<std::uint64_t> histogram(std::span<const double> values, std::size_t bins);
std::vector<std::uint64_t> histogram(const IntensityImage& img, std::size_t bins);

}  // namespace oslo
