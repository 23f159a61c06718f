#include "oslo/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace oslo {

IntensityImage::IntensityImage(int width, int height, std::vector<double> pixels)
    : grid_(width, height, std::move(pixels)) {
    for (double v : grid_.values()) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InvalidArgument("intensity outside [0,1]: " + std::to_string(v));
        }
    }
}

IntensityImage IntensityImage::filled(int width, int height, double value) {
    return IntensityImage(width, height,
                          std::vector<double>(static_cast<std::size_t>(width) *
                                                  static_cast<std::size_t>(height),
                                              value));
}

double IntensityImage::mean() const noexcept {
    if (grid_.empty()) {
        return 0.0;
    }
    const auto v = grid_.values();
    const auto n = static_cast<double>(v.size());
    const double rough = std::accumulate(v.begin(), v.end(), 0.0) / n;
    // One refinement pass on the residuals; a constant image yields its value exactly.
    double residual = 0.0;
    for (double x : v) {
        residual += x - rough;
    }
    return rough + residual / n;
}

CombinedImage::CombinedImage(int width, int height, std::vector<Rgb> pixels)
    : grid_(width, height, std::move(pixels)) {
    for (const Rgb& p : grid_.values()) {
        for (double c : {p.r, p.g, p.b}) {
            if (!(c >= 0.0 && c <= 1.0)) {
                throw InvalidArgument("color component outside [0,1]");
            }
        }
    }
}

GaussianKernel::GaussianKernel(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty() || weights_.size() % 2 == 0) {
        throw InvalidArgument("kernel length must be odd");
    }
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) {
            throw InvalidArgument("kernel weights must be non-negative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidArgument("kernel weights must sum to 1");
    }
    const std::size_t n = weights_.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        if (weights_[i] != weights_[n - 1 - i]) {
            throw InvalidArgument("kernel must be symmetric");
        }
    }
}

GaussianKernel GaussianKernel::binomial(int radius) {
    if (radius < 0 || radius > 30) {
        throw InvalidArgument("binomial kernel radius must be in [0, 30]");
    }
    const int n = 2 * radius;
    std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
    row[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        for (int i = k; i > 0; --i) {
            row[static_cast<std::size_t>(i)] += row[static_cast<std::size_t>(i) - 1];
        }
    }
    // Pascal coefficients and powers of two are exact in binary floating point.
    const double scale = std::ldexp(1.0, -n);
    for (double& w : row) {
        w *= scale;
    }
    return GaussianKernel(std::move(row));
}

GaussianKernel GaussianKernel::sampled(double sigma) {
    if (!(sigma > 0.0)) {
        throw InvalidArgument("sigma must be positive");
    }
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    for (int i = -radius; i <= radius; ++i) {
        w[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
    }
    double sum = 0.0;
    for (int i = 0; i < radius; ++i) {
        sum += 2.0 * w[static_cast<std::size_t>(i)];
    }
    sum += w[static_cast<std::size_t>(radius)];
    for (double& v : w) {
        v /= sum;
    }
    // Re-symmetrize after division so mirrored weights are bitwise equal.
    for (int i = 0; i < radius; ++i) {
        w[static_cast<std::size_t>(2 * radius - i)] = w[static_cast<std::size_t>(i)];
    }
    return GaussianKernel(std::move(w));
}

std::pair<IntensityImage, IntensityImage> extract_channels(const CombinedImage& img) {
    if (img.empty()) {
        throw InvalidArgument("extract_channels: empty image");
    }
    std::vector<double> green(img.size());
    std::vector<double> white(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const Rgb& p = img[i];
        const double w = std::min({p.r, p.g, p.b});
        white[i] = std::clamp(w, 0.0, 1.0);
        green[i] = std::clamp(p.g - w, 0.0, 1.0);
    }
    return {IntensityImage(img.width(), img.height(), std::move(green)),
            IntensityImage(img.width(), img.height(), std::move(white))};
}

CombinedImage compose_channels(const IntensityImage& green, const IntensityImage& white) {
    if (green.width() != white.width() || green.height() != white.height()) {
        throw InvalidArgument("compose_channels: dimension mismatch");
    }
    std::vector<Rgb> px(green.size());
    for (std::size_t i = 0; i < px.size(); ++i) {
        const double w = white[i];
        px[i] = Rgb{w, std::min(1.0, green[i] + w), w};
    }
    return CombinedImage(green.width(), green.height(), std::move(px));
}

Grid<double> convolve_separable(const Grid<double>& src, std::span<const double> weights) {
    const int w = src.width();
    const int h = src.height();
    const int r = static_cast<int>(weights.size() / 2);
    Grid<double> tmp(w, h);
    Grid<double> out(w, h);
    if (src.empty()) {
        return out;
    }

    std::vector<double> line(static_cast<std::size_t>(std::max(w, h) + 2 * r));
    for (int y = 0; y < h; ++y) {
        for (int x = -r; x < w + r; ++x) {
            line[static_cast<std::size_t>(x + r)] = src(std::clamp(x, 0, w - 1), y);
        }
        for (int x = 0; x < w; ++x) {
            // Weighted deviations from the center sample keep flat runs exactly flat.
            const double center = line[static_cast<std::size_t>(x + r)];
            double acc = 0.0;
            for (int k = 0; k <= 2 * r; ++k) {
                acc += weights[static_cast<std::size_t>(k)] *
                       (line[static_cast<std::size_t>(x + k)] - center);
            }
            tmp(x, y) = center + acc;
        }
    }
    for (int x = 0; x < w; ++x) {
        for (int y = -r; y < h + r; ++y) {
            line[static_cast<std::size_t>(y + r)] = tmp(x, std::clamp(y, 0, h - 1));
        }
        for (int y = 0; y < h; ++y) {
            const double center = line[static_cast<std::size_t>(y + r)];
            double acc = 0.0;
            for (int k = 0; k <= 2 * r; ++k) {
                acc += weights[static_cast<std::size_t>(k)] *
                       (line[static_cast<std::size_t>(y + k)] - center);
            }
            out(x, y) = center + acc;
        }
    }
    return out;
}

IntensityImage gaussian_blur(const IntensityImage& img, const GaussianKernel& kernel) {
    Grid<double> out = convolve_separable(img.grid(), kernel.weights());
    // A convex combination can only leave [0,1] by rounding.
    std::vector<double> px(out.data());
    for (double& v : px) {
        v = std::clamp(v, 0.0, 1.0);
    }
    return IntensityImage(img.width(), img.height(), std::move(px));
}

std::size_t histogram_bin(double v, std::size_t bins) noexcept {
    const double scaled = std::floor(std::clamp(v, 0.0, 1.0) * static_cast<double>(bins - 1) + 0.5);
    return std::min(static_cast<std::size_t>(scaled), bins - 1);
}

std::vector<std::uint64_t> histogram(std::span<const double> values, std::size_t bins) {
    if (bins < 2) {
        throw InvalidArgument("histogram needs at least 2 bins");
    }
    std::vector<std::uint64_t> counts(bins, 0);
    for (double v : values) {
        ++counts[histogram_bin(v, bins)];
    }
    return counts;
}

std::vector<std::uint64_t> histogram(const IntensityImage& img, std::size_t bins) {
    return histogram(img.pixels(), bins);
}

}  // namespace oslo
