#include "oslo/saliency.hpp"

#include <algorithm>
#include <cmath>

namespace oslo {

SaliencyMap::SaliencyMap(int width, int height, std::vector<double> values, bool normalized,
                         double feature_mean)
    : grid_(width, height, std::move(values)), normalized_(normalized),
      feature_mean_(feature_mean) {
    for (double v : grid_.values()) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw InvalidArgument("saliency values must be finite and non-negative");
        }
    }
}

double SaliencyMap::max_value() const noexcept {
    const auto v = grid_.values();
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

IntensityImage SaliencyMap::as_image() const {
    if (!normalized_) {
        throw InvalidArgument("saliency map must be normalized before use as an image");
    }
    return IntensityImage(width(), height(), grid_.data());
}

SaliencyMap ft_saliency(const IntensityImage& img, const GaussianKernel& kernel) {
    if (img.empty()) {
        throw InvalidArgument("ft_saliency: empty image");
    }
    const double mu = img.mean();
    const Grid<double> blurred = convolve_separable(img.grid(), kernel.weights());
    std::vector<double> values(img.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = std::abs(mu - blurred[i]);
    }
    return SaliencyMap(img.width(), img.height(), std::move(values), false, mu);
}

SaliencyMap normalize(const SaliencyMap& map) {
    const double peak = map.max_value();
    if (peak == 0.0) {
        return SaliencyMap(map.width(), map.height(), map.grid().data(), true, map.feature_mean());
    }
    std::vector<double> values(map.grid().data());
    for (double& v : values) {
        v = std::min(1.0, v / peak);
    }
    return SaliencyMap(map.width(), map.height(), std::move(values), true, map.feature_mean());
}

}  // namespace oslo
