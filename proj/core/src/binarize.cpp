#include "oslo/binarize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace oslo {

namespace {

__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

constexpr std::size_t kOtsuBins = 256;
constexpr double kFixedPointScale = 1099511627776.0;  // 2^40

// between-class variance up to a positive constant: D^2 / (n0 * n1) with
// D = N * S0 - n0 * S, held as quotient and remainder for exact comparison.
struct ExactRatio {
    u128 quotient = 0;
    u128 remainder = 0;
    u128 denominator = 1;
};

bool greater(const ExactRatio& a, const ExactRatio& b) {
    if (a.quotient != b.quotient) {
        return a.quotient > b.quotient;
    }
    return a.remainder * b.denominator > b.remainder * a.denominator;
}

struct Gradients {
    Grid<double> gx;
    Grid<double> gy;
    Grid<double> magnitude;
};

Gradients sobel(const Grid<double>& img) {
    const int w = img.width();
    const int h = img.height();
    Gradients g{Grid<double>(w, h), Grid<double>(w, h), Grid<double>(w, h)};
    auto at = [&](int x, int y) {
        return img(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1)) -
                              (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
            const double gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1)) -
                              (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
            g.gx(x, y) = gx;
            g.gy(x, y) = gy;
            g.magnitude(x, y) = std::sqrt(gx * gx + gy * gy);
        }
    }
    return g;
}

}  // namespace

std::size_t BinaryMap::count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(data().begin(), data().end(), [](std::uint8_t b) { return b != 0; }));
}

void CannyParams::validate() const {
    if (blur_radius < 0) {
        throw InvalidArgument("canny blur radius must be non-negative");
    }
    if (!(0.0 < low_ratio && low_ratio < high_ratio && high_ratio < 1.0)) {
        throw InvalidArgument("canny ratios must satisfy 0 < low < high < 1");
    }
}

std::size_t otsu_bin(std::span<const std::uint64_t> hist) {
    if (hist.empty()) {
        throw InvalidArgument("otsu: empty histogram");
    }
    std::uint64_t total = 0;
    std::uint64_t weighted = 0;
    std::size_t occupied = 0;
    std::size_t last_occupied = 0;
    for (std::size_t i = 0; i < hist.size(); ++i) {
        total += hist[i];
        weighted += i * hist[i];
        if (hist[i] != 0) {
            ++occupied;
            last_occupied = i;
        }
    }
    if (total == 0) {
        throw InvalidArgument("otsu: histogram has no mass");
    }
    if (occupied == 1) {
        return last_occupied;
    }

    std::size_t best = 0;
    ExactRatio best_value;
    bool have_best = false;
    std::uint64_t n0 = 0;
    std::uint64_t s0 = 0;
    for (std::size_t t = 0; t + 1 < hist.size(); ++t) {
        n0 += hist[t];
        s0 += t * hist[t];
        const std::uint64_t n1 = total - n0;
        ExactRatio value;
        if (n0 != 0 && n1 != 0) {
            const i128 d = static_cast<i128>(total) * s0 - static_cast<i128>(n0) * weighted;
            const u128 mag = static_cast<u128>(d < 0 ? -d : d);
            const u128 num = mag * mag;
            value.denominator = static_cast<u128>(n0) * n1;
            value.quotient = num / value.denominator;
            value.remainder = num % value.denominator;
        }
        if (!have_best || greater(value, best_value)) {
            best = t;
            best_value = value;
            have_best = true;
        }
    }
    return best;
}

double otsu_threshold(std::span<const std::uint64_t> hist) {
    if (hist.size() < 2) {
        throw InvalidArgument("otsu: need at least 2 bins");
    }
    return static_cast<double>(otsu_bin(hist)) / static_cast<double>(hist.size() - 1);
}

BinaryMap otsu_binarize(std::span<const double> values, int width, int height) {
    const auto hist = histogram(values, kOtsuBins);
    const std::size_t t = otsu_bin(hist);
    BinaryMap out(width, height);
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = histogram_bin(values[i], kOtsuBins) > t ? 1 : 0;
    }
    return out;
}

BinaryMap otsu_binarize(const SaliencyMap& map) {
    return otsu_binarize(map.values(), map.width(), map.height());
}

BinaryMap threshold_at(const SaliencyMap& map, double level) {
    BinaryMap out(map.width(), map.height());
    for (std::size_t i = 0; i < map.size(); ++i) {
        out[i] = map[i] >= level ? 1 : 0;
    }
    return out;
}

Grid<double> sobel_magnitude(const Grid<double>& img) {
    return sobel(img).magnitude;
}

BinaryMap canny_edges(const IntensityImage& img, const CannyParams& params) {
    params.validate();
    const int w = img.width();
    const int h = img.height();
    BinaryMap edges(w, h);
    if (img.empty()) {
        return edges;
    }
    const GaussianKernel kernel = GaussianKernel::binomial(params.blur_radius);
    const Gradients g = sobel(convolve_separable(img.grid(), kernel.weights()));

    const auto mags = g.magnitude.values();
    const double max_mag = *std::max_element(mags.begin(), mags.end());
    if (max_mag <= 0.0) {
        return edges;
    }

    // tan(22.5 deg) and tan(67.5 deg) split the gradient direction into 4 sectors.
    constexpr double kTan22 = 0.41421356237309503;
    constexpr double kTan67 = 2.4142135623730949;
    auto mag_at = [&](int x, int y) { return g.magnitude.contains(x, y) ? g.magnitude(x, y) : 0.0; };

    Grid<double> thin(w, h, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double m = g.magnitude(x, y);
            if (m <= 0.0) {
                continue;
            }
            const double ax = std::abs(g.gx(x, y));
            const double ay = std::abs(g.gy(x, y));
            double before = 0.0;
            double after = 0.0;
            if (ay <= kTan22 * ax) {
                before = mag_at(x - 1, y);
                after = mag_at(x + 1, y);
            } else if (ay >= kTan67 * ax) {
                before = mag_at(x, y - 1);
                after = mag_at(x, y + 1);
            } else if (g.gx(x, y) * g.gy(x, y) > 0.0) {
                before = mag_at(x - 1, y - 1);
                after = mag_at(x + 1, y + 1);
            } else {
                before = mag_at(x + 1, y - 1);
                after = mag_at(x - 1, y + 1);
            }
            // Strict on one side so a two-pixel plateau keeps exactly one pixel.
            if (m > before && m >= after) {
                thin(x, y) = m;
            }
        }
    }

    const double high = params.high_ratio * max_mag;
    const double low = params.low_ratio * max_mag;
    std::deque<std::size_t> frontier;
    for (std::size_t i = 0; i < thin.size(); ++i) {
        if (thin[i] >= high) {
            edges[i] = 1;
            frontier.push_back(i);
        }
    }
    while (!frontier.empty()) {
        const std::size_t i = frontier.front();
        frontier.pop_front();
        const int x = static_cast<int>(i % static_cast<std::size_t>(w));
        const int y = static_cast<int>(i / static_cast<std::size_t>(w));
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx;
                const int ny = y + dy;
                if (!edges.contains(nx, ny)) {
                    continue;
                }
                const std::size_t j = edges.index(nx, ny);
                if (edges[j] == 0 && thin[j] >= low && thin[j] > 0.0) {
                    edges[j] = 1;
                    frontier.push_back(j);
                }
            }
        }
    }
    return edges;
}

BinaryMap fill_holes(const BinaryMap& map) {
    const int w = map.width();
    const int h = map.height();
    // 1 = background reachable from the border.
    Grid<std::uint8_t> outside(w, h, 0);
    std::deque<std::size_t> frontier;
    auto seed = [&](int x, int y) {
        const std::size_t i = map.index(x, y);
        if (map[i] == 0 && outside[i] == 0) {
            outside[i] = 1;
            frontier.push_back(i);
        }
    };
    for (int x = 0; x < w; ++x) {
        seed(x, 0);
        seed(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        seed(0, y);
        seed(w - 1, y);
    }
    constexpr int kDx[4] = {1, -1, 0, 0};
    constexpr int kDy[4] = {0, 0, 1, -1};
    while (!frontier.empty()) {
        const std::size_t i = frontier.front();
        frontier.pop_front();
        const int x = static_cast<int>(i % static_cast<std::size_t>(w));
        const int y = static_cast<int>(i / static_cast<std::size_t>(w));
        for (int k = 0; k < 4; ++k) {
            const int nx = x + kDx[k];
            const int ny = y + kDy[k];
            if (map.contains(nx, ny)) {
                seed(nx, ny);
            }
        }
    }
    BinaryMap out(w, h);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (map[i] != 0 || outside[i] == 0) ? 1 : 0;
    }
    return out;
}

BinaryMap binary_or(const BinaryMap& a, const BinaryMap& b) {
    if (!a.same_shape(b)) {
        throw InvalidArgument("binary maps differ in dimensions");
    }
    BinaryMap out(a.width(), a.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (a[i] != 0 || b[i] != 0) ? 1 : 0;
    }
    return out;
}

BinaryMap fuse_white(const BinaryMap& b1, const BinaryMap& b2) {
    return binary_or(b1, b2);
}

namespace {

struct IntegralImage {
    int width = 0;
    int height = 0;
    std::vector<std::int64_t> fixed;  // per-pixel fixed-point values
    std::vector<std::int64_t> sums;   // (width+1) x (height+1)

    std::int64_t box(int x0, int y0, int x1, int y1) const {
        const std::size_t stride = static_cast<std::size_t>(width) + 1;
        auto s = [&](int x, int y) {
            return sums[static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x)];
        };
        return s(x1 + 1, y1 + 1) - s(x0, y1 + 1) - s(x1 + 1, y0) + s(x0, y0);
    }
};

// Fixed point at 2^-40 keeps window sums exact in int64 for images below 2^23 pixels.
IntegralImage integral_image(const IntensityImage& img) {
    IntegralImage ii;
    ii.width = img.width();
    ii.height = img.height();
    ii.fixed.resize(img.size());
    const std::size_t stride = static_cast<std::size_t>(ii.width) + 1;
    ii.sums.assign(stride * (static_cast<std::size_t>(ii.height) + 1), 0);
    for (int y = 0; y < ii.height; ++y) {
        std::int64_t row = 0;
        for (int x = 0; x < ii.width; ++x) {
            const std::size_t i = img.grid().index(x, y);
            ii.fixed[i] = std::llround(img[i] * kFixedPointScale);
            row += ii.fixed[i];
            ii.sums[(static_cast<std::size_t>(y) + 1) * stride + static_cast<std::size_t>(x) + 1] =
                ii.sums[static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x) + 1] + row;
        }
    }
    return ii;
}

void check_window(int window) {
    if (window < 3 || window % 2 == 0) {
        throw InvalidArgument("window must be odd and >= 3");
    }
}

template <typename Fn>
void for_each_window(const IntegralImage& ii, int window, Fn&& fn) {
    const int half = window / 2;
    for (int y = 0; y < ii.height; ++y) {
        const int y0 = std::max(0, y - half);
        const int y1 = std::min(ii.height - 1, y + half);
        for (int x = 0; x < ii.width; ++x) {
            const int x0 = std::max(0, x - half);
            const int x1 = std::min(ii.width - 1, x + half);
            const std::int64_t count = static_cast<std::int64_t>(x1 - x0 + 1) * (y1 - y0 + 1);
            fn(x, y, ii.box(x0, y0, x1, y1), count);
        }
    }
}

}  // namespace

Grid<double> local_means(const IntensityImage& img, int window) {
    check_window(window);
    const IntegralImage ii = integral_image(img);
    Grid<double> out(img.width(), img.height());
    for_each_window(ii, window, [&](int x, int y, std::int64_t sum, std::int64_t count) {
        out(x, y) = static_cast<double>(sum) / kFixedPointScale / static_cast<double>(count);
    });
    return out;
}

BinaryMap bradley_threshold(const IntensityImage& img, int window, double sensitivity) {
    check_window(window);
    if (!(sensitivity >= 0.0 && sensitivity <= 1.0)) {
        throw InvalidArgument("sensitivity must be in [0,1]");
    }
    const IntegralImage ii = integral_image(img);
    BinaryMap out(img.width(), img.height());
    const long double keep = 1.0L - static_cast<long double>(sensitivity);
    for_each_window(ii, window, [&](int x, int y, std::int64_t sum, std::int64_t count) {
        const std::size_t i = out.index(x, y);
        // value * count > sum * (1 - s); both sides exact in long double when s = 0.
        const long double lhs = static_cast<long double>(ii.fixed[i]) * count;
        const long double rhs = static_cast<long double>(sum) * keep;
        out[i] = lhs > rhs ? 1 : 0;
    });
    return out;
}

}  // namespace oslo
