#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace oslo::fixture {

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

IntensityImage random_image(Rng& rng, int width, int height, double lo, double hi) {
    std::vector<double> px(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (double& v : px) {
        v = uniform(rng, lo, hi);
    }
    return IntensityImage(width, height, std::move(px));
}

IntensityImage random_quantized_image(Rng& rng, int width, int height) {
    std::vector<double> px(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (double& v : px) {
        v = uniform_int(rng, 0, 255) / 255.0;
    }
    return IntensityImage(width, height, std::move(px));
}

BinaryMap random_binary(Rng& rng, int width, int height, double density) {
    BinaryMap map(width, height);
    for (std::size_t i = 0; i < map.size(); ++i) {
        map[i] = uniform(rng) < density ? 1 : 0;
    }
    return map;
}

void draw_disk(BinaryMap& map, double cx, double cy, double r) {
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) {
                map(x, y) = 1;
            }
        }
    }
}

void draw_rect(BinaryMap& map, int x0, int y0, int x1, int y1) {
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (map.contains(x, y)) {
                map(x, y) = 1;
            }
        }
    }
}

std::vector<std::uint64_t> random_histogram(Rng& rng) {
    std::vector<std::uint64_t> hist(256, 0);
    const int kind = uniform_int(rng, 0, 9);
    if (kind == 0) {
        hist[static_cast<std::size_t>(uniform_int(rng, 0, 255))] = static_cast<std::uint64_t>(uniform_int(rng, 1, 100000));
    } else if (kind <= 3) {
        // Few equal or random spikes: exercises ties.
        const int spikes = uniform_int(rng, 2, 5);
        const std::uint64_t height = static_cast<std::uint64_t>(uniform_int(rng, 1, 50));
        for (int s = 0; s < spikes; ++s) {
            hist[static_cast<std::size_t>(uniform_int(rng, 0, 255))] +=
                kind == 1 ? height : static_cast<std::uint64_t>(uniform_int(rng, 1, 50));
        }
    } else {
        // Bimodal mixture plus sparse noise, like a saliency histogram.
        const double m0 = uniform(rng, 0.0, 120.0);
        const double m1 = uniform(rng, 100.0, 255.0);
        const double s0 = uniform(rng, 2.0, 30.0);
        const double s1 = uniform(rng, 2.0, 30.0);
        const int n = uniform_int(rng, 100, 20000);
        std::normal_distribution<double> a(m0, s0), b(m1, s1);
        const double mix = uniform(rng, 0.05, 0.95);
        for (int i = 0; i < n; ++i) {
            const double v = uniform(rng) < mix ? a(rng) : b(rng);
            hist[static_cast<std::size_t>(std::clamp(static_cast<int>(std::lround(v)), 0, 255))] += 1;
        }
    }
    return hist;
}

RatioTable random_ratio_table(Rng& rng, std::size_t levels) {
    RatioTable table;
    const std::vector<double> grid = uniform_grid(levels);
    // Mix of shapes: unstructured noise, or opposing trends with noise, which
    // is what real images produce (r1 rising with the level, r2 falling).
    const bool trend = uniform(rng) < 0.5;
    const double infeasible = uniform(rng) < 0.3 ? uniform(rng, 0.0, 0.4) : 0.0;
    for (std::size_t i = 0; i < levels; ++i) {
        RatioSample s;
        s.level = grid[i];
        if (uniform(rng) < infeasible) {
            table.samples.push_back(s);
            continue;
        }
        s.m_count = static_cast<std::size_t>(uniform_int(rng, 1, 40));
        if (trend) {
            s.r1_mean = 1.0 + 8.0 * s.level * s.level + uniform(rng, 0.0, 0.5);
            s.r2_mean = 1.0 + 12.0 * (1.0 - s.level) + uniform(rng, 0.0, 0.5);
        } else {
            s.r1_mean = uniform(rng, 0.5, 10.0);
            s.r2_mean = uniform(rng, 0.5, 20.0);
        }
        table.samples.push_back(s);
    }
    return table;
}

RegionSet regions_of(const LabelMap& labels) { return regions_from_labels(labels); }

WatershedFixture random_watershed_fixture(Rng& rng, int size) {
    WatershedFixture f;
    f.mask = BinaryMap(size, size);
    LabelMap marker_labels(size, size, 0);
    std::vector<std::pair<double, double>> centers;
    std::vector<double> radii;
    if (uniform(rng) < 0.5) {
        // Dumbbell: two lobes and a horizontal neck.
        const double r1 = uniform(rng, 6.0, 12.0);
        const double r2 = uniform(rng, 6.0, 12.0);
        const double cy = size / 2.0 + uniform(rng, -4.0, 4.0);
        const double c1 = r1 + 2.0;
        const double c2 = size - r2 - 3.0;
        draw_disk(f.mask, c1, cy, r1);
        draw_disk(f.mask, c2, cy, r2);
        const int half = uniform_int(rng, 0, 2);
        draw_rect(f.mask, static_cast<int>(c1), static_cast<int>(cy) - half, static_cast<int>(c2),
                  static_cast<int>(cy) + half);
        centers = {{c1, cy}, {c2, cy}};
        radii = {r1, r2};
        f.mask_connected = true;
    } else {
        const int blobs = uniform_int(rng, 1, 5);
        for (int b = 0; b < blobs; ++b) {
            const double r = uniform(rng, 4.0, 10.0);
            const double cx = uniform(rng, r + 1.0, size - r - 2.0);
            const double cy = uniform(rng, r + 1.0, size - r - 2.0);
            bool clash = false;
            for (std::size_t k = 0; k < centers.size(); ++k) {
                const double d = std::hypot(cx - centers[k].first, cy - centers[k].second);
                if (d < 0.5 * (r + radii[k]) + 3.0) {
                    clash = true;  // markers would be too close to stay non-adjacent
                }
            }
            if (clash) {
                continue;
            }
            draw_disk(f.mask, cx, cy, r);
            centers.emplace_back(cx, cy);
            radii.push_back(r);
        }
        f.mask_connected = label_components(f.mask, Connectivity::Eight).size() == 1;
    }
    std::int32_t next = 0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        ++next;
        const double mr = uniform(rng) < 0.5 ? 0.0 : uniform(rng, 1.0, 0.4 * radii[k]);
        const int cx = static_cast<int>(std::lround(centers[k].first));
        const int cy = static_cast<int>(std::lround(centers[k].second));
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= mr * mr && f.mask.test(x, y)) {
                    marker_labels(x, y) = next;
                }
            }
        }
        marker_labels(cx, cy) = next;
        f.mask(cx, cy) = 1;
    }
    f.markers = regions_from_labels(marker_labels);
    return f;
}

IntensityImage random_blob_image(Rng& rng, int width, int height, int blobs) {
    std::vector<double> px(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.05);
    for (int b = 0; b < blobs; ++b) {
        const double cx = uniform(rng, 0.0, width);
        const double cy = uniform(rng, 0.0, height);
        const double r = uniform(rng, 2.0, 8.0);
        const double a = uniform(rng, 0.3, 0.9);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const double d = std::hypot(x - cx, y - cy);
                double& v = px[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                               static_cast<std::size_t>(x)];
                v = std::max(v, a * std::clamp((r + 3.0 - d) / 6.0, 0.0, 1.0));
            }
        }
    }
    for (double& v : px) {
        v = std::clamp(v + uniform(rng, -0.02, 0.02), 0.0, 1.0);
    }
    return IntensityImage(width, height, std::move(px));
}

}  // namespace oslo::fixture
