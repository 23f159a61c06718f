#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "oslo/binarize.hpp"
#include "oslo/image.hpp"
#include "oslo/level_select.hpp"
#include "oslo/regions.hpp"

namespace oslo::fixture {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
int uniform_int(Rng& rng, int lo, int hi);

IntensityImage random_image(Rng& rng, int width, int height, double lo = 0.0, double hi = 1.0);
/// Pixel values restricted to k / 255.
IntensityImage random_quantized_image(Rng& rng, int width, int height);
BinaryMap random_binary(Rng& rng, int width, int height, double density);

void draw_disk(BinaryMap& map, double cx, double cy, double r);
void draw_rect(BinaryMap& map, int x0, int y0, int x1, int y1);  ///< inclusive bounds

/// Random 256-bin histogram: dense, sparse spikes, or a single occupied bin.
std::vector<std::uint64_t> random_histogram(Rng& rng);

/// Random ratio table over `levels` levels with occasional infeasible levels.
RatioTable random_ratio_table(Rng& rng, std::size_t levels = 256);

struct WatershedFixture {
    BinaryMap mask;
    RegionSet markers;
    bool mask_connected = false;
};

/// Two disks joined by a neck (one marker per lobe) or several disks, some
/// touching; every marker is a single pixel or a small disk inside the mask.
WatershedFixture random_watershed_fixture(Rng& rng, int size = 64);

/// Saliency-like map on a dark field: soft blobs of random height.
IntensityImage random_blob_image(Rng& rng, int width, int height, int blobs);

/// RegionSet from an explicit label map (labels must be 1..K).
RegionSet regions_of(const LabelMap& labels);

}  // namespace oslo::fixture
