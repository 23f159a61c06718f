#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oslo/binarize.hpp"
#include "oslo/grid.hpp"
#include "oslo/regions.hpp"

namespace oslo {

/// One counted cell.
struct Detection {
    std::int32_t id = 0;
    /// Watershed seed: nucleus plus cell-body pixels (see count_and_mark).
    Region marker_region;
    PointD nucleus_centroid;
    double r_wi = 0.0;
    std::int32_t nucleus_label = 0;
    std::int32_t body_label = 0;
};

struct SegmentationResult {
    LabelMap label_map;
    std::vector<Detection> detections;
    std::size_t count = 0;
};

/// Cell-candidate foreground: pixelwise OR of the white and green maps.
BinaryMap candidate_map(const BinaryMap& b_w, const BinaryMap& b_g);

/// mean + 3 * population standard deviation. Throws PipelineError on empty input.
double ratio_upper_bound(std::span<const double> r_wi_values);

/// Accepts every pairing entry with r_wi <= bound. Entries sharing a
/// nucleus/body pair collapse into one detection. A detection's marker is its
/// nucleus plus those body pixels no other accepted detection also claims, so
/// markers stay disjoint when several nuclei sit in one green component;
/// nucleus pixels shared by two detections are dropped from both, and a
/// detection left with an empty marker is dropped. Ids are 1..K in entry order.
std::vector<Detection> count_and_mark(const RegionPairing& pairing, double bound,
                                      const RegionSet& white_set, const RegionSet& green_set);

/// Marker label map: each detection's marker pixels carry its id.
RegionSet markers_from_detections(const std::vector<Detection>& detections, int width, int height);

/// Exact squared Euclidean distance from every pixel to the nearest
/// background pixel (two-pass lower-envelope-of-parabolas method). Pixels of
/// a map with no background get width^2 + height^2.
Grid<double> squared_distance_transform(const BinaryMap& foreground);

/// Marker-controlled flooding restricted to `mask`, 8-connected. A pixel takes
/// the label of the neighbour that first queues it; the queue is ordered by
/// (surface value, insertion sequence). Unreached mask pixels stay 0.
/// Throws InvalidArgument on empty markers or marker pixels outside the mask.
LabelMap watershed(const Grid<double>& surface, const RegionSet& markers, const BinaryMap& mask);

}  // namespace oslo
