#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oslo/binarize.hpp"
#include "oslo/grid.hpp"

namespace oslo {

enum class Connectivity { Four = 4, Eight = 8 };

struct Region {
    std::int32_t label = 0;
    std::size_t area = 0;
    PointD centroid;
    /// Ascending flat pixel indices.
    std::vector<std::uint32_t> pixels;
};

/// Labeled connected components. Labels are 1..K in raster order of each
/// component's first pixel; regions[k-1] has label k; label_map is 0 on background.
struct RegionSet {
    std::vector<Region> regions;
    LabelMap label_map;

    std::size_t size() const noexcept { return regions.size(); }
    const Region& by_label(std::int32_t label) const { return regions.at(static_cast<std::size_t>(label) - 1); }
    BinaryMap mask() const;
};

RegionSet label_components(const BinaryMap& map, Connectivity connectivity = Connectivity::Eight);

/// Builds a RegionSet from an arbitrary label map (labels need not be
/// contiguous); components are renumbered 1..K by first pixel.
RegionSet regions_from_labels(const LabelMap& labels);

/// Drops regions smaller than min_area and renumbers the rest contiguously.
RegionSet filter_small(const RegionSet& set, std::size_t min_area);

struct PairEntry {
    Region intersection;
    std::int32_t nucleus_label = 0;  ///< label in the white RegionSet
    std::int32_t body_label = 0;     ///< label in the green RegionSet
    std::size_t nucleus_area = 0;
    std::size_t body_area = 0;
    double r_wi = 0.0;  ///< nucleus area / intersection area
    double r_gw = 0.0;  ///< body area / intersection area
};

/// Intersecting regions between the green and white foregrounds at one level.
struct RegionPairing {
    std::vector<PairEntry> entries;

    std::size_t m_count() const noexcept { return entries.size(); }
    std::vector<double> r_wi_values() const;
    std::vector<double> r_gw_values() const;
};

/// Intersection components (8-connected) of b_g AND the white and green
/// foregrounds, in raster order. Each entry references the white and green
/// regions containing it.
RegionPairing pair_regions(const BinaryMap& b_g, const RegionSet& white_set,
                           const RegionSet& green_set);

/// Arithmetic mean, or nullopt for an empty sequence (no intersecting regions).
std::optional<double> mean_ratio(std::span<const double> values);

}  // namespace oslo
