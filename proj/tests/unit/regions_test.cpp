#include <gtest/gtest.h>

#include <map>

#include "oslo/error.hpp"
#include "oslo/regions.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace oslo {
namespace {

TEST(LabelComponents, EightVersusFour) {
    BinaryMap m(4, 4);
    m(0, 0) = m(1, 1) = m(3, 3) = 1;
    const RegionSet eight = label_components(m, Connectivity::Eight);
    const RegionSet four = label_components(m, Connectivity::Four);
    EXPECT_EQ(eight.size(), 2u);
    EXPECT_EQ(four.size(), 3u);
    EXPECT_EQ(eight.by_label(1).area, 2u);
    EXPECT_EQ(eight.by_label(1).centroid, (PointD{0.5, 0.5}));
    EXPECT_EQ(eight.label_map(3, 3), 2);
    EXPECT_EQ(eight.label_map(2, 2), 0);
}

TEST(LabelComponents, RasterOrderAndPixels) {
    BinaryMap m(5, 3);
    m(4, 0) = 1;
    m(0, 1) = m(0, 2) = 1;
    const RegionSet s = label_components(m);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.by_label(1).pixels, (std::vector<std::uint32_t>{4}));
    EXPECT_EQ(s.by_label(2).pixels, (std::vector<std::uint32_t>{5, 10}));
    EXPECT_EQ(s.mask(), m);
}

TEST(LabelComponents, MatchesFloodFillOracle) {
    fixture::Rng rng(41);
    for (int trial = 0; trial < 80; ++trial) {
        const BinaryMap m = fixture::random_binary(rng, 23, 17, fixture::uniform(rng, 0.1, 0.7));
        for (const bool eight : {true, false}) {
            const RegionSet s =
                label_components(m, eight ? Connectivity::Eight : Connectivity::Four);
            ASSERT_EQ(s.label_map, oracle::label(m, eight));
            std::size_t total = 0;
            for (std::size_t k = 0; k < s.size(); ++k) {
                ASSERT_EQ(s.regions[k].label, static_cast<std::int32_t>(k + 1));
                total += s.regions[k].area;
            }
            ASSERT_EQ(total, m.count());
        }
    }
}

TEST(FilterSmall, DropsAndRenumbers) {
    BinaryMap m(10, 1);
    m(0, 0) = 1;
    m(2, 0) = m(3, 0) = m(4, 0) = 1;
    m(6, 0) = m(7, 0) = 1;
    const RegionSet f = filter_small(label_components(m), 2);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f.by_label(1).area, 3u);
    EXPECT_EQ(f.by_label(2).area, 2u);
    EXPECT_EQ(f.label_map(0, 0), 0);
    EXPECT_EQ(f.label_map(7, 0), 2);
}

TEST(RegionsFromLabels, RenumbersByFirstPixel) {
    LabelMap l(3, 2, std::vector<std::int32_t>{0, 9, 9, 4, 0, 0});
    const RegionSet s = regions_from_labels(l);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.label_map(1, 0), 1);
    EXPECT_EQ(s.label_map(0, 1), 2);
}

struct Scene {
    BinaryMap b_g;
    RegionSet white;
    RegionSet green;
};

Scene scene(const BinaryMap& w, const BinaryMap& g) {
    return {g, label_components(w), label_components(g)};
}

TEST(PairRegions, ContainedNucleus) {
    BinaryMap w(20, 20);
    BinaryMap g(20, 20);
    fixture::draw_rect(w, 8, 8, 9, 9);    // 4 px
    fixture::draw_rect(g, 6, 6, 9, 9);    // 16 px
    const Scene s = scene(w, g);
    const RegionPairing p = pair_regions(s.b_g, s.white, s.green);
    ASSERT_EQ(p.m_count(), 1u);
    EXPECT_EQ(p.entries[0].r_wi, 1.0);
    EXPECT_EQ(p.entries[0].r_gw, 4.0);
    EXPECT_EQ(p.entries[0].nucleus_label, 1);
    EXPECT_EQ(p.entries[0].body_label, 1);
}

TEST(PairRegions, HalfOverlap) {
    BinaryMap w(20, 20);
    BinaryMap g(20, 20);
    fixture::draw_rect(w, 2, 2, 5, 3);   // 8 px, half inside the body
    fixture::draw_rect(g, 4, 2, 13, 3);  // 20 px
    const Scene s = scene(w, g);
    const RegionPairing p = pair_regions(s.b_g, s.white, s.green);
    ASSERT_EQ(p.m_count(), 1u);
    EXPECT_EQ(p.entries[0].intersection.area, 4u);
    EXPECT_EQ(p.entries[0].r_wi, 2.0);
    EXPECT_EQ(p.entries[0].r_gw, 5.0);
}

TEST(PairRegions, DisjointHasNoIntersections) {
    BinaryMap w(20, 20);
    BinaryMap g(20, 20);
    fixture::draw_rect(w, 0, 0, 3, 3);
    fixture::draw_rect(g, 10, 10, 15, 15);
    const Scene s = scene(w, g);
    const RegionPairing p = pair_regions(s.b_g, s.white, s.green);
    EXPECT_EQ(p.m_count(), 0u);
    EXPECT_FALSE(mean_ratio(p.r_wi_values()).has_value());
}

TEST(PairRegions, DimensionMismatchThrows) {
    const RegionSet a = label_components(BinaryMap(4, 4));
    const RegionSet b = label_components(BinaryMap(5, 4));
    EXPECT_THROW(pair_regions(BinaryMap(4, 4), a, b), InvalidArgument);
}

TEST(PairRegions, PartitionInvariants) {
    fixture::Rng rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        const BinaryMap w = fixture::random_binary(rng, 30, 30, 0.35);
        const BinaryMap g = fixture::random_binary(rng, 30, 30, 0.45);
        const Scene s = scene(w, g);
        const RegionPairing p = pair_regions(s.b_g, s.white, s.green);
        // Intersections are disjoint, lie inside their nucleus and body, and
        // every region sum stays within the region area.
        std::vector<int> seen(w.size(), 0);
        std::map<std::int32_t, std::size_t> per_nucleus;
        std::map<std::int32_t, std::size_t> per_body;
        std::size_t overlap = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            overlap += (w.test(i) && g.test(i)) ? 1 : 0;
        }
        std::size_t covered = 0;
        for (const PairEntry& e : p.entries) {
            for (std::uint32_t px : e.intersection.pixels) {
                ASSERT_EQ(seen[px]++, 0);
                ASSERT_EQ(s.white.label_map[px], e.nucleus_label);
                ASSERT_EQ(s.green.label_map[px], e.body_label);
            }
            ASSERT_GE(e.r_wi, 1.0);
            ASSERT_GE(e.r_gw, 1.0);
            ASSERT_EQ(e.nucleus_area, s.white.by_label(e.nucleus_label).area);
            per_nucleus[e.nucleus_label] += e.intersection.area;
            per_body[e.body_label] += e.intersection.area;
            covered += e.intersection.area;
        }
        ASSERT_EQ(covered, overlap);
        for (const auto& [label, area] : per_nucleus) {
            ASSERT_LE(area, s.white.by_label(label).area);
        }
        for (const auto& [label, area] : per_body) {
            ASSERT_LE(area, s.green.by_label(label).area);
        }
    }
}

TEST(MeanRatio, Examples) {
    EXPECT_FALSE(mean_ratio(std::vector<double>{}).has_value());
    EXPECT_EQ(*mean_ratio(std::vector<double>{2.0}), 2.0);
    EXPECT_EQ(*mean_ratio(std::vector<double>{1.0, 2.0, 6.0}), 3.0);
}

}  // namespace
}  // namespace oslo
