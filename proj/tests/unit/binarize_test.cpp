#include <gtest/gtest.h>

#include "oslo/binarize.hpp"
#include "oslo/error.hpp"
#include "oslo/regions.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace oslo {
namespace {

SaliencyMap normalized_map(int w, int h, std::vector<double> v) {
    return SaliencyMap(w, h, std::move(v), true);
}

IntensityImage square_image(int size, int x0, int x1, double lo, double hi) {
    std::vector<double> px(static_cast<std::size_t>(size * size), lo);
    for (int y = x0; y <= x1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            px[static_cast<std::size_t>(y * size + x)] = hi;
        }
    }
    return IntensityImage(size, size, px);
}

TEST(Otsu, BimodalExample) {
    std::vector<std::uint64_t> hist(256, 0);
    hist[10] = 100;
    hist[200] = 100;
    // Every split between the two modes has the same variance; lowest wins.
    EXPECT_EQ(otsu_bin(hist), 10u);
    EXPECT_DOUBLE_EQ(otsu_threshold(hist), 10.0 / 255.0);
}

TEST(Otsu, SingleOccupiedBin) {
    std::vector<std::uint64_t> hist(256, 0);
    hist[77] = 5;
    EXPECT_EQ(otsu_bin(hist), 77u);
}

TEST(Otsu, ThreeLevelExample) {
    // Bins 0 (x4), 1 (x1), 9 (x4): separating {0,1} from {9} wins.
    std::vector<std::uint64_t> hist(10, 0);
    hist[0] = 4;
    hist[1] = 1;
    hist[9] = 4;
    EXPECT_EQ(otsu_bin(hist), 1u);
}

TEST(Otsu, Errors) {
    EXPECT_THROW(otsu_bin(std::vector<std::uint64_t>{}), InvalidArgument);
    EXPECT_THROW(otsu_bin(std::vector<std::uint64_t>(4, 0)), InvalidArgument);
}

TEST(Otsu, MatchesRationalOracle) {
    fixture::Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const auto hist = fixture::random_histogram(rng);
        ASSERT_EQ(otsu_bin(hist), oracle::otsu_bin(hist)) << "trial " << trial;
    }
}

TEST(Otsu, BinarizeSplitsBimodalImage) {
    std::vector<double> v(100, 0.1);
    for (int i = 0; i < 30; ++i) {
        v[static_cast<std::size_t>(i)] = 0.9;
    }
    const BinaryMap b = otsu_binarize(v, 10, 10);
    EXPECT_EQ(b.count(), 30u);
    for (int i = 0; i < 30; ++i) {
        EXPECT_TRUE(b.test(static_cast<std::size_t>(i)));
    }
}

TEST(ThresholdAt, InclusiveExamples) {
    const SaliencyMap m = normalized_map(4, 1, {0.0, 0.25, 0.5, 1.0});
    EXPECT_EQ(threshold_at(m, 0.0).count(), 4u);
    EXPECT_EQ(threshold_at(m, 0.5).count(), 2u);
    EXPECT_EQ(threshold_at(m, 0.5001).count(), 1u);
    EXPECT_EQ(threshold_at(m, 1.0).count(), 1u);
}

TEST(ThresholdAt, Antitone) {
    fixture::Rng rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        const IntensityImage img = fixture::random_image(rng, 12, 12);
        const SaliencyMap m = normalized_map(12, 12, {img.pixels().begin(), img.pixels().end()});
        const double a = fixture::uniform(rng);
        const double b = fixture::uniform(rng);
        const BinaryMap lo = threshold_at(m, std::min(a, b));
        const BinaryMap hi = threshold_at(m, std::max(a, b));
        for (std::size_t i = 0; i < lo.size(); ++i) {
            ASSERT_TRUE(!hi.test(i) || lo.test(i));
        }
    }
}

TEST(Canny, ConstantImageHasNoEdges) {
    EXPECT_EQ(canny_edges(IntensityImage::filled(20, 20, 0.5), CannyParams{}).count(), 0u);
}

TEST(Canny, SquareGivesOneClosedContour) {
    const IntensityImage img = square_image(40, 12, 27, 0.1, 0.9);
    const BinaryMap edges = canny_edges(img, CannyParams{});
    ASSERT_GT(edges.count(), 0u);
    EXPECT_EQ(label_components(edges, Connectivity::Eight).size(), 1u);
    const BinaryMap filled = fill_holes(edges);
    EXPECT_GT(filled.count(), edges.count());
    EXPECT_TRUE(filled.test(20, 20));
    EXPECT_FALSE(filled.test(2, 2));
}

TEST(Canny, VerticalStepGivesThinLine) {
    std::vector<double> px(32 * 32, 0.2);
    for (int y = 0; y < 32; ++y) {
        for (int x = 16; x < 32; ++x) {
            px[static_cast<std::size_t>(y * 32 + x)] = 0.8;
        }
    }
    const BinaryMap edges = canny_edges(IntensityImage(32, 32, px), CannyParams{});
    for (int y = 0; y < 32; ++y) {
        int on = 0;
        for (int x = 0; x < 32; ++x) {
            on += edges.test(x, y) ? 1 : 0;
        }
        EXPECT_EQ(on, 1) << "row " << y;
    }
}

TEST(Canny, MatchesTextbookOracle) {
    fixture::Rng rng(33);
    for (int trial = 0; trial < 40; ++trial) {
        const IntensityImage img = fixture::random_blob_image(rng, 48, 48, 4);
        const BinaryMap a = canny_edges(img, CannyParams{});
        const BinaryMap b = oracle::canny(img.grid(), 2, 0.1, 0.25);
        std::size_t diff = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            diff += a.test(i) != b.test(i) ? 1 : 0;
        }
        EXPECT_EQ(diff, 0u) << "trial " << trial;
    }
}

TEST(Canny, ValidatesParams) {
    EXPECT_THROW((CannyParams{2, 0.3, 0.2}.validate()), InvalidArgument);
    EXPECT_THROW((CannyParams{2, 0.0, 0.2}.validate()), InvalidArgument);
    EXPECT_THROW((CannyParams{-1, 0.1, 0.2}.validate()), InvalidArgument);
    EXPECT_NO_THROW(CannyParams{}.validate());
}

TEST(FillHoles, Examples) {
    BinaryMap ring(7, 7);
    for (int i = 1; i <= 5; ++i) {
        ring(i, 1) = ring(i, 5) = ring(1, i) = ring(5, i) = 1;
    }
    const BinaryMap filled = fill_holes(ring);
    EXPECT_EQ(filled.count(), 25u);
    EXPECT_TRUE(filled.test(3, 3));

    // A hole touching the border through a 4-connected gap stays open.
    BinaryMap open = ring;
    open(3, 5) = 0;
    EXPECT_EQ(fill_holes(open).count(), open.count());

    // Diagonal leaks do not count as border connection.
    BinaryMap diag(5, 5);
    diag(1, 2) = diag(2, 1) = diag(3, 2) = diag(2, 3) = 1;
    EXPECT_TRUE(fill_holes(diag).test(2, 2));
}

TEST(FillHoles, IdempotentSuperset) {
    fixture::Rng rng(34);
    for (int trial = 0; trial < 60; ++trial) {
        const BinaryMap m = fixture::random_binary(rng, 20, 16, fixture::uniform(rng, 0.2, 0.7));
        const BinaryMap f = fill_holes(m);
        for (std::size_t i = 0; i < m.size(); ++i) {
            ASSERT_TRUE(!m.test(i) || f.test(i));
        }
        ASSERT_EQ(fill_holes(f), f);
    }
}

TEST(FuseWhite, OrProperties) {
    fixture::Rng rng(35);
    for (int trial = 0; trial < 40; ++trial) {
        const BinaryMap a = fixture::random_binary(rng, 9, 7, 0.3);
        const BinaryMap b = fixture::random_binary(rng, 9, 7, 0.3);
        const BinaryMap ab = fuse_white(a, b);
        EXPECT_EQ(ab, fuse_white(b, a));
        EXPECT_EQ(fuse_white(a, a), a);
        EXPECT_EQ(fuse_white(a, BinaryMap(9, 7)), a);
        for (std::size_t i = 0; i < ab.size(); ++i) {
            ASSERT_EQ(ab.test(i), a.test(i) || b.test(i));
        }
    }
    EXPECT_THROW(fuse_white(BinaryMap(2, 2), BinaryMap(3, 2)), InvalidArgument);
}

TEST(Bradley, Examples) {
    // A bright pixel is foreground; its dimmer neighbours fall below the
    // raised local mean, while the flat field far away clears 0.85 x its mean.
    std::vector<double> px(49, 0.2);
    px[24] = 0.9;
    const BinaryMap b = bradley_threshold(IntensityImage(7, 7, px), 3, 0.15);
    EXPECT_TRUE(b.test(3, 3));
    EXPECT_TRUE(b.test(0, 0));
    EXPECT_FALSE(b.test(2, 3));  // 0.2 < (0.9 + 8 * 0.2) / 9 * 0.85

    // A flat image is foreground everywhere for s > 0 and nowhere for s = 0.
    const IntensityImage flat = IntensityImage::filled(8, 8, 0.3);
    EXPECT_EQ(bradley_threshold(flat, 3, 0.15).count(), 64u);
    EXPECT_EQ(bradley_threshold(flat, 3, 0.0).count(), 0u);
    // Black stays background.
    EXPECT_EQ(bradley_threshold(IntensityImage::filled(8, 8, 0.0), 5, 0.5).count(), 0u);
}

TEST(Bradley, LocalMeansMatchDirectSummation) {
    fixture::Rng rng(36);
    for (int trial = 0; trial < 30; ++trial) {
        const int w = fixture::uniform_int(rng, 5, 30);
        const int h = fixture::uniform_int(rng, 5, 30);
        const int window = 2 * fixture::uniform_int(rng, 1, 6) + 1;
        const IntensityImage img = fixture::random_image(rng, w, h);
        const Grid<double> a = local_means(img, window);
        const Grid<double> b = oracle::window_means(img.grid(), window);
        for (std::size_t i = 0; i < a.size(); ++i) {
            ASSERT_NEAR(a[i], b[i], 1e-9);
        }
    }
}

TEST(Bradley, SensitivityIsMonotone) {
    fixture::Rng rng(37);
    for (int trial = 0; trial < 30; ++trial) {
        const IntensityImage img = fixture::random_image(rng, 16, 16);
        const BinaryMap lo = bradley_threshold(img, 5, 0.05);
        const BinaryMap hi = bradley_threshold(img, 5, 0.3);
        for (std::size_t i = 0; i < lo.size(); ++i) {
            ASSERT_TRUE(!lo.test(i) || hi.test(i));
        }
    }
}

TEST(Bradley, Errors) {
    const IntensityImage img = IntensityImage::filled(4, 4, 0.5);
    EXPECT_THROW(bradley_threshold(img, 4, 0.1), InvalidArgument);
    EXPECT_THROW(bradley_threshold(img, 1, 0.1), InvalidArgument);
    EXPECT_THROW(bradley_threshold(img, 3, 1.5), InvalidArgument);
}

}  // namespace
}  // namespace oslo
