#include <gtest/gtest.h>

#include <cmath>

#include "oslo/error.hpp"
#include "oslo/saliency.hpp"
#include "support/fixtures.hpp"

namespace oslo {
namespace {

const GaussianKernel kKernel = GaussianKernel::binomial(2);

TEST(FtSaliency, ConstantImageGivesZeroMap) {
    const SaliencyMap s = ft_saliency(IntensityImage::filled(12, 9, 0.4), kKernel);
    for (const double v : s.values()) {
        EXPECT_EQ(v, 0.0);
    }
    const SaliencyMap n = normalize(s);
    EXPECT_TRUE(n.normalized());
    EXPECT_EQ(n.max_value(), 0.0);
}

TEST(FtSaliency, AdditiveOffsetInvariance) {
    fixture::Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const IntensityImage img = fixture::random_image(rng, 24, 20, 0.0, 0.6);
        const double c = fixture::uniform(rng, 0.0, 0.4);
        std::vector<double> shifted(img.pixels().begin(), img.pixels().end());
        for (double& v : shifted) {
            v += c;
        }
        const SaliencyMap a = ft_saliency(img, kKernel);
        const SaliencyMap b = ft_saliency(IntensityImage(24, 20, shifted), kKernel);
        for (std::size_t i = 0; i < a.size(); ++i) {
            ASSERT_NEAR(a[i], b[i], 1e-9);
        }
    }
}

TEST(FtSaliency, BrightSquareOnDarkField) {
    std::vector<double> px(32 * 32, 0.1);
    for (int y = 12; y < 20; ++y) {
        for (int x = 12; x < 20; ++x) {
            px[static_cast<std::size_t>(y * 32 + x)] = 0.9;
        }
    }
    const IntensityImage img(32, 32, px);
    const SaliencyMap s = ft_saliency(img, kKernel);
    // Independent evaluation: mean = 0.1 + 0.8 * 64 / 1024; blur is exact 0.9 in the core.
    const double mean = 0.1 + 0.8 * 64.0 / 1024.0;
    EXPECT_NEAR(s.feature_mean(), mean, 1e-12);
    EXPECT_NEAR(s(15, 15), 0.9 - mean, 1e-12);
    EXPECT_NEAR(s.max_value(), 0.9 - mean, 1e-12);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            EXPECT_LE(s(x, y), s(15, 15) + 1e-15);
        }
    }
    EXPECT_NEAR(s(0, 0), mean - 0.1, 1e-12);
}

TEST(FtSaliency, ImpulseIsSalient) {
    std::vector<double> px(64, 0.0);
    px[27] = 1.0;
    const SaliencyMap s = ft_saliency(IntensityImage(8, 8, px), kKernel);
    EXPECT_GT(s.max_value(), 0.0);
}

TEST(FtSaliency, ScalingCommutesWithNormalization) {
    fixture::Rng rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        const IntensityImage img = fixture::random_image(rng, 16, 16, 0.0, 0.25);
        for (const double k : {0.5, 2.0, 4.0}) {
            std::vector<double> scaled(img.pixels().begin(), img.pixels().end());
            for (double& v : scaled) {
                v *= k;
            }
            const SaliencyMap a = ft_saliency(img, kKernel);
            const SaliencyMap b = ft_saliency(IntensityImage(16, 16, scaled), kKernel);
            for (std::size_t i = 0; i < a.size(); ++i) {
                ASSERT_NEAR(b[i], k * a[i], 1e-12);
            }
            // Powers of two scale every intermediate exactly.
            EXPECT_EQ(normalize(a).grid(), normalize(b).grid());
        }
        std::vector<double> scaled(img.pixels().begin(), img.pixels().end());
        for (double& v : scaled) {
            v *= 3.0;
        }
        const SaliencyMap a = normalize(ft_saliency(img, kKernel));
        const SaliencyMap b = normalize(ft_saliency(IntensityImage(16, 16, scaled), kKernel));
        for (std::size_t i = 0; i < a.size(); ++i) {
            ASSERT_NEAR(a[i], b[i], 1e-12);
        }
    }
}

TEST(Normalize, Examples) {
    const SaliencyMap m(3, 1, {0.0, 2.0, 4.0}, false, 0.0);
    const SaliencyMap n = normalize(m);
    EXPECT_EQ(n[0], 0.0);
    EXPECT_EQ(n[1], 0.5);
    EXPECT_EQ(n[2], 1.0);
    EXPECT_TRUE(n.normalized());
    EXPECT_EQ(normalize(n), n);  // idempotent
}

TEST(Normalize, MaxIsZeroOrOne) {
    fixture::Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const SaliencyMap n = normalize(ft_saliency(fixture::random_image(rng, 10, 10), kKernel));
        EXPECT_TRUE(n.max_value() == 0.0 || n.max_value() == 1.0);
        EXPECT_EQ(normalize(n), n);
    }
}

TEST(SaliencyMap, ValidatesValues) {
    EXPECT_THROW(SaliencyMap(2, 1, {0.0, -1.0}, false, 0.0), InvalidArgument);
    EXPECT_THROW(SaliencyMap(2, 1, {0.0, INFINITY}, false, 0.0), InvalidArgument);
    EXPECT_THROW(SaliencyMap(2, 2, {0.0, 1.0}, false, 0.0), InvalidArgument);
    EXPECT_THROW(SaliencyMap(2, 1, {0.0, 2.0}, false, 0.0).as_image(), InvalidArgument);
}

}  // namespace
}  // namespace oslo
