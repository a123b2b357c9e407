#include "fbs/aggregation.hpp"

#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace fbs {
namespace {

TEST(SpatialWeights, CentreIsOne) {
    const auto t = build_spatial_weights(3, 2.5);
    EXPECT_EQ(t.at(0, 0), 1.0);
}

TEST(SpatialWeights, UnitOffsetWithUnitGamma) {
    const auto t = build_spatial_weights(2, 1.0);
    EXPECT_DOUBLE_EQ(t.at(1, 0), std::exp(-1.0));
    EXPECT_NEAR(t.at(1, 0), 0.367879, 1e-6);
}

TEST(SpatialWeights, SymmetricUnderTransposeAndMirror) {
    const auto t = build_spatial_weights(2, 1.7);
    for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
            EXPECT_EQ(t.at(dx, dy), t.at(dy, dx));
            EXPECT_EQ(t.at(dx, dy), t.at(-dx, dy));
            EXPECT_EQ(t.at(dx, dy), t.at(dx, -dy));
            EXPECT_GT(t.at(dx, dy), 0.0);
            EXPECT_LE(t.at(dx, dy), 1.0);
        }
    }
}

TEST(SpatialWeights, RejectsBadParameters) {
    EXPECT_THROW(build_spatial_weights(2, 0.0), ParameterError);
    EXPECT_THROW(build_spatial_weights(2, -1.0), ParameterError);
    EXPECT_THROW(build_spatial_weights(-1, 1.0), ParameterError);
}

TEST(RangeWeights, ZeroDifferenceIsOne) { EXPECT_EQ(build_range_weights(7.0).at(0), 1.0); }

TEST(RangeWeights, DifferenceEqualToGamma) {
    EXPECT_DOUBLE_EQ(build_range_weights(10.0).at(10), std::exp(-1.0));
    EXPECT_NEAR(build_range_weights(10.0).at(10), 0.367879, 1e-6);
}

TEST(RangeWeights, StrictlyDecreasingWhileRepresentable) {
    for (double gamma : {0.5, 3.0, 10.0, 40.0, 255.0, 1e4}) {
        const auto t = build_range_weights(gamma);
        for (int delta = 1; delta < RangeWeightTable::kSize; ++delta) {
            ASSERT_GT(t.at(delta), 0.0);
            ASSERT_LE(t.at(delta), 1.0);
            ASSERT_LE(t.at(delta), t.at(delta - 1));
            if (t.at(delta) > std::numeric_limits<double>::min()) {
                ASSERT_LT(t.at(delta), t.at(delta - 1)) << "gamma " << gamma << " delta " << delta;
            }
        }
    }
}

TEST(RangeWeights, RealDifferencesRoundToNearestLevel) {
    const auto t = build_range_weights(10.0);
    EXPECT_EQ(t.for_difference(2.4), t.at(2));
    EXPECT_EQ(t.for_difference(-2.6), t.at(3));
    EXPECT_EQ(t.for_difference(400.0), t.at(255));
}

TEST(RangeWeights, RejectsNonPositiveGamma) {
    EXPECT_THROW(build_range_weights(0.0), ParameterError);
    EXPECT_THROW(build_range_weights(-2.0), ParameterError);
}

TEST(BilateralAggregate, ZeroRadiusIsIdentity) {
    std::mt19937 rng(11);
    const auto vol = testing::random_volume(rng, 9, 7, 0, 5, 0.2);
    const auto guide = testing::random_image(rng, 9, 7);
    const auto out = bilateral_aggregate(vol, guide, build_spatial_weights(0, 3.0), build_range_weights(9.0));
    EXPECT_TRUE(std::equal(vol.costs().begin(), vol.costs().end(), out.costs().begin()));
}

TEST(BilateralAggregate, ConstantSliceStaysConstant) {
    std::mt19937 rng(12);
    CostVolume vol(8, 8, 0, 2, 0.5f);
    vol.at(3, 3, 1) = kCostSentinel;
    const auto guide = testing::random_image(rng, 8, 8);
    for (double gamma : {0.5, 4.0, 100.0}) {
        const auto out = bilateral_aggregate(vol, guide, build_spatial_weights(2, gamma), build_range_weights(gamma));
        for (float c : out.costs()) {
            EXPECT_NEAR(c, 0.5f, 1e-7f);
        }
    }
}

TEST(BilateralAggregate, MatchesBruteForceOnRandomVolume) {
    std::mt19937 rng(13);
    const auto vol = testing::random_volume(rng, 9, 9, 0, 5, 0.15);
    const auto guide = testing::random_image(rng, 9, 9);
    const auto out = bilateral_aggregate(vol, guide, build_spatial_weights(2, 5.0), build_range_weights(20.0));
    for (int v = 0; v < 9; ++v) {
        for (int u = 0; u < 9; ++u) {
            for (int d = 0; d <= 5; ++d) {
                const double expected = testing::brute_force_bilateral(vol, guide, u, v, d, 2, 5.0, 20.0);
                ASSERT_FALSE(std::isnan(expected));
                EXPECT_NEAR(out.at(u, v, d), expected, 1e-6);
            }
        }
    }
}

TEST(BilateralAggregate, AllSentinelWindowStaysSentinel) {
    CostVolume vol(7, 7, 0, 1, kCostSentinel);
    vol.at(0, 0, 1) = 0.25f;
    const GrayImage guide(7, 7, 10.0);
    const auto out = bilateral_aggregate(vol, guide, build_spatial_weights(1, 2.0), build_range_weights(5.0));
    EXPECT_EQ(out.at(4, 4, 1), kCostSentinel);
    EXPECT_EQ(out.at(1, 1, 0), kCostSentinel);
    EXPECT_FLOAT_EQ(out.at(1, 1, 1), 0.25f);
}

TEST(BilateralAggregate, LargeGammaGivesBoxAverage) {
    std::mt19937 rng(14);
    const auto vol = testing::random_volume(rng, 9, 8, 0, 4, 0.1);
    const auto guide = testing::random_image(rng, 9, 8);
    const auto out = bilateral_aggregate(vol, guide, build_spatial_weights(2, 1e9), build_range_weights(1e9));
    for (int v = 0; v < 8; ++v) {
        for (int u = 0; u < 9; ++u) {
            for (int d = 0; d <= 4; ++d) {
                double sum = 0;
                int n = 0;
                for (int y = std::max(0, v - 2); y <= std::min(7, v + 2); ++y)
                    for (int x = std::max(0, u - 2); x <= std::min(8, u + 2); ++x)
                        if (is_defined_cost(vol.at(x, y, d))) {
                            sum += vol.at(x, y, d);
                            ++n;
                        }
                if (n == 0) {
                    EXPECT_EQ(out.at(u, v, d), kCostSentinel);
                } else {
                    EXPECT_NEAR(out.at(u, v, d), sum / n, 1e-6);
                }
            }
        }
    }
}

TEST(BilateralAggregate, ConstantGuideIgnoresRangeGamma) {
    std::mt19937 rng(15);
    const auto vol = testing::random_volume(rng, 10, 6, 0, 3, 0.1);
    const GrayImage guide(10, 6, 77.0);
    const auto spatial = build_spatial_weights(2, 3.0);
    const auto a = bilateral_aggregate(vol, guide, spatial, build_range_weights(0.7));
    const auto b = bilateral_aggregate(vol, guide, spatial, build_range_weights(300.0));
    EXPECT_TRUE(std::equal(a.costs().begin(), a.costs().end(), b.costs().begin()));
}

TEST(BilateralAggregate, OutputsStayWithinWindowRange) {
    std::mt19937 rng(16);
    const auto vol = testing::random_volume(rng, 12, 10, 0, 3, 0.2);
    const auto guide = testing::random_image(rng, 12, 10);
    const auto out = bilateral_aggregate(vol, guide, build_spatial_weights(2, 2.0), build_range_weights(15.0));
    for (int v = 0; v < 10; ++v) {
        for (int u = 0; u < 12; ++u) {
            for (int d = 0; d <= 3; ++d) {
                float lo = 2.0f, hi = -2.0f;
                for (int y = std::max(0, v - 2); y <= std::min(9, v + 2); ++y)
                    for (int x = std::max(0, u - 2); x <= std::min(11, u + 2); ++x)
                        if (is_defined_cost(vol.at(x, y, d))) {
                            lo = std::min(lo, vol.at(x, y, d));
                            hi = std::max(hi, vol.at(x, y, d));
                        }
                const float c = out.at(u, v, d);
                if (lo > hi) {
                    EXPECT_EQ(c, kCostSentinel);
                } else {
                    EXPECT_GE(c, lo - 1e-6f);
                    EXPECT_LE(c, hi + 1e-6f);
                }
            }
        }
    }
}

TEST(BilateralAggregate, IdenticalForAnyWorkerCount) {
    std::mt19937 rng(17);
    const auto vol = testing::random_volume(rng, 30, 17, 0, 6, 0.1);
    const auto guide = testing::random_image(rng, 30, 17);
    const auto spatial = build_spatial_weights(3, 4.0);
    const auto range = build_range_weights(12.0);
    const auto one = bilateral_aggregate(vol, guide, spatial, range, 1);
    for (int workers : {2, 5, 16}) {
        const auto many = bilateral_aggregate(vol, guide, spatial, range, workers);
        EXPECT_TRUE(std::equal(one.costs().begin(), one.costs().end(), many.costs().begin()));
    }
}

TEST(BilateralAggregate, GuideMustMatchVolume) {
    const CostVolume vol(5, 5, 0, 2, 0.0f);
    EXPECT_THROW(bilateral_aggregate(vol, GrayImage(5, 4, 0.0), build_spatial_weights(1, 1.0), build_range_weights(1.0)),
                 DimensionError);
}

}  // namespace
}  // namespace fbs
