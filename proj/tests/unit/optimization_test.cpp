#include "fbs/optimization.hpp"

#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <random>

namespace fbs {
namespace {

CostVolume single_column(std::initializer_list<float> costs, int d_min = 0) {
    CostVolume vol(1, 1, d_min, d_min + static_cast<int>(costs.size()) - 1);
    std::copy(costs.begin(), costs.end(), vol.column(0, 0).begin());
    return vol;
}

TEST(Wta, PicksUniqueMaximum) {
    const auto disp = wta_disparity(single_column({-0.2f, 0.9f, 0.1f}));
    EXPECT_EQ(disp(0, 0), 1.0f);
}

TEST(Wta, AllSentinelColumnIsInvalid) {
    const auto disp = wta_disparity(single_column({kCostSentinel, kCostSentinel, kCostSentinel}));
    EXPECT_FALSE(disp.valid(0, 0));
}

TEST(Wta, SentinelNeverWinsOverMinusOne) {
    const auto disp = wta_disparity(single_column({kCostSentinel, -1.0f, kCostSentinel}, 3));
    EXPECT_EQ(disp(0, 0), 4.0f);
}

TEST(Wta, TiesGoToSmallestDisparity) {
    std::mt19937 rng(21);
    std::uniform_real_distribution<float> cost(-1.0f, 0.5f);
    for (int trial = 0; trial < 200; ++trial) {
        CostVolume vol(1, 1, 2, 12);
        for (auto& c : vol.costs()) c = cost(rng);
        std::uniform_int_distribution<int> pos(0, 10);
        int a = pos(rng), b = pos(rng);
        if (a == b) continue;
        vol.costs()[static_cast<std::size_t>(a)] = 0.8f;
        vol.costs()[static_cast<std::size_t>(b)] = 0.8f;
        EXPECT_EQ(wta_disparity(vol)(0, 0), static_cast<float>(std::min(a, b) + 2));
    }
}

TEST(Wta, MatchesLinearScanOracle) {
    std::mt19937 rng(22);
    const auto vol = testing::random_volume(rng, 12, 12, 1, 8, 0.3);
    const auto disp = wta_disparity(vol);
    for (int v = 0; v < 12; ++v) {
        for (int u = 0; u < 12; ++u) {
            int best = -1;
            for (int d = 1; d <= 8; ++d) {
                const float c = vol.at(u, v, d);
                if (c >= -1.0f && (best < 0 || c > vol.at(u, v, best))) best = d;
            }
            if (best < 0) {
                EXPECT_FALSE(disp.valid(u, v));
            } else {
                EXPECT_EQ(disp(u, v), static_cast<float>(best));
                // No disparity in range beats the winner.
                for (int d = 1; d <= 8; ++d) EXPECT_FALSE(vol.at(u, v, d) > vol.at(u, v, best));
            }
        }
    }
}

TEST(Lrc, KeepsConsistentMatch) {
    DisparityMap left(10, 1), right(10, 1);
    left(7, 0) = 5.0f;
    right(2, 0) = 5.0f;
    EXPECT_EQ(lrc_check(left, right, 1.0)(7, 0), 5.0f);
}

TEST(Lrc, RejectsMismatchBeyondTolerance) {
    DisparityMap left(10, 1), right(10, 1);
    left(7, 0) = 5.0f;
    right(2, 0) = 2.0f;
    EXPECT_FALSE(lrc_check(left, right, 1.0).valid(7, 0));
}

TEST(Lrc, ToleranceBoundaryIsInclusive) {
    DisparityMap left(10, 1), right(10, 1);
    left(7, 0) = 5.0f;
    right(2, 0) = 6.0f;
    EXPECT_TRUE(lrc_check(left, right, 1.0).valid(7, 0));
    EXPECT_FALSE(lrc_check(left, right, 0.5).valid(7, 0));
}

TEST(Lrc, LookupOutsideImageOrOnInvalidIsRejected) {
    DisparityMap left(10, 1), right(10, 1, 3.0f);
    left(2, 0) = 3.0f;
    left(5, 0) = 2.0f;
    right(3, 0) = DisparityMap::kInvalid;
    const auto out = lrc_check(left, right, 1.0);
    EXPECT_FALSE(out.valid(2, 0));
    EXPECT_FALSE(out.valid(5, 0));
}

TEST(Lrc, SubpixelLeftRoundsToNearestColumn) {
    DisparityMap left(10, 1), right(10, 1, 0.0f);
    left(8, 0) = 4.6f;  // rounds to 5 -> right column 3
    right(3, 0) = 5.0f;
    EXPECT_TRUE(lrc_check(left, right, 1.0).valid(8, 0));
}

TEST(Lrc, InvalidatesExactlyTheOccludedBand) {
    const testing::RectangleScene scene;
    const auto out = lrc_check(scene.left_map(), scene.right_map(), 1.0);
    for (int v = 0; v < scene.height; ++v) {
        for (int u = 0; u < scene.width; ++u) {
            EXPECT_EQ(out.valid(u, v), !scene.occluded(u, v)) << u << "," << v;
        }
    }
}

TEST(Lrc, SurvivorsSatisfyTolerance) {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> d(0, 6);
    DisparityMap left(40, 6), right(40, 6);
    for (auto& x : left.data()) x = static_cast<float>(d(rng));
    for (auto& x : right.data()) x = static_cast<float>(d(rng));
    const auto out = lrc_check(left, right, 1.0);
    for (int v = 0; v < 6; ++v) {
        for (int u = 0; u < 40; ++u) {
            if (!out.valid(u, v)) continue;
            const int xr = u - static_cast<int>(std::lround(left(u, v)));
            ASSERT_GE(xr, 0);
            EXPECT_LE(std::fabs(left(u, v) - right(xr, v)), 1.0);
            EXPECT_EQ(out(u, v), left(u, v));
        }
    }
}

TEST(Lrc, DimensionMismatchThrows) {
    EXPECT_THROW(lrc_check(DisparityMap(4, 4), DisparityMap(4, 5), 1.0), DimensionError);
}

TEST(Subpixel, SymmetricPeakStaysPut) {
    EXPECT_EQ(parabola_offset(0.5, 1.0, 0.5), 0.0);
}

TEST(Subpixel, AsymmetricPeakMovesTowardLargerNeighbour) {
    // (0.2 - 0.6) / (0.4 + 1.2 - 4.0) = -0.4 / -2.4
    EXPECT_NEAR(parabola_offset(0.2, 1.0, 0.6), 1.0 / 6.0, 1e-12);
}

TEST(Subpixel, FlatColumnKeepsIntegerDisparity) {
    EXPECT_EQ(parabola_offset(0.7, 0.7, 0.7), 0.0);
}

TEST(Subpixel, RefinesThroughVolume) {
    CostVolume vol(3, 1, 0, 4, 0.0f);
    const float col[] = {0.1f, 0.2f, 1.0f, 0.6f, 0.0f};
    std::copy(std::begin(col), std::end(col), vol.column(1, 0).begin());
    DisparityMap disp(3, 1);
    disp(1, 0) = 2.0f;
    const auto out = subpixel_refine(disp, vol);
    EXPECT_NEAR(out(1, 0), 2.0f + 1.0f / 6.0f, 1e-6f);
    EXPECT_FALSE(out.valid(0, 0));
}

TEST(Subpixel, RangeEndsAndSentinelNeighboursKeepInteger) {
    CostVolume vol(3, 1, 0, 3, 0.3f);
    vol.at(0, 0, 0) = 0.9f;
    vol.at(1, 0, 3) = 0.9f;
    vol.at(2, 0, 1) = kCostSentinel;
    vol.at(2, 0, 2) = 0.9f;
    DisparityMap disp(3, 1);
    disp(0, 0) = 0.0f;
    disp(1, 0) = 3.0f;
    disp(2, 0) = 2.0f;
    const auto out = subpixel_refine(disp, vol);
    EXPECT_EQ(out(0, 0), 0.0f);
    EXPECT_EQ(out(1, 0), 3.0f);
    EXPECT_EQ(out(2, 0), 2.0f);
}

TEST(Subpixel, StrictMaximumOffsetIsInsideHalfPixel) {
    std::mt19937 rng(24);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double center = c(rng);
        const double prev = center - std::uniform_real_distribution<double>(1e-6, 2.0)(rng);
        const double next = center - std::uniform_real_distribution<double>(1e-6, 2.0)(rng);
        const double off = parabola_offset(prev, center, next);
        ASSERT_GT(off, -0.5);
        ASSERT_LT(off, 0.5);
    }
}

TEST(Subpixel, ClampedToHalfPixelEvenWithoutPeak) {
    CostVolume vol(1, 1, 0, 2);
    vol.at(0, 0, 0) = 0.0f;
    vol.at(0, 0, 1) = 0.5f;
    vol.at(0, 0, 2) = 0.9f;  // not a maximum at d = 1
    DisparityMap disp(1, 1);
    disp(0, 0) = 1.0f;
    const auto out = subpixel_refine(disp, vol);
    EXPECT_LE(std::fabs(out(0, 0) - 1.0f), 0.5f);
}

}  // namespace
}  // namespace fbs
