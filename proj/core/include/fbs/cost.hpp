#pragma once

#include "fbs/core.hpp"

#include <cstdint>

namespace fbs {

/// Blocks with a standard deviation below this are treated as textureless;
/// their NCC is undefined and the sentinel is stored instead.
inline constexpr double kSigmaFloor = 1e-6;

/// Mean and standard deviation of every (2 * radius + 1)^2 block.
/// Throws DimensionError if the image cannot hold a single full block.
BlockStats compute_block_stats(const GrayImage& img, int radius);

struct CostVolumePair {
    CostVolume left;
    CostVolume right;
    /// Number of block dot products evaluated. Each one fills one entry in
    /// each volume.
    std::uint64_t evaluations = 0;
};

/// NCC matching of left block (u, v) against right block (u - d, v) for
/// every d in [params.d_min, params.d_max]. Each cost is written to
/// left(u, v, d) and right(u - d, v, d).
CostVolumePair compute_cost_volumes(const GrayImage& left, const GrayImage& right,
                                    const BlockStats& stats_l, const BlockStats& stats_r,
                                    const FbsParams& params, int workers = 1);

}  // namespace fbs
