#pragma once

#include "fbs/core.hpp"

namespace fbs {

/// Per-pixel argmax over d. Ties go to the smallest d; columns without a
/// defined cost give kInvalid.
DisparityMap wta_disparity(const CostVolume& volume, int workers = 1);

/// Keeps left(u, v) only when right(u - round(left(u, v)), v) exists, is
/// valid, and lies within `tolerance` of it.
DisparityMap lrc_check(const DisparityMap& left, const DisparityMap& right, double tolerance,
                       int workers = 1);

/// Offset of the parabola vertex through (-1, prev), (0, center), (1, next),
/// relative to the center sample. Returns 0 when the denominator is below 1e-9.
double parabola_offset(double prev, double center, double next) noexcept;

/// Moves each valid integer disparity strictly inside (d_min, d_max) to the
/// vertex of the parabola through its three neighbouring costs, clamped to
/// +-0.5. Pixels at the range ends or next to undefined costs keep d.
DisparityMap subpixel_refine(const DisparityMap& disp, const CostVolume& volume, int workers = 1);

}  // namespace fbs
