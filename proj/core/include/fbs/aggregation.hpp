#pragma once

#include "fbs/core.hpp"

#include <array>
#include <vector>

namespace fbs {

/// exp(-(dx^2 + dy^2) / gamma_d^2) over a (2 * radius + 1)^2 grid.
class SpatialWeightTable {
public:
    SpatialWeightTable(int radius, double gamma_d);

    int radius() const noexcept { return radius_; }
    int side() const noexcept { return 2 * radius_ + 1; }
    double at(int dx, int dy) const noexcept {
        return weights_[static_cast<std::size_t>(dy + radius_) * side() + (dx + radius_)];
    }

private:
    int radius_;
    std::vector<double> weights_;
};

/// exp(-delta^2 / gamma_r^2) for integer intensity differences 0..255.
/// Entries that would underflow are held at the smallest normal double so
/// every weight stays strictly positive.
class RangeWeightTable {
public:
    static constexpr int kSize = 256;

    explicit RangeWeightTable(double gamma_r);

    double at(int delta) const noexcept { return weights_[static_cast<std::size_t>(delta)]; }
    /// Weight for a real-valued intensity difference, rounded to the nearest level.
    double for_difference(double diff) const noexcept;

private:
    std::array<double, kSize> weights_{};
};

SpatialWeightTable build_spatial_weights(int rho_agg, double gamma_d);
RangeWeightTable build_range_weights(double gamma_r);

/// Bilateral filtering of each disparity slice, guided by `guide`.
/// Sentinel costs are left out of both sums; a pixel whose window holds no
/// defined cost at some d stays undefined at that d. The window is clipped
/// at the image border. Neighbours whose combined weight underflows the
/// normal double range are skipped.
CostVolume bilateral_aggregate(const CostVolume& volume, const GrayImage& guide,
                               const SpatialWeightTable& spatial, const RangeWeightTable& range,
                               int workers = 1);

}  // namespace fbs
