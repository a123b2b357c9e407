#include "fbs/aggregation.hpp"

#include "fbs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fbs {

SpatialWeightTable::SpatialWeightTable(int radius, double gamma_d) : radius_(radius) {
    if (radius < 0) {
        throw ParameterError("spatial weights: radius must be >= 0");
    }
    if (!(gamma_d > 0.0)) {
        throw ParameterError("spatial weights: gamma_d must be > 0");
    }
    const double g2 = gamma_d * gamma_d;
    weights_.resize(static_cast<std::size_t>(side()) * side());
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const double w = std::exp(-static_cast<double>(dx * dx + dy * dy) / g2);
            weights_[static_cast<std::size_t>(dy + radius) * side() + (dx + radius)] =
                std::max(w, std::numeric_limits<double>::min());
        }
    }
}

RangeWeightTable::RangeWeightTable(double gamma_r) {
    if (!(gamma_r > 0.0)) {
        throw ParameterError("range weights: gamma_r must be > 0");
    }
    const double g2 = gamma_r * gamma_r;
    for (int delta = 0; delta < kSize; ++delta) {
        const double w = std::exp(-static_cast<double>(delta * delta) / g2);
        weights_[static_cast<std::size_t>(delta)] = std::max(w, std::numeric_limits<double>::min());
    }
}

double RangeWeightTable::for_difference(double diff) const noexcept {
    const long level = std::lround(std::fabs(diff));
    return weights_[static_cast<std::size_t>(std::min<long>(level, kSize - 1))];
}

SpatialWeightTable build_spatial_weights(int rho_agg, double gamma_d) {
    return SpatialWeightTable(rho_agg, gamma_d);
}

RangeWeightTable build_range_weights(double gamma_r) { return RangeWeightTable(gamma_r); }

CostVolume bilateral_aggregate(const CostVolume& volume, const GrayImage& guide,
                               const SpatialWeightTable& spatial, const RangeWeightTable& range,
                               int workers) {
    const int w = volume.width();
    const int h = volume.height();
    if (!guide.same_dims(w, h)) {
        throw DimensionError("bilateral_aggregate: guide image does not match the cost volume");
    }

    const int radius = spatial.radius();
    const auto slices = static_cast<std::size_t>(volume.range());
    CostVolume out(w, h, volume.d_min(), volume.d_max());

    parallel_for(h, workers, [&](int v_begin, int v_end) {
        std::vector<double> num(slices);
        std::vector<double> den(slices);
        for (int v = v_begin; v < v_end; ++v) {
            const int y0 = std::max(0, v - radius);
            const int y1 = std::min(h - 1, v + radius);
            for (int u = 0; u < w; ++u) {
                const int x0 = std::max(0, u - radius);
                const int x1 = std::min(w - 1, u + radius);
                const double center = guide(u, v);
                std::fill(num.begin(), num.end(), 0.0);
                std::fill(den.begin(), den.end(), 0.0);

                for (int y = y0; y <= y1; ++y) {
                    for (int x = x0; x <= x1; ++x) {
                        const double weight =
                            spatial.at(x - u, y - v) * range.for_difference(guide(x, y) - center);
                        // Underflowed weight: no representable contribution, and subnormal math is slow.
                        if (weight < std::numeric_limits<double>::min()) {
                            continue;
                        }
                        const float* col = volume.column(x, y).data();
                        for (std::size_t k = 0; k < slices; ++k) {
                            const float c = col[k];
                            const bool defined = is_defined_cost(c);
                            num[k] += defined ? weight * static_cast<double>(c) : 0.0;
                            den[k] += defined ? weight : 0.0;
                        }
                    }
                }

                auto dst = out.column(u, v);
                for (std::size_t k = 0; k < slices; ++k) {
                    dst[k] = den[k] > 0.0 ? static_cast<float>(num[k] / den[k]) : kCostSentinel;
                }
            }
        }
    });
    return out;
}

}  // namespace fbs
