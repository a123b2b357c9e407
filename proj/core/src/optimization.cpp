#include "fbs/optimization.hpp"

#include "fbs/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace fbs {

DisparityMap wta_disparity(const CostVolume& volume, int workers) {
    const int w = volume.width();
    const int h = volume.height();
    DisparityMap out(w, h);
    parallel_for(h, workers, [&](int v_begin, int v_end) {
        for (int v = v_begin; v < v_end; ++v) {
            for (int u = 0; u < w; ++u) {
                const auto col = volume.column(u, v);
                int best = -1;
                float best_cost = kCostSentinel;
                for (std::size_t k = 0; k < col.size(); ++k) {
                    if (is_defined_cost(col[k]) && (best < 0 || col[k] > best_cost)) {
                        best = static_cast<int>(k);
                        best_cost = col[k];
                    }
                }
                if (best >= 0) {
                    out(u, v) = static_cast<float>(best + volume.d_min());
                }
            }
        }
    });
    return out;
}

DisparityMap lrc_check(const DisparityMap& left, const DisparityMap& right, double tolerance,
                       int workers) {
    const int w = left.width();
    const int h = left.height();
    if (!right.same_dims(w, h)) {
        throw DimensionError("lrc_check: left and right disparity maps differ in size");
    }
    if (!(tolerance >= 0.0)) {
        throw ParameterError("lrc_check: tolerance must be >= 0");
    }
    DisparityMap out(w, h);
    parallel_for(h, workers, [&](int v_begin, int v_end) {
        for (int v = v_begin; v < v_end; ++v) {
            for (int u = 0; u < w; ++u) {
                const float d = left(u, v);
                if (!DisparityMap::is_valid(d)) {
                    continue;
                }
                const long xr = static_cast<long>(u) - std::lround(d);
                if (xr < 0 || xr >= w) {
                    continue;
                }
                const float dr = right(static_cast<int>(xr), v);
                if (DisparityMap::is_valid(dr) && std::fabs(static_cast<double>(d) - dr) <= tolerance) {
                    out(u, v) = d;
                }
            }
        }
    });
    return out;
}

double parabola_offset(double prev, double center, double next) noexcept {
    const double denom = 2.0 * prev + 2.0 * next - 4.0 * center;
    if (std::fabs(denom) < 1e-9) {
        return 0.0;
    }
    return (prev - next) / denom;
}

DisparityMap subpixel_refine(const DisparityMap& disp, const CostVolume& volume, int workers) {
    const int w = volume.width();
    const int h = volume.height();
    if (!disp.same_dims(w, h)) {
        throw DimensionError("subpixel_refine: disparity map does not match the cost volume");
    }
    DisparityMap out = disp;
    parallel_for(h, workers, [&](int v_begin, int v_end) {
        for (int v = v_begin; v < v_end; ++v) {
            for (int u = 0; u < w; ++u) {
                const float df = disp(u, v);
                if (!DisparityMap::is_valid(df)) {
                    continue;
                }
                const int d = static_cast<int>(std::lround(df));
                if (d <= volume.d_min() || d >= volume.d_max()) {
                    continue;
                }
                const float prev = volume.at(u, v, d - 1);
                const float center = volume.at(u, v, d);
                const float next = volume.at(u, v, d + 1);
                if (!is_defined_cost(prev) || !is_defined_cost(center) || !is_defined_cost(next)) {
                    continue;
                }
                const double offset = std::clamp(parabola_offset(prev, center, next), -0.5, 0.5);
                out(u, v) = static_cast<float>(d + offset);
            }
        }
    });
    return out;
}

}  // namespace fbs
