#include "fbs/cost.hpp"

#include "fbs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fbs {

BlockStats compute_block_stats(const GrayImage& img, int radius) {
    if (radius < 1) {
        throw ParameterError("compute_block_stats: radius must be >= 1");
    }
    const int w = img.width();
    const int h = img.height();
    if (w <= 2 * radius || h <= 2 * radius) {
        throw DimensionError("compute_block_stats: image too small for a single block");
    }

    BlockStats stats;
    stats.width = w;
    stats.height = h;
    stats.radius = radius;
    const auto total = static_cast<std::size_t>(w) * h;
    stats.mean.assign(total, std::numeric_limits<double>::quiet_NaN());
    stats.stddev.assign(total, std::numeric_limits<double>::quiet_NaN());

    const double n = static_cast<double>((2 * radius + 1) * (2 * radius + 1));
    for (int v = radius; v < h - radius; ++v) {
        for (int u = radius; u < w - radius; ++u) {
            double sum = 0.0;
            double sum_sq = 0.0;
            for (int y = v - radius; y <= v + radius; ++y) {
                for (int x = u - radius; x <= u + radius; ++x) {
                    const double i = img(x, y);
                    sum += i;
                    sum_sq += i * i;
                }
            }
            const double mu = sum / n;
            const auto idx = static_cast<std::size_t>(v) * w + u;
            stats.mean[idx] = mu;
            stats.stddev[idx] = std::sqrt(std::max(0.0, sum_sq / n - mu * mu));
        }
    }
    return stats;
}

CostVolumePair compute_cost_volumes(const GrayImage& left, const GrayImage& right,
                                    const BlockStats& stats_l, const BlockStats& stats_r,
                                    const FbsParams& params, int workers) {
    params.validate();
    const int w = left.width();
    const int h = left.height();
    if (!right.same_dims(w, h)) {
        throw DimensionError("compute_cost_volumes: left and right images differ in size");
    }
    if (stats_l.width != w || stats_l.height != h || stats_r.width != w || stats_r.height != h) {
        throw DimensionError("compute_cost_volumes: block statistics do not match the images");
    }
    if (stats_l.radius != params.rho_ncc || stats_r.radius != params.rho_ncc) {
        throw ParameterError("compute_cost_volumes: block statistics computed with a different radius");
    }

    const int r = params.rho_ncc;
    const double n = params.block_pixels();
    CostVolumePair out{CostVolume(w, h, params.d_min, params.d_max),
                       CostVolume(w, h, params.d_min, params.d_max), 0};
    std::vector<std::uint64_t> row_evals(static_cast<std::size_t>(h), 0);

    // Rows are independent: left(u, v, d) and right(u - d, v, d) share row v.
    parallel_for(h, workers, [&](int v_begin, int v_end) {
        for (int v = std::max(v_begin, r); v < std::min(v_end, h - r); ++v) {
            std::uint64_t evals = 0;
            for (int u = r; u < w - r; ++u) {
                const double sigma_l = stats_l.stddev_at(u, v);
                if (sigma_l < kSigmaFloor) {
                    continue;
                }
                const double mu_l = stats_l.mean_at(u, v);
                const int d_hi = std::min(params.d_max, u - r);
                for (int d = params.d_min; d <= d_hi; ++d) {
                    const int xr = u - d;
                    const double sigma_r = stats_r.stddev_at(xr, v);
                    if (sigma_r < kSigmaFloor) {
                        continue;
                    }
                    double dot = 0.0;
                    for (int y = v - r; y <= v + r; ++y) {
                        const auto row_l = left.row(y);
                        const auto row_r = right.row(y);
                        for (int k = -r; k <= r; ++k) {
                            dot += row_l[static_cast<std::size_t>(u + k)] * row_r[static_cast<std::size_t>(xr + k)];
                        }
                    }
                    const double mu_r = stats_r.mean_at(xr, v);
                    const double c = (dot - n * mu_l * mu_r) / (n * sigma_l * sigma_r);
                    const auto cost = static_cast<float>(std::clamp(c, -1.0, 1.0));
                    out.left.at(u, v, d) = cost;
                    out.right.at(xr, v, d) = cost;
                    ++evals;
                }
            }
            row_evals[static_cast<std::size_t>(v)] = evals;
        }
    });

    for (auto e : row_evals) {
        out.evaluations += e;
    }
    return out;
}

}  // namespace fbs
