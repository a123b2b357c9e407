#pragma once

#include "fbs/core.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fbs {

enum class Region { All, NonOcc, NonOccTextl, NonOccDiscont };

std::string_view region_name(Region region) noexcept;
/// Accepts the names produced by region_name(); returns nullopt otherwise.
std::optional<Region> parse_region(std::string_view name) noexcept;

struct RegionMask {
    int width = 0;
    int height = 0;
    Region label = Region::All;
    std::vector<std::uint8_t> include;

    bool included(int u, int v) const noexcept {
        return include[static_cast<std::size_t>(v) * width + u] != 0;
    }
    std::size_t count() const noexcept;
};

/// Mask covering every pixel with valid ground truth.
RegionMask mask_from_ground_truth(const DisparityMap& gt, Region label = Region::All);

/// Loads an 8-bit mask raster (nonzero = included). When `gt` is given, its
/// dimensions must match and its invalid pixels are excluded.
RegionMask load_region_mask(const std::filesystem::path& path, Region label,
                            const DisparityMap* gt = nullptr);

struct PepResult {
    double e_pep = 0.0;      // percent
    std::size_t n = 0;       // evaluated pixels
    std::size_t errors = 0;
    Region region = Region::All;
};

/// Percentage of pixels whose |est - gt| exceeds epsilon_d, over the pixels
/// included by `mask` that have valid ground truth. Invalid estimates count
/// as errors unless `count_invalid_as_error` is false, in which case they
/// are skipped.
PepResult compute_pep(const DisparityMap& est, const DisparityMap& gt, const RegionMask& mask,
                      double epsilon_d, bool count_invalid_as_error = true);

/// Millions of disparity evaluations per second: width * height * d_max / t * 1e-6.
double compute_mde_s(int width, int height, int d_max, double seconds);

struct EvalReport {
    double e_pep = 0.0;
    std::size_t n = 0;
    Region region = Region::All;
    FbsParams params;
    double runtime_seconds = 0.0;
    double mde_per_s = 0.0;
};

}  // namespace fbs
