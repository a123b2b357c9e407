#include "fbs/evaluation.hpp"

#include "fbs/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fbs {
namespace {

constexpr std::array<std::pair<Region, std::string_view>, 4> kRegionNames{{
    {Region::All, "all"},
    {Region::NonOcc, "non_occ"},
    {Region::NonOccTextl, "non_occ_textl"},
    {Region::NonOccDiscont, "non_occ_discont"},
}};

}  // namespace

std::string_view region_name(Region region) noexcept {
    for (const auto& [r, name] : kRegionNames) {
        if (r == region) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Region> parse_region(std::string_view name) noexcept {
    for (const auto& [r, n] : kRegionNames) {
        if (n == name) {
            return r;
        }
    }
    return std::nullopt;
}

std::size_t RegionMask::count() const noexcept {
    return static_cast<std::size_t>(std::count_if(include.begin(), include.end(), [](auto b) { return b != 0; }));
}

RegionMask mask_from_ground_truth(const DisparityMap& gt, Region label) {
    RegionMask mask{gt.width(), gt.height(), label, {}};
    mask.include.resize(gt.size());
    std::transform(gt.data().begin(), gt.data().end(), mask.include.begin(),
                   [](float d) { return static_cast<std::uint8_t>(DisparityMap::is_valid(d)); });
    return mask;
}

RegionMask load_region_mask(const std::filesystem::path& path, Region label, const DisparityMap* gt) {
    const GrayImage raster = load_image(path);
    if (gt != nullptr && !gt->same_dims(raster.width(), raster.height())) {
        throw DimensionError("load_region_mask: " + path.string() + " does not match the ground truth size");
    }
    RegionMask mask{raster.width(), raster.height(), label, {}};
    mask.include.resize(raster.size());
    for (std::size_t i = 0; i < raster.size(); ++i) {
        const bool gt_ok = gt == nullptr || DisparityMap::is_valid(gt->data()[i]);
        mask.include[i] = static_cast<std::uint8_t>(raster.data()[i] != 0.0 && gt_ok);
    }
    return mask;
}

PepResult compute_pep(const DisparityMap& est, const DisparityMap& gt, const RegionMask& mask,
                      double epsilon_d, bool count_invalid_as_error) {
    const int w = gt.width();
    const int h = gt.height();
    if (!est.same_dims(w, h) || mask.width != w || mask.height != h) {
        throw DimensionError("compute_pep: estimate, ground truth and mask must share dimensions");
    }
    if (!(epsilon_d >= 0.0)) {
        throw ParameterError("compute_pep: epsilon_d must be >= 0");
    }

    PepResult result;
    result.region = mask.label;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        if (mask.include[i] == 0 || !DisparityMap::is_valid(gt.data()[i])) {
            continue;
        }
        const float e = est.data()[i];
        if (!DisparityMap::is_valid(e)) {
            if (count_invalid_as_error) {
                ++result.n;
                ++result.errors;
            }
            continue;
        }
        ++result.n;
        if (std::fabs(static_cast<double>(e) - static_cast<double>(gt.data()[i])) > epsilon_d) {
            ++result.errors;
        }
    }
    if (result.n == 0) {
        throw EvaluationError("compute_pep: mask selects no pixels to evaluate");
    }
    result.e_pep = 100.0 * static_cast<double>(result.errors) / static_cast<double>(result.n);
    return result;
}

double compute_mde_s(int width, int height, int d_max, double seconds) {
    if (!(seconds > 0.0)) {
        throw ParameterError("compute_mde_s: runtime must be > 0");
    }
    return static_cast<double>(width) * height * d_max / seconds * 1e-6;
}

}  // namespace fbs
