#include "fbs/core.hpp"

#include <algorithm>
#include <cmath>

namespace fbs {

GrayImage::GrayImage(int width, int height, double fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw DimensionError("GrayImage: dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    validate();
}

void GrayImage::validate() const {
    if (width_ <= 0 || height_ <= 0) {
        throw DimensionError("GrayImage: dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(width_) * height_) {
        throw DimensionError("GrayImage: data length does not match width x height");
    }
    const bool in_range = std::all_of(data_.begin(), data_.end(), [](double x) {
        return std::isfinite(x) && x >= 0.0 && x <= 255.0;
    });
    if (!in_range) {
        throw ParameterError("GrayImage: intensities must be finite and within [0, 255]");
    }
}

CostVolume::CostVolume(int width, int height, int d_min, int d_max, float fill)
    : width_(width), height_(height), d_min_(d_min), d_max_(d_max) {
    if (width <= 0 || height <= 0) {
        throw DimensionError("CostVolume: dimensions must be positive");
    }
    if (d_min < 0 || d_max <= d_min) {
        throw ParameterError("CostVolume: require 0 <= d_min < d_max");
    }
    costs_.assign(static_cast<std::size_t>(width) * height * static_cast<std::size_t>(range()), fill);
}

CostVolume::Coord CostVolume::decode(std::size_t index) const noexcept {
    const auto r = static_cast<std::size_t>(range());
    const std::size_t pixel = index / r;
    return {static_cast<int>(pixel % static_cast<std::size_t>(width_)),
            static_cast<int>(pixel / static_cast<std::size_t>(width_)),
            static_cast<int>(index % r) + d_min_};
}

DisparityMap::DisparityMap(int width, int height, float fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw DimensionError("DisparityMap: dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
}

std::size_t DisparityMap::valid_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(), is_valid));
}

void FbsParams::validate() const {
    if (rho_ncc < 1) {
        throw ParameterError("rho_ncc must be >= 1");
    }
    if (rho_agg < 0) {
        throw ParameterError("rho_agg must be >= 0");
    }
    if (!(gamma_d > 0.0)) {
        throw ParameterError("gamma_d must be > 0");
    }
    if (!(gamma_r > 0.0)) {
        throw ParameterError("gamma_r must be > 0");
    }
    if (d_min < 0 || d_max <= d_min) {
        throw ParameterError("disparity bounds must satisfy 0 <= d_min < d_max");
    }
    if (!(epsilon_d >= 0.0)) {
        throw ParameterError("epsilon_d must be >= 0");
    }
    if (!(lrc_tolerance >= 0.0)) {
        throw ParameterError("lrc_tolerance must be >= 0");
    }
}

}  // namespace fbs
