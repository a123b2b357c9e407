#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbs {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Marker stored in cost volumes for entries with no defined NCC value.
/// Strictly below the legal correlation range [-1, 1].
inline constexpr float kCostSentinel = -2.0f;

/// Sentinel test with margin; any stored value below -1.5 is undefined.
constexpr bool is_defined_cost(float c) noexcept { return c > -1.5f; }

/// Single-channel intensity raster, row-major, values in [0, 255].
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, double fill = 0.0);
    GrayImage(int width, int height, std::vector<double> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    double operator()(int u, int v) const noexcept { return data_[static_cast<std::size_t>(v) * width_ + u]; }
    double& operator()(int u, int v) noexcept { return data_[static_cast<std::size_t>(v) * width_ + u]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<const double> row(int v) const noexcept {
        return {data_.data() + static_cast<std::size_t>(v) * width_, static_cast<std::size_t>(width_)};
    }

    bool same_dims(int w, int h) const noexcept { return w == width_ && h == height_; }

    /// Throws DimensionError / ParameterError when an invariant is broken.
    void validate() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Per-pixel block mean and standard deviation over a (2r+1)^2 window.
/// Pixels whose window does not fit inside the image are undefined.
struct BlockStats {
    int width = 0;
    int height = 0;
    int radius = 0;
    std::vector<double> mean;
    std::vector<double> stddev;

    bool defined(int u, int v) const noexcept {
        return u >= radius && v >= radius && u < width - radius && v < height - radius;
    }
    double mean_at(int u, int v) const noexcept { return mean[static_cast<std::size_t>(v) * width + u]; }
    double stddev_at(int u, int v) const noexcept { return stddev[static_cast<std::size_t>(v) * width + u]; }
};

/// Dense (u, v, d) volume, contiguous in d for a fixed pixel.
class CostVolume {
public:
    CostVolume() = default;
    CostVolume(int width, int height, int d_min, int d_max, float fill = kCostSentinel);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int d_min() const noexcept { return d_min_; }
    int d_max() const noexcept { return d_max_; }
    int range() const noexcept { return d_max_ - d_min_ + 1; }

    std::size_t index(int u, int v, int d) const noexcept {
        return (static_cast<std::size_t>(v) * width_ + u) * static_cast<std::size_t>(range()) +
               static_cast<std::size_t>(d - d_min_);
    }

    struct Coord {
        int u;
        int v;
        int d;
        bool operator==(const Coord&) const = default;
    };
    Coord decode(std::size_t index) const noexcept;

    float at(int u, int v, int d) const noexcept { return costs_[index(u, v, d)]; }
    float& at(int u, int v, int d) noexcept { return costs_[index(u, v, d)]; }

    /// All disparities of one pixel, ordered from d_min to d_max.
    std::span<const float> column(int u, int v) const noexcept {
        return {costs_.data() + index(u, v, d_min_), static_cast<std::size_t>(range())};
    }
    std::span<float> column(int u, int v) noexcept {
        return {costs_.data() + index(u, v, d_min_), static_cast<std::size_t>(range())};
    }

    std::span<const float> costs() const noexcept { return costs_; }
    std::span<float> costs() noexcept { return costs_; }

    bool same_shape(const CostVolume& o) const noexcept {
        return width_ == o.width_ && height_ == o.height_ && d_min_ == o.d_min_ && d_max_ == o.d_max_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    int d_min_ = 0;
    int d_max_ = 1;
    std::vector<float> costs_;
};

/// Real-valued disparity raster. Rejected or undefined pixels hold kInvalid.
class DisparityMap {
public:
    static constexpr float kInvalid = std::numeric_limits<float>::infinity();
    static constexpr bool is_valid(float d) noexcept { return d != kInvalid && d == d; }

    DisparityMap() = default;
    DisparityMap(int width, int height, float fill = kInvalid);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    float operator()(int u, int v) const noexcept { return data_[static_cast<std::size_t>(v) * width_ + u]; }
    float& operator()(int u, int v) noexcept { return data_[static_cast<std::size_t>(v) * width_ + u]; }
    bool valid(int u, int v) const noexcept { return is_valid((*this)(u, v)); }

    std::span<const float> data() const noexcept { return data_; }
    std::span<float> data() noexcept { return data_; }

    bool same_dims(int w, int h) const noexcept { return w == width_ && h == height_; }
    std::size_t valid_count() const noexcept;

    bool operator==(const DisparityMap&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> data_;
};

/// Every tunable of the matcher.
struct FbsParams {
    int rho_ncc = 1;          // NCC block half-width
    int rho_agg = 6;          // aggregation half-width
    double gamma_d = 5.0;     // spatial falloff
    double gamma_r = 30.0;    // range falloff
    int d_min = 0;
    int d_max = 60;
    double epsilon_d = 2.0;   // error threshold for PEP
    double lrc_tolerance = 1.0;

    int block_pixels() const noexcept { return (2 * rho_ncc + 1) * (2 * rho_ncc + 1); }

    /// Throws ParameterError describing the first violated constraint.
    void validate() const;
};

}  // namespace fbs
