#pragma once

#include "fbs/core.hpp"
#include "fbs/evaluation.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace fbs {

/// Reads P2/P3/P5/P6 rasters with maxval <= 255. Colour images are reduced
/// to luminance 0.299 R + 0.587 G + 0.114 B.
GrayImage load_image(const std::filesystem::path& path);

/// Gray level / gt_scale; level 0 marks unknown disparity and maps to kInvalid.
DisparityMap load_ground_truth(const std::filesystem::path& path, double gt_scale);

enum class DisparityEncoding { GrayScaled, Pfm };

/// GrayScaled: P5 with round(d * gt_scale) clamped to [0, 255], invalid as 0.
/// Pfm: single-channel little-endian float PFM, invalid as +inf.
void write_disparity(const DisparityMap& disp, const std::filesystem::path& path,
                     DisparityEncoding encoding, double gt_scale = 1.0);

/// Reads a single-channel PFM of either endianness.
DisparityMap read_pfm(const std::filesystem::path& path);

/// Writes an 8-bit P5 raster; values are rounded and clamped to [0, 255].
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

/// One stereo pair with ground truth, as described by a `key = value` manifest.
struct DatasetSpec {
    std::string name;
    std::filesystem::path left;
    std::filesystem::path right;
    std::filesystem::path gt;
    double gt_scale = 4.0;
    int d_min = 0;
    int d_max = 60;
    std::map<Region, std::filesystem::path> masks;
};

/// Parses a manifest. Relative paths resolve against the manifest's own
/// directory. With `require_files`, every referenced file must exist.
DatasetSpec load_manifest(const std::filesystem::path& path, bool require_files = true);

struct StereoData {
    GrayImage left;
    GrayImage right;
    DisparityMap gt;
};

StereoData load_dataset(const DatasetSpec& spec);

}  // namespace fbs
