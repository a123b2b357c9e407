#include "fbs/dataset_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fbs {
namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

// Cursor over a PNM/PFM header: whitespace separated tokens with '#' comments.
class HeaderReader {
public:
    HeaderReader(const std::string& bytes, const std::filesystem::path& path) : bytes_(bytes), path_(path) {}

    std::string token() {
        skip_space_and_comments();
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            throw IoError(path_.string() + ": truncated header");
        }
        return bytes_.substr(start, pos_ - start);
    }

    long integer() {
        const std::string t = token();
        long value = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
        if (ec != std::errc{} || ptr != t.data() + t.size()) {
            throw IoError(path_.string() + ": malformed header value '" + t + "'");
        }
        return value;
    }

    double real() {
        const std::string t = token();
        try {
            std::size_t used = 0;
            const double value = std::stod(t, &used);
            if (used == t.size()) {
                return value;
            }
        } catch (const std::exception&) {
        }
        throw IoError(path_.string() + ": malformed header value '" + t + "'");
    }

    // Binary payloads start after exactly one whitespace byte.
    std::size_t payload_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw IoError(path_.string() + ": truncated header");
        }
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& bytes_;
    const std::filesystem::path& path_;
    std::size_t pos_ = 0;
};

// 0.299 R + 0.587 G + 0.114 B, with the weights scaled to integers so that
// gray pixels (R = G = B) map back to exactly their level.
double luminance(double r, double g, double b) noexcept { return (299.0 * r + 587.0 * g + 114.0 * b) / 1000.0; }

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

void write_bytes(const std::filesystem::path& path, const std::string& header, const char* data, std::size_t n) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << header;
    out.write(data, static_cast<std::streamsize>(n));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    HeaderReader header(bytes, path);
    const std::string magic = header.token();
    if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6") {
        throw IoError(path.string() + ": unsupported magic number '" + magic + "'");
    }
    const long width = header.integer();
    const long height = header.integer();
    const long maxval = header.integer();
    if (width <= 0 || height <= 0) {
        throw IoError(path.string() + ": invalid dimensions");
    }
    if (maxval <= 0 || maxval > 255) {
        throw IoError(path.string() + ": maxval must be in [1, 255]");
    }

    const bool colour = magic == "P3" || magic == "P6";
    const int channels = colour ? 3 : 1;
    const auto pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t samples = pixels * channels;
    std::vector<double> raw(samples);

    if (magic == "P5" || magic == "P6") {
        const std::size_t offset = header.payload_offset();
        if (bytes.size() < offset + samples) {
            throw IoError(path.string() + ": truncated payload");
        }
        for (std::size_t i = 0; i < samples; ++i) {
            raw[i] = static_cast<unsigned char>(bytes[offset + i]);
        }
    } else {
        for (std::size_t i = 0; i < samples; ++i) {
            long value = 0;
            try {
                value = header.integer();
            } catch (const IoError&) {
                throw IoError(path.string() + ": truncated payload");
            }
            if (value < 0 || value > maxval) {
                throw IoError(path.string() + ": sample exceeds maxval");
            }
            raw[i] = static_cast<double>(value);
        }
    }

    for (double s : raw) {
        if (s > static_cast<double>(maxval)) {
            throw IoError(path.string() + ": sample exceeds maxval");
        }
    }

    if (!colour) {
        return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(raw));
    }
    std::vector<double> gray(pixels);
    for (std::size_t i = 0; i < pixels; ++i) {
        gray[i] = luminance(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]);
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(gray));
}

DisparityMap load_ground_truth(const std::filesystem::path& path, double gt_scale) {
    if (!(gt_scale > 0.0)) {
        throw ParameterError("load_ground_truth: gt_scale must be > 0");
    }
    const GrayImage img = load_image(path);
    DisparityMap gt(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double level = img.data()[i];
        if (level != 0.0) {
            gt.data()[i] = static_cast<float>(level / gt_scale);
        }
    }
    return gt;
}

void write_disparity(const DisparityMap& disp, const std::filesystem::path& path, DisparityEncoding encoding,
                     double gt_scale) {
    const int w = disp.width();
    const int h = disp.height();
    if (encoding == DisparityEncoding::GrayScaled) {
        if (!(gt_scale > 0.0)) {
            throw ParameterError("write_disparity: gt_scale must be > 0");
        }
        std::string payload(disp.size(), '\0');
        for (std::size_t i = 0; i < disp.size(); ++i) {
            const float d = disp.data()[i];
            if (DisparityMap::is_valid(d)) {
                const double level = std::clamp(std::round(static_cast<double>(d) * gt_scale), 0.0, 255.0);
                payload[i] = static_cast<char>(static_cast<unsigned char>(level));
            }
        }
        const std::string header = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
        write_bytes(path, header, payload.data(), payload.size());
        return;
    }

    // PFM rows run bottom to top; a negative scale marks little-endian data.
    std::vector<std::uint32_t> words(disp.size());
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            auto bits = std::bit_cast<std::uint32_t>(disp(u, v));
            if constexpr (std::endian::native == std::endian::big) {
                bits = ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) | (bits >> 24);
            }
            words[static_cast<std::size_t>(h - 1 - v) * w + u] = bits;
        }
    }
    const std::string header = "Pf\n" + std::to_string(w) + " " + std::to_string(h) + "\n-1.0\n";
    write_bytes(path, header, reinterpret_cast<const char*>(words.data()), words.size() * sizeof(std::uint32_t));
}

DisparityMap read_pfm(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    HeaderReader header(bytes, path);
    const std::string magic = header.token();
    if (magic != "Pf") {
        throw IoError(path.string() + ": expected single-channel PFM ('Pf')");
    }
    const long width = header.integer();
    const long height = header.integer();
    const double scale = header.real();
    if (width <= 0 || height <= 0 || scale == 0.0) {
        throw IoError(path.string() + ": invalid PFM header");
    }
    const std::size_t offset = header.payload_offset();
    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() < offset + count * 4) {
        throw IoError(path.string() + ": truncated payload");
    }
    const bool file_little = scale < 0.0;
    const bool swap = file_little != (std::endian::native == std::endian::little);

    DisparityMap disp(static_cast<int>(width), static_cast<int>(height));
    for (long v = 0; v < height; ++v) {
        for (long u = 0; u < width; ++u) {
            std::uint32_t bits = 0;
            std::memcpy(&bits, bytes.data() + offset + (static_cast<std::size_t>(height - 1 - v) * width + u) * 4, 4);
            if (swap) {
                bits = ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) | (bits >> 24);
            }
            disp(static_cast<int>(u), static_cast<int>(v)) = std::bit_cast<float>(bits);
        }
    }
    return disp;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::string payload(img.size(), '\0');
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double level = std::clamp(std::round(img.data()[i]), 0.0, 255.0);
        payload[i] = static_cast<char>(static_cast<unsigned char>(level));
    }
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    write_bytes(path, header, payload.data(), payload.size());
}

DatasetSpec load_manifest(const std::filesystem::path& path, bool require_files) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open manifest " + path.string());
    }
    const std::filesystem::path base = path.parent_path();
    const auto resolve = [&](const std::string& value) {
        const std::filesystem::path p(value);
        return p.is_absolute() ? p : base / p;
    };
    const auto parse_int = [&](const std::string& key, const std::string& value) {
        int out = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            throw IoError(path.string() + ": '" + key + "' is not an integer");
        }
        return out;
    };

    DatasetSpec spec;
    bool has_left = false;
    bool has_right = false;
    bool has_gt = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "name") {
            spec.name = value;
        } else if (key == "left") {
            spec.left = resolve(value);
            has_left = true;
        } else if (key == "right") {
            spec.right = resolve(value);
            has_right = true;
        } else if (key == "gt") {
            spec.gt = resolve(value);
            has_gt = true;
        } else if (key == "gt_scale") {
            try {
                spec.gt_scale = std::stod(value);
            } catch (const std::exception&) {
                throw IoError(path.string() + ": 'gt_scale' is not a number");
            }
        } else if (key == "d_min") {
            spec.d_min = parse_int(key, value);
        } else if (key == "d_max") {
            spec.d_max = parse_int(key, value);
        } else if (key.starts_with("masks.")) {
            const auto region = parse_region(key.substr(6));
            if (!region) {
                throw IoError(path.string() + ": unknown mask region '" + key.substr(6) + "'");
            }
            spec.masks[*region] = resolve(value);
        } else {
            throw IoError(path.string() + ": unknown key '" + key + "'");
        }
    }

    if (!has_left || !has_right || !has_gt) {
        throw IoError(path.string() + ": manifest needs left, right and gt entries");
    }
    if (spec.name.empty()) {
        spec.name = path.stem().string();
    }
    if (!(spec.gt_scale > 0.0)) {
        throw IoError(path.string() + ": gt_scale must be > 0");
    }
    if (spec.d_min < 0 || spec.d_max <= spec.d_min) {
        throw IoError(path.string() + ": require 0 <= d_min < d_max");
    }
    if (require_files) {
        std::vector<std::filesystem::path> files{spec.left, spec.right, spec.gt};
        for (const auto& [region, p] : spec.masks) {
            files.push_back(p);
        }
        for (const auto& f : files) {
            if (!std::filesystem::exists(f)) {
                throw IoError(path.string() + ": missing file " + f.string());
            }
        }
    }
    return spec;
}

StereoData load_dataset(const DatasetSpec& spec) {
    StereoData data{load_image(spec.left), load_image(spec.right), load_ground_truth(spec.gt, spec.gt_scale)};
    if (!data.right.same_dims(data.left.width(), data.left.height()) ||
        !data.gt.same_dims(data.left.width(), data.left.height())) {
        throw DimensionError(spec.name + ": left, right and ground truth sizes differ");
    }
    return data;
}

}  // namespace fbs
