#pragma once

#include "fbs/core.hpp"
#include "fbs/dataset_io.hpp"
#include "fbs/evaluation.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fbs {

struct StageToggles {
    bool aggregation = true;
    bool lrc = true;
    bool subpixel = true;
};

/// Wall-clock seconds spent in each stage of one estimate.
struct StageTimes {
    double stats = 0.0;
    double cost = 0.0;
    double aggregation = 0.0;
    double wta = 0.0;
    double lrc = 0.0;
    double subpixel = 0.0;

    double total() const noexcept { return stats + cost + aggregation + wta + lrc + subpixel; }
};

struct Estimate {
    DisparityMap left_wta;
    DisparityMap right_wta;
    DisparityMap consistent;  // left_wta after the LRC check (or left_wta when LRC is off)
    DisparityMap disparity;   // final left disparity
    std::uint64_t cost_evaluations = 0;
    StageTimes times;
};

/// Error raised by a pipeline stage, carrying the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// cost -> aggregation -> WTA (both views) -> LRC -> subpixel on an
/// in-memory pair. Both disparity maps come from one pair of cost volumes.
Estimate estimate_disparity(const GrayImage& left, const GrayImage& right, const FbsParams& params,
                            const StageToggles& toggles = {}, int workers = 1);

enum class SweepAxis { None, GammaD, GammaR, RhoAgg };

std::string_view sweep_axis_name(SweepAxis axis) noexcept;
std::optional<SweepAxis> parse_sweep_axis(std::string_view name) noexcept;

struct RunConfig {
    std::filesystem::path dataset;  // manifest
    FbsParams params;
    StageToggles toggles;
    int workers = 1;
    int repeat = 5;
    bool count_invalid_as_error = true;
    std::filesystem::path out_dir;  // empty: write nothing
    SweepAxis sweep_axis = SweepAxis::None;
    std::vector<double> sweep_values;

    /// Throws ParameterError on a broken invariant.
    void validate() const;
};

/// `key = value` text; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& cfg);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Applies one sweep value to the matching parameter.
void apply_sweep_value(FbsParams& params, SweepAxis axis, double value);

struct RunResult {
    std::string dataset;
    FbsParams params;
    StageToggles toggles;
    int workers = 1;
    std::vector<EvalReport> reports;  // one per region of interest
    StageTimes median_times;
    std::vector<double> total_times;  // one per repetition
    Estimate estimate;
};

/// Loads the dataset, runs the estimate cfg.repeat times (reporting the
/// median), evaluates every region of interest and, when cfg.out_dir is
/// set, writes metrics.csv, disp_left.pgm, disp_left.pfm, lrc_mask.pgm and
/// config.txt there.
RunResult run_pipeline(const RunConfig& cfg);

struct SweepRow {
    double value = 0.0;
    std::optional<RunResult> result;
    std::string error;
};

/// One run_pipeline per sweep value; failures become error rows and the
/// sweep moves on. Writes metrics.csv (all rows) under cfg.out_dir and
/// each point's artifacts in a subdirectory.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);

std::string metrics_csv_header();
/// One CSV line per region of interest.
std::vector<std::string> metrics_csv_rows(const RunResult& result);
std::string metrics_csv_error_row(const std::string& dataset, const FbsParams& params, const std::string& error);

}  // namespace fbs
