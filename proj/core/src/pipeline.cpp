#include "fbs/pipeline.hpp"

#include "fbs/aggregation.hpp"
#include "fbs/cost.hpp"
#include "fbs/optimization.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

namespace fbs {
namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
auto timed_stage(const char* stage, double& seconds, F&& f) {
    const auto start = Clock::now();
    try {
        auto result = f();
        seconds = std::chrono::duration<double>(Clock::now() - start).count();
        return result;
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

std::string format_real(double x) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return ec == std::errc{} ? std::string(buf.data(), ptr) : std::to_string(x);
}

double parse_real(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParameterError("config: '" + key + "' expects a number, got '" + value + "'");
    }
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParameterError("config: '" + key + "' expects an integer, got '" + value + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") {
        return true;
    }
    if (value == "false" || value == "0" || value == "off") {
        return false;
    }
    throw ParameterError("config: '" + key + "' expects true/false, got '" + value + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double median(std::vector<double> xs) {
    if (xs.empty()) {
        return 0.0;
    }
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

std::string params_csv(const FbsParams& p) {
    std::ostringstream os;
    os << p.rho_ncc << ',' << p.rho_agg << ',' << format_real(p.gamma_d) << ',' << format_real(p.gamma_r) << ','
       << p.d_min << ',' << p.d_max << ',' << format_real(p.epsilon_d) << ',' << format_real(p.lrc_tolerance);
    return os.str();
}

GrayImage validity_image(const DisparityMap& disp) {
    GrayImage img(disp.width(), disp.height());
    for (int v = 0; v < disp.height(); ++v) {
        for (int u = 0; u < disp.width(); ++u) {
            img(u, v) = disp.valid(u, v) ? 255.0 : 0.0;
        }
    }
    return img;
}

}  // namespace

Estimate estimate_disparity(const GrayImage& left, const GrayImage& right, const FbsParams& params,
                            const StageToggles& toggles, int workers) {
    params.validate();
    if (workers < 1) {
        throw ParameterError("worker count must be >= 1");
    }
    Estimate est;
    StageTimes& t = est.times;

    auto stats = timed_stage("stats", t.stats, [&] {
        return std::pair{compute_block_stats(left, params.rho_ncc), compute_block_stats(right, params.rho_ncc)};
    });
    auto volumes = timed_stage("cost", t.cost, [&] {
        return compute_cost_volumes(left, right, stats.first, stats.second, params, workers);
    });
    est.cost_evaluations = volumes.evaluations;

    if (toggles.aggregation) {
        volumes = timed_stage("aggregation", t.aggregation, [&] {
            const auto spatial = build_spatial_weights(params.rho_agg, params.gamma_d);
            const auto range = build_range_weights(params.gamma_r);
            return CostVolumePair{bilateral_aggregate(volumes.left, left, spatial, range, workers),
                                  bilateral_aggregate(volumes.right, right, spatial, range, workers),
                                  volumes.evaluations};
        });
    }

    auto maps = timed_stage("wta", t.wta, [&] {
        return std::pair{wta_disparity(volumes.left, workers), wta_disparity(volumes.right, workers)};
    });
    est.left_wta = std::move(maps.first);
    est.right_wta = std::move(maps.second);

    est.consistent = toggles.lrc ? timed_stage("lrc", t.lrc, [&] {
        return lrc_check(est.left_wta, est.right_wta, params.lrc_tolerance, workers);
    })
                                 : est.left_wta;

    est.disparity = toggles.subpixel ? timed_stage("subpixel", t.subpixel, [&] {
        return subpixel_refine(est.consistent, volumes.left, workers);
    })
                                     : est.consistent;
    return est;
}

std::string_view sweep_axis_name(SweepAxis axis) noexcept {
    switch (axis) {
        case SweepAxis::GammaD:
            return "gamma_d";
        case SweepAxis::GammaR:
            return "gamma_r";
        case SweepAxis::RhoAgg:
            return "rho_agg";
        case SweepAxis::None:
            break;
    }
    return "none";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) noexcept {
    if (name == "gamma_d" || name == "gamma-d") {
        return SweepAxis::GammaD;
    }
    if (name == "gamma_r" || name == "gamma-r") {
        return SweepAxis::GammaR;
    }
    if (name == "rho_agg" || name == "rho") {
        return SweepAxis::RhoAgg;
    }
    if (name == "none") {
        return SweepAxis::None;
    }
    return std::nullopt;
}

void RunConfig::validate() const {
    params.validate();
    if (workers < 1) {
        throw ParameterError("workers must be >= 1");
    }
    if (repeat < 1) {
        throw ParameterError("repeat must be >= 1");
    }
    if (sweep_axis != SweepAxis::None) {
        if (sweep_values.empty()) {
            throw ParameterError("sweep needs at least one value");
        }
        if (!std::all_of(sweep_values.begin(), sweep_values.end(), [](double x) { return x > 0.0; })) {
            throw ParameterError("sweep values must be positive");
        }
        if (!std::is_sorted(sweep_values.begin(), sweep_values.end())) {
            throw ParameterError("sweep values must be sorted ascending");
        }
    }
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    const auto& p = cfg.params;
    os << "dataset = " << cfg.dataset.string() << '\n'
       << "rho_ncc = " << p.rho_ncc << '\n'
       << "rho_agg = " << p.rho_agg << '\n'
       << "gamma_d = " << format_real(p.gamma_d) << '\n'
       << "gamma_r = " << format_real(p.gamma_r) << '\n'
       << "d_min = " << p.d_min << '\n'
       << "d_max = " << p.d_max << '\n'
       << "epsilon_d = " << format_real(p.epsilon_d) << '\n'
       << "lrc_tolerance = " << format_real(p.lrc_tolerance) << '\n'
       << "aggregation = " << (cfg.toggles.aggregation ? "true" : "false") << '\n'
       << "lrc = " << (cfg.toggles.lrc ? "true" : "false") << '\n'
       << "subpixel = " << (cfg.toggles.subpixel ? "true" : "false") << '\n'
       << "workers = " << cfg.workers << '\n'
       << "repeat = " << cfg.repeat << '\n'
       << "count_invalid_as_error = " << (cfg.count_invalid_as_error ? "true" : "false") << '\n'
       << "out_dir = " << cfg.out_dir.string() << '\n'
       << "sweep_axis = " << sweep_axis_name(cfg.sweep_axis) << '\n'
       << "sweep_values = ";
    for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
        os << (i ? "," : "") << format_real(cfg.sweep_values[i]);
    }
    os << '\n';
    return os.str();
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParameterError("config: expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto& p = cfg.params;
        if (key == "dataset") {
            cfg.dataset = value;
        } else if (key == "rho_ncc") {
            p.rho_ncc = parse_int(key, value);
        } else if (key == "rho_agg") {
            p.rho_agg = parse_int(key, value);
        } else if (key == "gamma_d") {
            p.gamma_d = parse_real(key, value);
        } else if (key == "gamma_r") {
            p.gamma_r = parse_real(key, value);
        } else if (key == "d_min") {
            p.d_min = parse_int(key, value);
        } else if (key == "d_max") {
            p.d_max = parse_int(key, value);
        } else if (key == "epsilon_d") {
            p.epsilon_d = parse_real(key, value);
        } else if (key == "lrc_tolerance") {
            p.lrc_tolerance = parse_real(key, value);
        } else if (key == "aggregation") {
            cfg.toggles.aggregation = parse_bool(key, value);
        } else if (key == "lrc") {
            cfg.toggles.lrc = parse_bool(key, value);
        } else if (key == "subpixel") {
            cfg.toggles.subpixel = parse_bool(key, value);
        } else if (key == "workers") {
            cfg.workers = parse_int(key, value);
        } else if (key == "repeat") {
            cfg.repeat = parse_int(key, value);
        } else if (key == "count_invalid_as_error") {
            cfg.count_invalid_as_error = parse_bool(key, value);
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else if (key == "sweep_axis") {
            const auto axis = parse_sweep_axis(value);
            if (!axis) {
                throw ParameterError("config: unknown sweep axis '" + value + "'");
            }
            cfg.sweep_axis = *axis;
        } else if (key == "sweep_values") {
            cfg.sweep_values.clear();
            std::istringstream vs(value);
            std::string item;
            while (std::getline(vs, item, ',')) {
                item = trim(item);
                if (!item.empty()) {
                    cfg.sweep_values.push_back(parse_real(key, item));
                }
            }
        } else {
            throw ParameterError("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_sweep_value(FbsParams& params, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::GammaD:
            params.gamma_d = value;
            break;
        case SweepAxis::GammaR:
            params.gamma_r = value;
            break;
        case SweepAxis::RhoAgg:
            if (value != static_cast<double>(static_cast<int>(value))) {
                throw ParameterError("rho_agg sweep values must be integers");
            }
            params.rho_agg = static_cast<int>(value);
            break;
        case SweepAxis::None:
            break;
    }
}

std::string metrics_csv_header() {
    return "dataset,rho_ncc,rho_agg,gamma_d,gamma_r,d_min,d_max,epsilon_d,lrc_tolerance,"
           "aggregation,lrc,subpixel,workers,region,n,e_pep,t_total,t_stats,t_cost,t_agg,t_wta,t_lrc,"
           "t_subpixel,mde_s,error";
}

std::vector<std::string> metrics_csv_rows(const RunResult& r) {
    std::vector<std::string> rows;
    const auto& t = r.median_times;
    for (const auto& rep : r.reports) {
        std::ostringstream os;
        os << r.dataset << ',' << params_csv(r.params) << ',' << int{r.toggles.aggregation} << ','
           << int{r.toggles.lrc} << ',' << int{r.toggles.subpixel} << ',' << r.workers << ','
           << region_name(rep.region) << ',' << rep.n << ',' << format_real(rep.e_pep) << ','
           << format_real(rep.runtime_seconds) << ',' << format_real(t.stats) << ',' << format_real(t.cost) << ','
           << format_real(t.aggregation) << ',' << format_real(t.wta) << ',' << format_real(t.lrc) << ','
           << format_real(t.subpixel) << ',' << format_real(rep.mde_per_s) << ',';
        rows.push_back(os.str());
    }
    return rows;
}

std::string metrics_csv_error_row(const std::string& dataset, const FbsParams& params, const std::string& error) {
    std::string clean = error;
    std::replace(clean.begin(), clean.end(), ',', ';');
    std::replace(clean.begin(), clean.end(), '\n', ' ');
    return dataset + ',' + params_csv(params) + ",,,,,error,,,,,,,,,,," + clean;
}

RunResult run_pipeline(const RunConfig& cfg) {
    cfg.validate();
    DatasetSpec spec;
    StereoData data;
    try {
        spec = load_manifest(cfg.dataset);
        data = load_dataset(spec);
    } catch (const std::exception& e) {
        throw StageError("dataset", e.what());
    }

    RunResult result;
    result.dataset = spec.name;
    result.params = cfg.params;
    result.toggles = cfg.toggles;
    result.workers = cfg.workers;

    std::vector<StageTimes> times;
    for (int i = 0; i < cfg.repeat; ++i) {
        result.estimate = estimate_disparity(data.left, data.right, cfg.params, cfg.toggles, cfg.workers);
        times.push_back(result.estimate.times);
        result.total_times.push_back(result.estimate.times.total());
    }
    const auto stage_median = [&](double StageTimes::*field) {
        std::vector<double> xs;
        for (const auto& t : times) {
            xs.push_back(t.*field);
        }
        return median(xs);
    };
    auto& mt = result.median_times;
    mt.stats = stage_median(&StageTimes::stats);
    mt.cost = stage_median(&StageTimes::cost);
    mt.aggregation = stage_median(&StageTimes::aggregation);
    mt.wta = stage_median(&StageTimes::wta);
    mt.lrc = stage_median(&StageTimes::lrc);
    mt.subpixel = stage_median(&StageTimes::subpixel);
    const double t_total = median(result.total_times);

    std::vector<RegionMask> masks;
    try {
        if (!spec.masks.contains(Region::All)) {
            masks.push_back(mask_from_ground_truth(data.gt, Region::All));
        }
        for (const auto& [region, path] : spec.masks) {
            masks.push_back(load_region_mask(path, region, &data.gt));
        }
        for (const auto& mask : masks) {
            const auto pep =
                compute_pep(result.estimate.disparity, data.gt, mask, cfg.params.epsilon_d, cfg.count_invalid_as_error);
            EvalReport rep;
            rep.e_pep = pep.e_pep;
            rep.n = pep.n;
            rep.region = pep.region;
            rep.params = cfg.params;
            rep.runtime_seconds = t_total;
            rep.mde_per_s = t_total > 0.0
                                ? compute_mde_s(data.left.width(), data.left.height(), cfg.params.d_max, t_total)
                                : 0.0;
            result.reports.push_back(rep);
        }
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError("evaluation", e.what());
    }

    if (!cfg.out_dir.empty()) {
        try {
            std::filesystem::create_directories(cfg.out_dir);
            write_disparity(result.estimate.disparity, cfg.out_dir / "disp_left.pgm", DisparityEncoding::GrayScaled,
                            spec.gt_scale);
            write_disparity(result.estimate.disparity, cfg.out_dir / "disp_left.pfm", DisparityEncoding::Pfm);
            write_pgm(validity_image(result.estimate.consistent), cfg.out_dir / "lrc_mask.pgm");
            std::ofstream config(cfg.out_dir / "config.txt");
            config << serialize_config(cfg);
            std::ofstream metrics(cfg.out_dir / "metrics.csv");
            metrics << metrics_csv_header() << '\n';
            for (const auto& row : metrics_csv_rows(result)) {
                metrics << row << '\n';
            }
            if (!config || !metrics) {
                throw IoError("failed writing outputs to " + cfg.out_dir.string());
            }
        } catch (const std::exception& e) {
            throw StageError("output", e.what());
        }
    }
    return result;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.sweep_axis == SweepAxis::None) {
        throw ParameterError("run_sweep: no sweep axis configured");
    }
    std::vector<SweepRow> rows;
    std::vector<std::string> csv;
    const std::string dataset_label = cfg.dataset.stem().string();
    for (double value : cfg.sweep_values) {
        RunConfig point = cfg;
        point.sweep_axis = SweepAxis::None;
        point.sweep_values.clear();
        SweepRow row;
        row.value = value;
        try {
            apply_sweep_value(point.params, cfg.sweep_axis, value);
            if (!cfg.out_dir.empty()) {
                point.out_dir = cfg.out_dir / (std::string(sweep_axis_name(cfg.sweep_axis)) + "_" + format_real(value));
            }
            row.result = run_pipeline(point);
            for (auto& line : metrics_csv_rows(*row.result)) {
                csv.push_back(std::move(line));
            }
        } catch (const std::exception& e) {
            row.error = e.what();
            csv.push_back(metrics_csv_error_row(dataset_label, point.params, row.error));
        }
        rows.push_back(std::move(row));
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream metrics(cfg.out_dir / "metrics.csv");
        metrics << metrics_csv_header() << '\n';
        for (const auto& line : csv) {
            metrics << line << '\n';
        }
        std::ofstream config(cfg.out_dir / "config.txt");
        config << serialize_config(cfg);
    }
    return rows;
}

}  // namespace fbs
