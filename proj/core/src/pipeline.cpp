#include "hawkes/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <functional>

namespace hawkes {

using nlohmann::json;

void RunConfig::validate() const {
    covariance.validate();
    if (input_path.empty()) throw ValidationError("RunConfig: input path is required");
    if (out_dir.empty()) throw ValidationError("RunConfig: output directory is required");
    if (mode == EstimatorMode::bisymmetric_2d && input_kind == InputKind::events) {
        // dimension is checked against the parsed file later
    }
    if (input_kind == InputKind::prices && mode == EstimatorMode::one_dimensional)
        throw ValidationError("RunConfig: price input implies the 2d-bisym estimator");
}

FitRange default_fit_range(double delta, double tau_max) {
    return FitRange{2.0 * delta, tau_max / 2.0};
}

namespace {

template <typename F>
auto stage(const std::string& name, const std::string& fingerprint, F&& f) {
    try {
        return f();
    } catch (const ValidationError& e) {
        throw ValidationError("pipeline stage '" + name + "' (input " + fingerprint +
                              "): " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError("pipeline stage '" + name + "' (input " + fingerprint +
                             "): " + e.what());
    }
}

} // namespace

PipelineResult run_pipeline(const RunConfig& cfg) {
    cfg.validate();
    const std::string fp = file_fingerprint(cfg.input_path);
    WarningList warnings;
    json diag;
    diag["input"] = cfg.input_path;
    diag["input_fingerprint"] = fp;
    diag["h"] = cfg.covariance.h;
    diag["delta"] = cfg.covariance.delta;
    diag["tau_max"] = cfg.covariance.tau_max;
    diag["mode"] = cfg.mode == EstimatorMode::one_dimensional ? "1d" : "2d-bisym";
    diag["min_events"] = cfg.min_events;
    diag["seed"] = cfg.seed;

    // --- ingest + windowing -> one EventSeries per day ---
    std::vector<WindowedSeries> days;
    WindowDropReport drops;
    if (cfg.input_kind == InputKind::events) {
        const int expected = cfg.mode == EstimatorMode::bisymmetric_2d ? 2 : 0;
        auto events = stage("parse_events", fp, [&] { return parse_events(cfg.input_path, expected, &warnings); });
        if (cfg.mode == EstimatorMode::one_dimensional && events.n != 1)
            throw ValidationError("pipeline: 1d mode requires 1-component input, got " +
                                  std::to_string(events.n));
        if (!cfg.windows_path.empty()) {
            const auto windows = stage("load_windows", fp, [&] { return load_windows(cfg.windows_path); });
            days = stage("window_and_split", fp,
                         [&] { return window_and_split(events, windows, cfg.min_events, &drops); });
        } else {
            days.push_back(WindowedSeries{"all", std::move(events)});
        }
    } else {
        auto prices = stage("parse_prices", fp, [&] { return parse_prices(cfg.input_path, &warnings); });
        if (!cfg.windows_path.empty()) {
            const auto windows = stage("load_windows", fp, [&] { return load_windows(cfg.windows_path); });
            days = stage("window_and_split", fp,
                         [&] { return window_and_split(prices, windows, cfg.min_events, &drops); });
        } else {
            auto events = stage("midprice_to_updown", fp, [&] { return midprice_to_updown(prices, &warnings); });
            // rebase to the price window
            const double start = events.t_start;
            for (auto& comp : events.events)
                for (auto& t : comp) t -= start;
            events.t_end -= start;
            events.t_start = 0.0;
            days.push_back(WindowedSeries{"all", std::move(events)});
        }
    }
    if (days.empty())
        throw ValidationError("pipeline: no usable windows (all below min_events=" +
                              std::to_string(cfg.min_events) + ")");
    diag["days_used"] = days.size();
    diag["days_dropped"] = drops.dropped_labels;

    // --- per-day covariance and rates ---
    std::vector<SampledMatrixFunction> covs;
    std::vector<Vec> day_rates;
    for (const auto& day : days) {
        covs.push_back(stage("estimate_covariance (" + day.label + ")", fp,
                             [&] { return estimate_covariance(day.events, cfg.covariance, &warnings); }));
        day_rates.push_back(stage("estimate_mean_intensity (" + day.label + ")", fp, [&] {
                                return estimate_mean_intensity(day.events, &warnings);
                            }).lambda_bar);
    }
    auto averaged = stage("average_covariances", fp, [&] { return average_covariances(covs); });

    const int n = averaged.n;
    Vec mean_rate = Vec::Zero(n);
    for (const auto& r : day_rates) mean_rate += r;
    mean_rate /= static_cast<double>(day_rates.size());

    json rate_rows = json::array();
    for (std::size_t d = 0; d < days.size(); ++d) {
        json row;
        row["label"] = days[d].label;
        for (int i = 0; i < n; ++i) row["lambda" + std::to_string(i + 1)] = day_rates[d][i];
        rate_rows.push_back(row);
    }
    diag["per_day_rates"] = rate_rows;

    PipelineResult result;

    // --- mode-specific preparation ---
    double lambda_bar = 0.0;
    if (cfg.mode == EstimatorMode::bisymmetric_2d) {
        const auto report = stage("check_bisymmetry", fp, [&] { return check_bisymmetry(averaged); });
        diag["bisymmetry_deviation_diag"] = report.diag_deviation;
        diag["bisymmetry_deviation_cross"] = report.cross_deviation;
        averaged = stage("symmetrize_bisym", fp, [&] { return symmetrize_bisym(averaged); });
        lambda_bar = 0.5 * (mean_rate[0] + mean_rate[1]);
    } else {
        lambda_bar = mean_rate[0];
    }
    if (!(lambda_bar > 0.0))
        throw NumericalError("pipeline: estimated mean rate is not positive; cannot estimate");
    diag["lambda_bar"] = lambda_bar;

    // --- estimation ---
    result.kernel = stage("estimate_kernel", fp, [&] {
        return cfg.mode == EstimatorMode::bisymmetric_2d
                   ? estimate_kernel_2d_bisym(averaged, lambda_bar)
                   : estimate_kernel_1d(averaged, lambda_bar);
    });
    result.covariance = std::move(averaged);
    result.lambda_bar = lambda_bar;

    // --- optional power-law fit ---
    if (cfg.run_fit) {
        const FitRange range =
            cfg.fit.value_or(default_fit_range(cfg.covariance.delta, cfg.covariance.tau_max));
        // in 2d the anti-diagonal kernel is the object of interest when the
        // diagonal one is negligible; fit both and report
        const int col = cfg.mode == EstimatorMode::bisymmetric_2d ? 1 : 0;
        result.fit = stage("powerlaw_fit", fp,
                           [&] { return powerlaw_fit(result.kernel, range.t_lo, range.t_hi, 0, col); });
    }

    // --- artifacts ---
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const auto path = [&](const char* name) { return (fs::path(cfg.out_dir) / name).string(); };

    result.covariance_csv = path("covariance.csv");
    result.covariance_sidecar = path("covariance.json");
    write_covariance(result.covariance_csv, result.covariance_sidecar, result.covariance, mean_rate);

    result.kernel_csv = path("kernel.csv");
    result.kernel_sidecar = path("kernel.json");
    write_kernel(result.kernel_csv, result.kernel_sidecar, result.kernel);

    if (result.fit) {
        json fit;
        fit["alpha"] = result.fit->alpha;
        fit["beta"] = result.fit->beta;
        fit["t_lo"] = result.fit->t_lo;
        fit["t_hi"] = result.fit->t_hi;
        fit["residual_rms_log"] = result.fit->residual_rms_log;
        fit["points_used"] = result.fit->points_used;
        fit["points_excluded"] = result.fit->points_excluded;
        result.fit_json = path("fit.json");
        atomic_write_text(result.fit_json, fit.dump(2) + "\n");
    }

    diag["warnings"] = warnings;
    diag["rng_algorithm"] = rng_algorithm();
    diag["clip_count"] = result.kernel.clip_count;
    diag["neg_mass_ratio"] = result.kernel.neg_mass_ratio;
    diag["aliasing_top_decade"] = result.kernel.aliasing_top_decade;
    result.diagnostics_json = path("diagnostics.json");
    atomic_write_text(result.diagnostics_json, diag.dump(2) + "\n");
    return result;
}

} // namespace hawkes
