// Command line surface for the Hawkes simulation / estimation library.
//
// Subcommands: simulate, cov, estimate, fit, errors, pipeline.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include "hawkes/analysis.hpp"
#include "hawkes/event_io.hpp"
#include "hawkes/pipeline.hpp"
#include "hawkes/simulate.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

hawkes::FitRange parse_fit_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw hawkes::ValidationError("--fit-range expects t_lo:t_hi, got '" + s + "'");
    try {
        return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw hawkes::ValidationError("--fit-range expects numbers t_lo:t_hi, got '" + s + "'");
    }
}

void print_warnings(const hawkes::WarningList& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string join_path(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

int cmd_simulate(const std::string& spec_path, double horizon, std::uint64_t seed, double burn_in,
                 std::size_t max_events, const std::string& out_path) {
    const auto file = hawkes::load_kernel_spec(spec_path);
    hawkes::SimConfig cfg;
    cfg.horizon = horizon;
    cfg.seed = seed;
    cfg.burn_in = burn_in;
    cfg.max_events = max_events;
    hawkes::WarningList warnings;
    const auto events = hawkes::simulate(file.spec, file.mu, cfg, &warnings);
    print_warnings(warnings);
    hawkes::write_events(out_path, events);
    std::cout << "simulated " << events.total_events() << " events over T=" << horizon
              << " (rng " << hawkes::rng_algorithm() << ", seed " << seed << ") -> " << out_path
              << "\n";
    return 0;
}

int cmd_cov(const std::string& input, double h, double delta, double tau_max,
            const std::string& out_dir) {
    hawkes::CovarianceConfig cfg;
    cfg.h = h;
    cfg.delta = delta > 0.0 ? delta : h;
    cfg.tau_max = tau_max;
    hawkes::WarningList warnings;
    const auto events = hawkes::parse_events(input, 0, &warnings);
    const auto cov = hawkes::estimate_covariance(events, cfg, &warnings);
    const auto lam = hawkes::estimate_mean_intensity(events, &warnings);
    print_warnings(warnings);
    fs::create_directories(out_dir);
    hawkes::write_covariance(join_path(out_dir, "covariance.csv"), join_path(out_dir, "covariance.json"),
                             cov, lam.lambda_bar);
    std::cout << "covariance on " << cov.grid_size() << " lags -> " << out_dir << "\n";
    return 0;
}

int cmd_estimate(const std::string& cov_csv, const std::string& mode, const std::string& out_dir) {
    const std::string sidecar = fs::path(cov_csv).replace_extension(".json").string();
    auto file = hawkes::load_covariance(cov_csv, sidecar);
    hawkes::EstimatedKernel kernel;
    if (mode == "1d") {
        kernel = hawkes::estimate_kernel_1d(file.cov, file.lambda_bar[0]);
    } else if (mode == "2d-bisym") {
        const auto report = hawkes::check_bisymmetry(file.cov);
        std::cerr << "bisymmetry deviations: diag " << report.diag_deviation << ", cross "
                  << report.cross_deviation << "\n";
        const double lam = 0.5 * (file.lambda_bar[0] + file.lambda_bar[1]);
        kernel = hawkes::estimate_kernel_2d_bisym(hawkes::symmetrize_bisym(file.cov), lam);
    } else {
        throw hawkes::ValidationError("--mode must be 1d or 2d-bisym");
    }
    fs::create_directories(out_dir);
    hawkes::write_kernel(join_path(out_dir, "kernel.csv"), join_path(out_dir, "kernel.json"), kernel);
    std::cout << "estimated kernel on " << kernel.grid_points() << " points -> " << out_dir
              << " (clip_count " << kernel.clip_count << ", neg_mass " << kernel.neg_mass_ratio
              << ")\n";
    return 0;
}

int cmd_fit(const std::string& kernel_csv, const std::string& range_str, const std::string& out_path,
            int column) {
    const std::string sidecar = fs::path(kernel_csv).replace_extension(".json").string();
    const auto kernel = hawkes::load_kernel(kernel_csv, sidecar);
    hawkes::FitRange range = range_str.empty()
                                 ? hawkes::default_fit_range(kernel.delta, kernel.tau_max)
                                 : parse_fit_range(range_str);
    const int col = column >= 0 ? column : (kernel.n == 2 ? 1 : 0);
    const auto rep = hawkes::powerlaw_fit(kernel, range.t_lo, range.t_hi, 0, col);
    json j;
    j["alpha"] = rep.alpha;
    j["beta"] = rep.beta;
    j["t_lo"] = rep.t_lo;
    j["t_hi"] = rep.t_hi;
    j["residual_rms_log"] = rep.residual_rms_log;
    j["points_used"] = rep.points_used;
    j["points_excluded"] = rep.points_excluded;
    hawkes::atomic_write_text(out_path, j.dump(2) + "\n");
    std::printf("fit alpha=%.6g beta=%.6g (residual rms %.3g, %d points) -> %s\n", rep.alpha,
                rep.beta, rep.residual_rms_log, rep.points_used, out_path.c_str());
    return 0;
}

int cmd_errors(const std::string& study, const std::string& spec_path, const std::string& out_dir,
               std::vector<double> horizons, std::vector<double> deltas, int n_seeds,
               std::uint64_t seed_base, double h, double delta, double tau_max,
               std::vector<double> t_values) {
    const auto file = hawkes::load_kernel_spec(spec_path);
    fs::create_directories(out_dir);
    hawkes::CovarianceConfig cfg;
    cfg.h = h;
    cfg.delta = delta > 0.0 ? delta : h;
    cfg.tau_max = tau_max;

    std::vector<std::uint64_t> seeds;
    for (int s = 0; s < n_seeds; ++s) seeds.push_back(seed_base + static_cast<std::uint64_t>(s));

    if (study == "convergence") {
        if (horizons.empty()) throw hawkes::ValidationError("--T-list is required for convergence");
        const auto res = hawkes::convergence_study(file.spec, file.mu, horizons, seeds, cfg);
        std::string csv = "T,seed,e2\n";
        for (const auto& p : res.points) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%.12g,%llu,%.12g\n", p.horizon,
                          static_cast<unsigned long long>(p.seed), p.e2);
            csv += buf;
        }
        hawkes::atomic_write_text(join_path(out_dir, "convergence.csv"), csv);
        json j;
        j["slope"] = res.slope;
        j["intercept"] = res.intercept;
        j["points"] = res.points.size();
        hawkes::atomic_write_text(join_path(out_dir, "convergence.json"), j.dump(2) + "\n");
        std::cout << "convergence slope " << res.slope << " over " << res.points.size()
                  << " runs -> " << out_dir << "\n";
        return 0;
    }
    if (study == "pointwise") {
        if (t_values.empty()) throw hawkes::ValidationError("--t-values is required for pointwise");
        if (horizons.size() != 1)
            throw hawkes::ValidationError("pointwise expects exactly one --T-list value");
        const auto res = hawkes::pointwise_error_samples(file.spec, file.mu, cfg, horizons[0],
                                                         n_seeds, t_values, seed_base);
        std::string csv = "t,normal_quantile,empirical_quantile\n";
        for (std::size_t i = 0; i < res.t_values.size(); ++i)
            for (const auto& [nq, eq] : res.qq[i]) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", res.t_values[i], nq, eq);
                csv += buf;
            }
        hawkes::atomic_write_text(join_path(out_dir, "qq.csv"), csv);
        json j;
        for (std::size_t i = 0; i < res.t_values.size(); ++i) {
            json row;
            row["t"] = res.t_values[i];
            double var = 0.0, mean = 0.0;
            for (double e : res.errors[i]) mean += e;
            mean /= static_cast<double>(res.errors[i].size());
            for (double e : res.errors[i]) var += (e - mean) * (e - mean);
            var /= static_cast<double>(res.errors[i].size() - 1);
            row["error_mean"] = mean;
            row["error_variance"] = var;
            j.push_back(row);
        }
        hawkes::atomic_write_text(join_path(out_dir, "pointwise.json"), j.dump(2) + "\n");
        std::cout << "pointwise errors at " << res.t_values.size() << " grid times over " << n_seeds
                  << " seeds -> " << out_dir << "\n";
        return 0;
    }
    if (study == "delta-sweep") {
        if (deltas.empty()) throw hawkes::ValidationError("--delta-list is required for delta-sweep");
        if (horizons.size() != 1)
            throw hawkes::ValidationError("delta-sweep expects exactly one --T-list value");
        const auto res = hawkes::delta_sweep(file.spec, file.mu, horizons[0], deltas, tau_max, seeds);
        std::string csv = "delta,tau_max_effective,e2\n";
        for (const auto& row : res.rows) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", row.delta, row.tau_max_effective,
                          row.e2);
            csv += buf;
        }
        hawkes::atomic_write_text(join_path(out_dir, "delta_sweep.csv"), csv);
        json j;
        j["argmin_delta"] = res.argmin_delta;
        hawkes::atomic_write_text(join_path(out_dir, "delta_sweep.json"), j.dump(2) + "\n");
        std::cout << "delta sweep argmin " << res.argmin_delta << " -> " << out_dir << "\n";
        return 0;
    }
    throw hawkes::ValidationError("--study must be convergence, pointwise or delta-sweep");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multivariate Hawkes process simulation and non-parametric kernel estimation"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate a Hawkes path by thinning");
    std::string sim_spec, sim_out = "events.csv";
    double sim_horizon = 0.0, sim_burn = -1.0;
    std::uint64_t sim_seed = 0;
    std::size_t sim_max_events = 50'000'000;
    sim->add_option("--kernel-spec", sim_spec, "Kernel spec JSON")->required();
    sim->add_option("--T", sim_horizon, "Horizon in seconds")->required();
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--burn-in", sim_burn, "Burn-in seconds (< 0 picks the default)");
    sim->add_option("--max-events", sim_max_events, "Safety cap");
    sim->add_option("--out", sim_out, "Output events CSV");

    // cov
    auto* cov = app.add_subcommand("cov", "Estimate the binned covariance from events");
    std::string cov_in, cov_out = ".";
    double cov_h = 0.0, cov_delta = 0.0, cov_tau = 0.0;
    cov->add_option("--input", cov_in, "Events CSV")->required();
    cov->add_option("--h", cov_h, "Bin scale")->required();
    cov->add_option("--delta", cov_delta, "Sampling period (default h)");
    cov->add_option("--tau-max", cov_tau, "Maximum lag")->required();
    cov->add_option("--out", cov_out, "Output directory");

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate the kernel from a covariance file");
    std::string est_in, est_mode = "1d", est_out = ".";
    est->add_option("--input", est_in, "covariance.csv (sidecar .json alongside)")->required();
    est->add_option("--mode", est_mode, "1d or 2d-bisym")->check(CLI::IsMember({"1d", "2d-bisym"}));
    est->add_option("--out", est_out, "Output directory");

    // fit
    auto* fit = app.add_subcommand("fit", "Power-law fit of an estimated kernel");
    std::string fit_in, fit_range, fit_out = "fit.json";
    int fit_col = -1;
    fit->add_option("--input", fit_in, "kernel.csv (sidecar .json alongside)")->required();
    fit->add_option("--fit-range", fit_range, "t_lo:t_hi (default 2*delta:tau_max/2)");
    fit->add_option("--column", fit_col, "Kernel entry column (default: anti-diagonal for 2d)");
    fit->add_option("--out", fit_out, "Output JSON");

    // errors
    auto* err = app.add_subcommand("errors", "Monte-Carlo error studies on a known spec");
    std::string err_study, err_spec, err_out = ".";
    std::vector<double> err_horizons, err_deltas, err_tvals;
    int err_seeds = 5;
    std::uint64_t err_seed_base = 1;
    double err_h = 0.0, err_delta = 0.0, err_tau = 0.0;
    err->add_option("--study", err_study, "convergence | pointwise | delta-sweep")->required();
    err->add_option("--kernel-spec", err_spec, "Kernel spec JSON")->required();
    err->add_option("--T-list", err_horizons, "Sample lengths")->delimiter(',');
    err->add_option("--delta-list", err_deltas, "Sampling periods for delta-sweep")->delimiter(',');
    err->add_option("--t-values", err_tvals, "Grid times for pointwise")->delimiter(',');
    err->add_option("--seeds", err_seeds, "Number of seeds");
    err->add_option("--seed", err_seed_base, "First seed");
    err->add_option("--h", err_h, "Bin scale");
    err->add_option("--delta", err_delta, "Sampling period (default h)");
    err->add_option("--tau-max", err_tau, "Maximum lag");
    err->add_option("--out", err_out, "Output directory");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Full multi-day estimation pipeline");
    std::string p_in, p_kind = "events", p_mode = "1d", p_windows, p_out = ".", p_fit_range;
    double p_h = 0.0, p_delta = 0.0, p_tau = 0.0;
    std::size_t p_min_events = 100;
    std::uint64_t p_seed = 0;
    bool p_fit = false;
    pipe->add_option("--input", p_in, "Events or prices CSV")->required();
    pipe->add_option("--input-kind", p_kind, "events | prices")->check(CLI::IsMember({"events", "prices"}));
    pipe->add_option("--mode", p_mode, "1d or 2d-bisym")->check(CLI::IsMember({"1d", "2d-bisym"}));
    pipe->add_option("--windows", p_windows, "Windows JSON (optional)");
    pipe->add_option("--h", p_h, "Bin scale")->required();
    pipe->add_option("--delta", p_delta, "Sampling period (default h)");
    pipe->add_option("--tau-max", p_tau, "Maximum lag")->required();
    pipe->add_option("--min-events", p_min_events, "Drop windows with fewer events");
    pipe->add_option("--fit-range", p_fit_range, "t_lo:t_hi; enables the power-law fit");
    pipe->add_flag("--fit", p_fit, "Run the power-law fit with default range");
    pipe->add_option("--seed", p_seed, "Recorded in diagnostics");
    pipe->add_option("--out", p_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(sim_spec, sim_horizon, sim_seed, sim_burn, sim_max_events, sim_out);
        if (cov->parsed()) return cmd_cov(cov_in, cov_h, cov_delta, cov_tau, cov_out);
        if (est->parsed()) return cmd_estimate(est_in, est_mode, est_out);
        if (fit->parsed()) return cmd_fit(fit_in, fit_range, fit_out, fit_col);
        if (err->parsed())
            return cmd_errors(err_study, err_spec, err_out, err_horizons, err_deltas, err_seeds,
                              err_seed_base, err_h, err_delta, err_tau, err_tvals);
        if (pipe->parsed()) {
            hawkes::RunConfig cfg;
            cfg.covariance.h = p_h;
            cfg.covariance.delta = p_delta > 0.0 ? p_delta : p_h;
            cfg.covariance.tau_max = p_tau;
            cfg.mode = p_mode == "2d-bisym" ? hawkes::EstimatorMode::bisymmetric_2d
                                            : hawkes::EstimatorMode::one_dimensional;
            cfg.input_kind = p_kind == "prices" ? hawkes::InputKind::prices : hawkes::InputKind::events;
            cfg.input_path = p_in;
            cfg.windows_path = p_windows;
            cfg.out_dir = p_out;
            cfg.min_events = p_min_events;
            cfg.seed = p_seed;
            cfg.run_fit = p_fit || !p_fit_range.empty();
            if (!p_fit_range.empty()) cfg.fit = parse_fit_range(p_fit_range);
            const auto result = hawkes::run_pipeline(cfg);
            std::cout << "pipeline artifacts in " << p_out << " (lambda_bar " << result.lambda_bar
                      << ")\n";
            return 0;
        }
    } catch (const hawkes::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const hawkes::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
