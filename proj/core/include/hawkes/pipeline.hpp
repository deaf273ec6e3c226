#pragma once

#include "hawkes/analysis.hpp"
#include "hawkes/event_io.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace hawkes {

enum class EstimatorMode { one_dimensional, bisymmetric_2d };
enum class InputKind { events, prices };

struct FitRange {
    double t_lo = 0.0;
    double t_hi = 0.0;
};

struct RunConfig {
    CovarianceConfig covariance;
    EstimatorMode mode = EstimatorMode::one_dimensional;
    InputKind input_kind = InputKind::events;
    std::string input_path;
    std::string windows_path; // optional; empty = single window (whole input)
    std::string out_dir;
    std::size_t min_events = 100;
    std::optional<FitRange> fit; // empty = defaults when fitting is requested
    bool run_fit = false;
    std::uint64_t seed = 0; // provenance only; the estimation itself is deterministic

    void validate() const;
};

/// Default power-law fit range for an estimated kernel: [2*delta, tau_max/2].
FitRange default_fit_range(double delta, double tau_max);

struct PipelineResult {
    std::string covariance_csv;
    std::string covariance_sidecar;
    std::string kernel_csv;
    std::string kernel_sidecar;
    std::string diagnostics_json;
    std::string fit_json; // empty when no fit was requested

    EstimatedKernel kernel;
    SampledMatrixFunction covariance;
    double lambda_bar = 0.0;
    std::optional<FitReport> fit;
};

/// Full estimation pipeline: ingest -> (midprice decomposition) -> windowing
/// -> per-day covariance -> averaging -> (2D: bisymmetry check + symmetrize)
/// -> kernel estimation -> optional power-law fit. All artifacts are written
/// under cfg.out_dir; any stage error is rethrown with the stage name and the
/// input file fingerprint attached.
PipelineResult run_pipeline(const RunConfig& cfg);

} // namespace hawkes
