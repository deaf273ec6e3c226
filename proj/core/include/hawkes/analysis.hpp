#pragma once

#include "hawkes/covariance.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/spectral.hpp"

#include <cstdint>
#include <vector>

namespace hawkes {

/// Result of a log-log power-law fit alpha * t^beta.
struct FitReport {
    double alpha = 0.0;
    double beta = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double residual_rms_log = 0.0; // RMS of log-space fit residuals
    int points_used = 0;
    int points_excluded = 0; // nonpositive samples dropped from the log fit
};

struct ConvergencePoint {
    double horizon = 0.0; // T
    double e2 = 0.0;      // squared kernel estimation error
    std::uint64_t seed = 0;
};

struct ConvergenceStudy {
    std::vector<ConvergencePoint> points;
    double slope = 0.0;     // OLS slope of log e2 vs log T
    double intercept = 0.0;
};

struct PointwiseErrorSamples {
    std::vector<double> t_values;
    // errors[i][s] = estimate_s(t_i) - truth(t_i), one entry per seed
    std::vector<std::vector<double>> errors;
    std::vector<std::vector<double>> standardized; // per t: mean 0, unit variance
    // qq[i] = pairs (normal quantile, empirical quantile) for t_values[i]
    std::vector<std::vector<std::pair<double, double>>> qq;
};

struct DeltaSweepRow {
    double delta = 0.0;
    double tau_max_effective = 0.0; // tau_max rounded down to a multiple of delta
    double e2 = 0.0;                // averaged over seeds
};

struct DeltaSweep {
    std::vector<DeltaSweepRow> rows;
    double argmin_delta = 0.0;
};

/// Squared error sum_{k=1..tau_max/delta} (est(k*delta) - truth(k*delta))^2;
/// the t = 0 sample is excluded. `est` entry (row,col) is compared against
/// `truth`.
double l2_error(const EstimatedKernel& est, const KernelEntry& truth, double delta, double tau_max,
                int row = 0, int col = 0);

/// sqrt(e2 / sum truth^2) over the same grid, for tolerance checks.
double relative_l2_error(const EstimatedKernel& est, const KernelEntry& truth, double delta,
                         double tau_max, int row = 0, int col = 0);

/// OLS slope/intercept of log(e2) against log(T).
void fit_loglog_slope(const std::vector<ConvergencePoint>& points, double& slope, double& intercept);

/// Simulate -> covariance -> 1D kernel estimate -> e2, for each (T, seed).
ConvergenceStudy convergence_study(const KernelSpec& spec, const BackgroundRate& mu,
                                   const std::vector<double>& horizons,
                                   const std::vector<std::uint64_t>& seeds,
                                   const CovarianceConfig& cfg);

/// Standardized estimation errors at fixed grid times across seeds, with
/// normal-quantile pairs for qq plots.
PointwiseErrorSamples pointwise_error_samples(const KernelSpec& spec, const BackgroundRate& mu,
                                              const CovarianceConfig& cfg, double horizon,
                                              int n_seeds, const std::vector<double>& t_values,
                                              std::uint64_t seed_base = 1);

/// Least-squares line in (log t, log phi) over [t_lo, t_hi]; nonpositive
/// samples are excluded and counted, never clamped. Requires >= 3 usable
/// points.
FitReport powerlaw_fit(const EstimatedKernel& kernel, double t_lo, double t_hi, int row = 0,
                       int col = 0);
FitReport powerlaw_fit(const std::vector<double>& t, const std::vector<double>& phi, double t_lo,
                       double t_hi);

/// e2 per sampling period on a common set of simulated samples (one per
/// seed, re-binned for every delta with h = delta).
DeltaSweep delta_sweep(const KernelSpec& spec, const BackgroundRate& mu, double horizon,
                       const std::vector<double>& deltas, double tau_max,
                       const std::vector<std::uint64_t>& seeds);

/// Inverse standard normal CDF (used for qq pairs).
double normal_quantile(double p);

} // namespace hawkes
