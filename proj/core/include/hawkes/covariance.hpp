#pragma once

#include "hawkes/events.hpp"
#include "hawkes/kernels.hpp"

#include <vector>

namespace hawkes {

/// Matrix-valued function of lag on the symmetric uniform grid k*delta,
/// k = -K..K. Covariance data satisfies value(-tau) = value(tau)^T.
struct SampledMatrixFunction {
    int n = 1;
    double delta = 0.0; // lag grid step
    double h = 0.0;     // bin scale the data was estimated at
    int max_lag_index = 0;
    std::vector<Mat> values; // 2*K+1 matrices, index 0 is lag -K*delta

    int grid_size() const { return 2 * max_lag_index + 1; }
    double lag(int idx) const { return delta * (idx - max_lag_index); }
    const Mat& at_lag_index(int k) const { return values[static_cast<std::size_t>(k + max_lag_index)]; }
    Mat& at_lag_index(int k) { return values[static_cast<std::size_t>(k + max_lag_index)]; }

    void validate() const;
};

struct CovarianceConfig {
    double h = 0.0;       // bin scale (seconds)
    double delta = 0.0;   // sampling period, delta >= h/2 (default usage: delta = h)
    double tau_max = 0.0; // maximum lag, integer multiple of delta

    int max_lag_index() const;
    void validate() const;
};

/// Lambda_hat_i = count_i / window length; empty components produce a zero
/// rate and a warning instead of an error.
MeanIntensity estimate_mean_intensity(const EventSeries& events, WarningList* warnings = nullptr);

/// Empirical normalized covariance of bin-h event counts sampled at lag grid
/// k*delta: bins [m*delta, m*delta + h) within the window, empirical bin-count
/// means subtracted, divisor = total number of bins (biased normalization),
/// scaled by 1/h. Negative lags are filled by transposition.
SampledMatrixFunction estimate_covariance(const EventSeries& events, const CovarianceConfig& cfg,
                                          WarningList* warnings = nullptr);

/// Noise-free counterpart of estimate_covariance for a known kernel,
/// evaluated in the frequency domain on an oversampled grid and inverse
/// transformed; the triangular bin-overlap term is added in closed form.
SampledMatrixFunction theoretical_covariance(const KernelSpec& spec, const BackgroundRate& mu,
                                             const CovarianceConfig& cfg);

/// Frequency-domain covariance density at z = i*omega:
/// g_hat * (I + conj(Psi_hat)) Sigma (I + Psi_hat^T). Exposed for tests and
/// diagnostics; theoretical_covariance integrates this quantity.
CMat spectral_covariance_density(const KernelSpec& spec, const MeanIntensity& intensity, double h,
                                 double omega);

/// Entrywise arithmetic mean; all inputs must share n, delta, h and grid.
SampledMatrixFunction average_covariances(const std::vector<SampledMatrixFunction>& parts);

/// For n = 2: replace the two diagonal entries by their mean and the two
/// anti-diagonal entries by their mean at every lag.
SampledMatrixFunction symmetrize_bisym(const SampledMatrixFunction& cov);

} // namespace hawkes
