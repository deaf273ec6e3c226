#pragma once

#include "hawkes/covariance.hpp"

#include <complex>
#include <vector>

namespace hawkes {

enum class SpectrumRole { v_hat, E, D, psi_hat, phi_hat };

/// Complex matrix-valued samples on the uniform frequency grid conjugate to
/// a symmetric lag grid: omega_j = 2*pi*j / (N*delta), j = -K..K, stored in
/// increasing-omega order.
struct SpectrumGrid {
    int n = 1;
    double delta = 0.0; // lag step of the originating grid
    int max_index = 0;  // K
    std::vector<double> omegas;
    std::vector<CMat> values;
    SpectrumRole role = SpectrumRole::v_hat;

    int grid_size() const { return 2 * max_index + 1; }
    const CMat& at_index(int j) const { return values[static_cast<std::size_t>(j + max_index)]; }
    CMat& at_index(int j) { return values[static_cast<std::size_t>(j + max_index)]; }

    void validate() const;
};

/// Fourier transform of the bin-overlap triangle (1 - |t|/h)^+:
/// (4 / (omega^2 h)) sin^2(omega h / 2), continued with h at omega = 0.
double g_hat(double h, double omega);

/// Transform of the triangle sampled on the lag grid (what a DFT of binned
/// data actually carries): delta * sum_k g(k*delta) e^{-i omega k delta}.
/// Equals delta identically when delta >= h; strictly positive for
/// delta >= h/2.
double g_hat_sampled(double h, double delta, double omega);

/// vhat(omega_j) = delta * sum_k v(k*delta) e^{-i omega_j k delta}.
SpectrumGrid dft_lag_to_freq(const SampledMatrixFunction& f, SpectrumRole role = SpectrumRole::v_hat);

/// Inverse of dft_lag_to_freq. The imaginary residue is discarded when its
/// RMS is below 1% of the real part's RMS and reported through
/// *imag_residue_rms when requested; a larger residue raises NumericalError.
SampledMatrixFunction idft_freq_to_lag(const SpectrumGrid& s, double* imag_residue_rms = nullptr);

/// Discrete Hilbert transform along the sample axis (analytic-signal method):
/// DFT, multiply by -i sign(freq bin) with the DC and Nyquist bins zeroed,
/// inverse DFT, real part. pad_factor > 1 zero-extends the axis on both sides
/// before the transform and discards the extension, trading exact circular
/// self-consistency for less periodization bias.
std::vector<double> hilbert_phase(const std::vector<double>& log_magnitude, int pad_factor = 1);

/// Minimal-phase root: from E > 0 on the frequency grid, reconstruct
/// (1 - D)^{-1} = exp(log(E)/2 - i H(log(E)/2)), whose modulus is exactly
/// sqrt(E). Inputs are floored at clip_floor_rel * max(E); the number of
/// clipped samples is reported through *clip_count when requested.
std::vector<Complex> minimal_phase_root(const std::vector<double>& e_diag, int pad_factor = 1,
                                        double clip_floor_rel = 1e-10, int* clip_count = nullptr);

/// Estimated kernel on the causal grid t = k*delta, k = 0..K, with the
/// diagnostics the estimation pipeline accumulates along the way.
struct EstimatedKernel {
    int n = 1;
    double delta = 0.0;
    std::vector<Mat> values; // index k is lag k*delta

    // diagnostics
    int clip_count = 0;           // spectrum samples raised to the clip floor
    double neg_mass_ratio = 0.0;  // |phi| mass recovered at t < 0 over mass at t > 0
    double imag_residue_rms = 0.0;
    double aliasing_top_decade = 0.0; // share of spectrum energy in the top frequency decade

    double lambda_bar = 0.0;
    double h = 0.0;
    double tau_max = 0.0;

    int grid_points() const { return static_cast<int>(values.size()); }
    double value(int k, int i = 0, int j = 0) const { return values[static_cast<std::size_t>(k)](i, j); }
};

/// 1D estimator: DFT of the covariance, division by lambda_bar times the
/// sampled-triangle transform, scalar minimal-phase root, phi_hat = 1 - 1/(1+Psi_hat),
/// inverse DFT, causal part.
EstimatedKernel estimate_kernel_1d(const SampledMatrixFunction& cov, double lambda_bar);

/// Bisymmetric 2D estimator: scalar recoveries on the sum and difference
/// channels v11 +/- v12, then phi_hat in the diagonal basis. The covariance
/// must be exactly bisymmetric (apply symmetrize_bisym first). Entry (0,0) of
/// each value is the diagonal kernel, entry (0,1) the anti-diagonal one.
EstimatedKernel estimate_kernel_2d_bisym(const SampledMatrixFunction& cov, double lambda_bar);

struct BisymmetryReport {
    double diag_deviation = 0.0;  // relative RMS of v11 - v22
    double cross_deviation = 0.0; // relative RMS of v12 - v21
};

/// Normalized deviations from bisymmetry; the scale is the RMS over lags and
/// entries of the bisymmetrized matrix.
BisymmetryReport check_bisymmetry(const SampledMatrixFunction& cov);

} // namespace hawkes
