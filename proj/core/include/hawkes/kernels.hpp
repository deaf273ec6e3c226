#pragma once

#include "hawkes/types.hpp"

#include <variant>
#include <vector>

namespace hawkes {

// ---------------------------------------------------------------------------
// Kernel families. All entries are nonnegative functions supported on t >= 0.
// ---------------------------------------------------------------------------

struct ZeroKernel {};

/// phi(t) = alpha * exp(-beta t), t >= 0.
struct ExponentialKernel {
    double alpha = 0.0; // >= 0
    double beta = 1.0;  // > 0
};

/// phi(t) = alpha * (t + gamma)^beta, t >= 0, with beta < -1 and gamma > 0
/// so that the integral -alpha * gamma^(beta+1) / (beta+1) is finite.
struct PowerLawKernel {
    double alpha = 0.0;
    double beta = -2.0;
    double gamma = 1.0;
};

/// Nonnegative samples on a uniform grid {0, dt, 2 dt, ...}, linearly
/// interpolated between grid points and zero outside [0, extent].
struct TabulatedKernel {
    double dt = 1.0;
    std::vector<double> values;
};

using KernelEntry = std::variant<ZeroKernel, ExponentialKernel, PowerLawKernel, TabulatedKernel>;

/// n x n matrix of kernel entries describing the excitation structure.
struct KernelSpec {
    int n = 1;
    std::vector<KernelEntry> entries; // row-major, n*n

    const KernelEntry& entry(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
    KernelEntry& entry(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }

    static KernelSpec zero(int n);
    static KernelSpec exponential_1d(double alpha, double beta);
    static KernelSpec power_law_1d(double alpha, double beta, double gamma);
    /// 2x2 with equal diagonal and equal anti-diagonal entries.
    static KernelSpec bisymmetric(const KernelEntry& diag, const KernelEntry& anti);

    /// Throws ValidationError when a family constraint is violated.
    void validate() const;
};

struct BackgroundRate {
    Vec mu; // strictly positive components

    void validate() const;
};

struct MeanIntensity {
    Vec lambda_bar;  // Lambda = (I - phi_hat(0))^{-1} mu
    Mat sigma;       // diagonal, Sigma_ii = Lambda_i
};

// ---------------------------------------------------------------------------
// Scalar-entry evaluations
// ---------------------------------------------------------------------------

/// phi(t) for one entry; zero for t < 0.
double kernel_value(const KernelEntry& entry, double t);

/// Integral of the entry over [0, inf) (exact for every family).
double kernel_integral(const KernelEntry& entry);

/// Fourier transform of one entry at frequency omega (rad/s),
/// phi_hat = integral of e^{-i omega t} phi(t) dt.
/// Power-law entries use adaptive quadrature (relative tolerance 1e-8) with
/// an asymptotic tail correction; omega = 0 uses the closed form.
Complex entry_phi_hat(const KernelEntry& entry, double omega);

/// Smallest lag u beyond which the entry stays below `floor_fraction` times
/// its value at 0 (infinity for the zero kernel, represented as +inf).
double kernel_history_cutoff(const KernelEntry& entry, double floor_fraction);

// ---------------------------------------------------------------------------
// Matrix operations
// ---------------------------------------------------------------------------

/// phi_hat at z = i*omega, entrywise transform of the kernel matrix.
CMat phi_hat(const KernelSpec& spec, double omega);

/// phi_hat at omega = 0 (real matrix of kernel integrals).
Mat phi_hat_zero(const KernelSpec& spec);

/// Largest-modulus eigenvalue of phi_hat(0); stationarity requires < 1.
double spectral_radius(const KernelSpec& spec);

/// Lambda = (I - phi_hat(0))^{-1} mu and Sigma = diag(Lambda).
/// Requires spectral_radius(spec) < 1.
MeanIntensity mean_intensity(const KernelSpec& spec, const BackgroundRate& mu);

/// Psi_hat = phi_hat (I - phi_hat)^{-1}.
CMat psi_hat_from_phi_hat(const CMat& phi_hat_value);

/// phi_hat = (I + Psi_hat)^{-1} Psi_hat.
CMat phi_hat_from_psi_hat(const CMat& psi_hat_value);

} // namespace hawkes
