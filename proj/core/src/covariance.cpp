#include "hawkes/covariance.hpp"

#include "hawkes/fft.hpp"
#include "hawkes/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hawkes {

namespace {

constexpr int kOracleOversample = 8; // finer frequency spacing (longer lag period)
constexpr int kOracleExtend = 8;     // wider frequency range (denser lag sampling)

double triangle(double t, double h) { return std::max(0.0, 1.0 - std::abs(t) / h); }

} // namespace

void SampledMatrixFunction::validate() const {
    if (n < 1) throw ValidationError("SampledMatrixFunction: dimension must be >= 1");
    if (!(delta > 0.0)) throw ValidationError("SampledMatrixFunction: delta must be > 0");
    if (max_lag_index < 0) throw ValidationError("SampledMatrixFunction: negative lag count");
    if (values.size() != static_cast<std::size_t>(grid_size()))
        throw ValidationError("SampledMatrixFunction: value count does not match grid");
    for (const auto& m : values)
        if (m.rows() != n || m.cols() != n)
            throw ValidationError("SampledMatrixFunction: matrix dimension mismatch");
}

int CovarianceConfig::max_lag_index() const {
    const int k = static_cast<int>(std::llround(tau_max / delta));
    if (k <= 0 || std::abs(k * delta - tau_max) > 1e-9 * std::max(1.0, tau_max))
        throw ValidationError("CovarianceConfig: tau_max must be a positive integer multiple of delta");
    return k;
}

void CovarianceConfig::validate() const {
    if (!(h > 0.0)) throw ValidationError("CovarianceConfig: h must be > 0");
    if (!(delta >= 0.5 * h - 1e-12 * h))
        throw ValidationError("CovarianceConfig: delta must be >= h/2");
    (void)max_lag_index();
}

MeanIntensity estimate_mean_intensity(const EventSeries& events, WarningList* warnings) {
    events.validate(warnings);
    const double len = events.window_length();
    if (!(len > 0.0)) throw ValidationError("estimate_mean_intensity: empty window");
    MeanIntensity out;
    out.lambda_bar = Vec::Zero(events.n);
    for (int i = 0; i < events.n; ++i) {
        const auto count = events.events[static_cast<std::size_t>(i)].size();
        if (count == 0 && warnings)
            warnings->push_back("component " + std::to_string(i + 1) +
                                " has no events; its estimated rate is zero");
        out.lambda_bar[i] = static_cast<double>(count) / len;
    }
    out.sigma = out.lambda_bar.asDiagonal();
    return out;
}

SampledMatrixFunction estimate_covariance(const EventSeries& events, const CovarianceConfig& cfg,
                                          WarningList* warnings) {
    events.validate(warnings);
    cfg.validate();
    const int K = cfg.max_lag_index();
    const double len = events.window_length();
    if (len < 2.0 * (cfg.tau_max + cfg.h))
        throw ValidationError("estimate_covariance: window too short for tau_max (need >= 2*(tau_max+h))");

    // bins [m*delta, m*delta + h) fully inside the window
    const auto n_bins = static_cast<std::size_t>(std::floor((len - cfg.h) / cfg.delta + 1e-9)) + 1;
    const int n = events.n;

    std::vector<std::vector<double>> centered(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& src = events.events[static_cast<std::size_t>(i)];
        auto& counts = centered[static_cast<std::size_t>(i)];
        counts.assign(n_bins, 0.0);
        if (src.empty()) {
            if (warnings)
                warnings->push_back("component " + std::to_string(i + 1) +
                                    " is empty; covariance rows/columns are zero");
            continue;
        }
        std::size_t lo = 0, hi = 0;
        for (std::size_t m = 0; m < n_bins; ++m) {
            const double left = events.t_start + static_cast<double>(m) * cfg.delta;
            const double right = left + cfg.h;
            while (lo < src.size() && src[lo] < left) ++lo;
            if (hi < lo) hi = lo;
            while (hi < src.size() && src[hi] < right) ++hi;
            counts[m] = static_cast<double>(hi - lo);
        }
        double mean = 0.0;
        for (double c : counts) mean += c;
        mean /= static_cast<double>(n_bins);
        for (double& c : counts) c -= mean;
    }

    SampledMatrixFunction out;
    out.n = n;
    out.delta = cfg.delta;
    out.h = cfg.h;
    out.max_lag_index = K;
    out.values.assign(static_cast<std::size_t>(out.grid_size()), Mat::Zero(n, n));

    const double scale = 1.0 / (static_cast<double>(n_bins) * cfg.h);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto corr = fft::cross_correlation(centered[static_cast<std::size_t>(i)],
                                                     centered[static_cast<std::size_t>(j)], K);
            for (int k = 0; k <= K; ++k) out.at_lag_index(k)(i, j) = corr[static_cast<std::size_t>(k)] * scale;
        }
    }
    for (int k = 1; k <= K; ++k) out.at_lag_index(-k) = out.at_lag_index(k).transpose();
    return out;
}

CMat spectral_covariance_density(const KernelSpec& spec, const MeanIntensity& intensity, double h,
                                 double omega) {
    const CMat ph = phi_hat(spec, omega);
    const CMat psi = psi_hat_from_phi_hat(ph);
    const CMat one_plus = CMat::Identity(spec.n, spec.n) + psi.conjugate();
    const CMat sigma = intensity.sigma.cast<Complex>();
    return g_hat(h, omega) * (one_plus * sigma * one_plus.adjoint());
}

SampledMatrixFunction theoretical_covariance(const KernelSpec& spec, const BackgroundRate& mu,
                                             const CovarianceConfig& cfg) {
    spec.validate();
    mu.validate();
    cfg.validate();
    const int K = cfg.max_lag_index();
    const MeanIntensity intensity = mean_intensity(spec, mu); // rejects rho >= 1
    const int n = spec.n;

    // Frequency sampling of ghat * ((I+conj(Psi)) Sigma (I+Psi^T) - Sigma):
    // the subtracted Sigma atom transforms to the triangle g(tau) Sigma, which
    // is added back in closed form so the kink at tau = 0 costs no resolution.
    const int coarse = 2 * K + 1;
    std::size_t n_fine = static_cast<std::size_t>(coarse) * kOracleOversample * kOracleExtend;
    if (n_fine % 2 == 0) ++n_fine;
    const auto k_fine = static_cast<long>(n_fine / 2);
    const double delta_fine = cfg.delta / kOracleOversample;
    const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(n_fine) * delta_fine);

    const CMat sigma = intensity.sigma.cast<Complex>();
    std::vector<CMat> density(n_fine);
    for (long j = 0; j <= k_fine; ++j) {
        const double omega = static_cast<double>(j) * d_omega;
        const CMat ph = phi_hat(spec, omega);
        const CMat psi = psi_hat_from_phi_hat(ph);
        const CMat pc = psi.conjugate();
        const CMat a = pc * sigma + sigma * psi.transpose() + pc * sigma * psi.transpose();
        const CMat m = g_hat(cfg.h, omega) * a;
        density[static_cast<std::size_t>(k_fine + j)] = m;
        if (j > 0) density[static_cast<std::size_t>(k_fine - j)] = m.conjugate();
    }

    // entrywise inverse transform back to the fine lag grid
    std::vector<Mat> smooth(n_fine, Mat::Zero(n, n));
    std::vector<Complex> buf(n_fine);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            // math order -> DFT order
            for (std::size_t idx = 0; idx < n_fine; ++idx) {
                const auto shifted = (idx + static_cast<std::size_t>(k_fine)) % n_fine;
                buf[idx] = density[shifted](r, c);
            }
            auto lag = fft::idft(buf);
            double real_rms = 0.0, imag_rms = 0.0;
            for (std::size_t idx = 0; idx < n_fine; ++idx) {
                real_rms += lag[idx].real() * lag[idx].real();
                imag_rms += lag[idx].imag() * lag[idx].imag();
            }
            if (imag_rms > 1e-4 * real_rms && real_rms > 0.0)
                throw NumericalError("theoretical_covariance: inverse transform has a large imaginary residue");
            for (std::size_t idx = 0; idx < n_fine; ++idx) {
                const auto math_idx = (idx + static_cast<std::size_t>(k_fine)) % n_fine;
                smooth[math_idx](r, c) = lag[idx].real() / delta_fine;
            }
        }
    }

    SampledMatrixFunction out;
    out.n = n;
    out.delta = cfg.delta;
    out.h = cfg.h;
    out.max_lag_index = K;
    out.values.assign(static_cast<std::size_t>(out.grid_size()), Mat::Zero(n, n));
    for (int k = -K; k <= K; ++k) {
        const auto fine_idx = static_cast<std::size_t>(k_fine + static_cast<long>(k) * kOracleOversample);
        out.at_lag_index(k) = smooth[fine_idx] + triangle(k * cfg.delta, cfg.h) * intensity.sigma;
    }
    // exact transpose symmetry: mirror the positive lags
    for (int k = 1; k <= K; ++k) out.at_lag_index(-k) = out.at_lag_index(k).transpose();
    return out;
}

SampledMatrixFunction average_covariances(const std::vector<SampledMatrixFunction>& parts) {
    if (parts.empty()) throw ValidationError("average_covariances: no inputs");
    const auto& first = parts.front();
    first.validate();
    for (const auto& p : parts) {
        p.validate();
        if (p.n != first.n || p.max_lag_index != first.max_lag_index ||
            std::abs(p.delta - first.delta) > 1e-12 * first.delta ||
            std::abs(p.h - first.h) > 1e-12 * first.h)
            throw ValidationError("average_covariances: grid/h/n mismatch between inputs");
    }
    SampledMatrixFunction out = first;
    for (std::size_t i = 1; i < parts.size(); ++i)
        for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += parts[i].values[k];
    const double inv = 1.0 / static_cast<double>(parts.size());
    for (auto& m : out.values) m *= inv;
    return out;
}

SampledMatrixFunction symmetrize_bisym(const SampledMatrixFunction& cov) {
    cov.validate();
    if (cov.n != 2) throw ValidationError("symmetrize_bisym: requires a 2-dimensional covariance");
    SampledMatrixFunction out = cov;
    for (auto& m : out.values) {
        const double d = 0.5 * (m(0, 0) + m(1, 1));
        const double a = 0.5 * (m(0, 1) + m(1, 0));
        m(0, 0) = m(1, 1) = d;
        m(0, 1) = m(1, 0) = a;
    }
    return out;
}

} // namespace hawkes
