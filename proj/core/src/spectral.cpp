#include "hawkes/spectral.hpp"

#include "hawkes/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hawkes {

namespace {

// math-order index (0..N-1, lag/freq index j = idx - K) <-> DFT-order index
std::size_t math_to_dft(std::size_t math_idx, int k, std::size_t n) {
    return (math_idx + static_cast<std::size_t>(k) + 1) % n;
}
std::size_t dft_to_math(std::size_t dft_idx, int k, std::size_t n) {
    return (dft_idx + static_cast<std::size_t>(k)) % n;
}

std::vector<double> frequency_grid(int k, double delta) {
    const auto n = static_cast<std::size_t>(2 * k + 1);
    std::vector<double> w(n);
    const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(n) * delta);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = d_omega * (static_cast<double>(i) - static_cast<double>(k));
    return w;
}

struct ScalarChannel {
    std::vector<Complex> phi_hat_freq; // math order
    int clip_count = 0;
    double aliasing_top_decade = 0.0;
};

// Scalar pipeline core: real spectrum ratio R -> (1+Psi) -> phi_hat samples.
ScalarChannel scalar_phi_hat(const std::vector<double>& v_real_freq, const std::vector<double>& denom) {
    const std::size_t n = v_real_freq.size();
    std::vector<double> ratio(n);
    for (std::size_t i = 0; i < n; ++i) ratio[i] = v_real_freq[i] / denom[i];

    ScalarChannel out;
    const int k = static_cast<int>(n / 2);
    double top = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = ratio[i] - 1.0;
        total += d * d;
        const int j = std::abs(static_cast<int>(i) - k);
        if (10 * j >= k) top += d * d; // |omega| in the top decade [omega_max/10, omega_max]
    }
    out.aliasing_top_decade = total > 0.0 ? top / total : 0.0;

    const auto one_plus_psi = minimal_phase_root(ratio, /*pad_factor=*/1, 1e-10, &out.clip_count);
    out.phi_hat_freq.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.phi_hat_freq[i] = 1.0 - 1.0 / one_plus_psi[i];
    return out;
}

struct LagRecovery {
    std::vector<double> causal; // k = 0..K
    double neg_mass_ratio = 0.0;
    double imag_residue_rms = 0.0;
};

LagRecovery recover_lag(const std::vector<Complex>& phi_hat_freq, int k, double delta) {
    const auto n = phi_hat_freq.size();
    std::vector<Complex> buf(n);
    for (std::size_t m = 0; m < n; ++m) buf[m] = phi_hat_freq[dft_to_math(m, k, n)];
    auto lag_dft = fft::idft(buf);

    double real_rms = 0.0, imag_rms = 0.0;
    for (const auto& z : lag_dft) {
        real_rms += z.real() * z.real();
        imag_rms += z.imag() * z.imag();
    }
    real_rms = std::sqrt(real_rms / static_cast<double>(n));
    imag_rms = std::sqrt(imag_rms / static_cast<double>(n));
    if (imag_rms > 0.01 * real_rms && imag_rms > 0.0)
        throw NumericalError("kernel recovery: imaginary residue RMS " + std::to_string(imag_rms) +
                             " exceeds 1% of real RMS; spectrum is not conjugate-symmetric");

    std::vector<double> lag(n);
    for (std::size_t mi = 0; mi < n; ++mi) lag[mi] = lag_dft[math_to_dft(mi, k, n)].real() / delta;

    LagRecovery out;
    out.imag_residue_rms = imag_rms;
    double neg = 0.0, pos = 0.0;
    for (int j = 1; j <= k; ++j) {
        neg += std::abs(lag[static_cast<std::size_t>(k - j)]);
        pos += std::abs(lag[static_cast<std::size_t>(k + j)]);
    }
    out.neg_mass_ratio = pos > 0.0 ? neg / pos : 0.0;
    out.causal.assign(lag.begin() + k, lag.end());
    return out;
}

std::vector<double> real_spectrum_of(const std::vector<double>& lag_math, int k, double delta) {
    const auto n = lag_math.size();
    std::vector<Complex> buf(n);
    for (std::size_t m = 0; m < n; ++m) buf[m] = lag_math[dft_to_math(m, k, n)];
    const auto freq = fft::dft(buf);
    std::vector<double> out(n);
    for (std::size_t mi = 0; mi < n; ++mi) out[mi] = freq[math_to_dft(mi, k, n)].real() * delta;
    return out;
}

} // namespace

void SpectrumGrid::validate() const {
    if (n < 1) throw ValidationError("SpectrumGrid: dimension must be >= 1");
    if (!(delta > 0.0)) throw ValidationError("SpectrumGrid: delta must be > 0");
    if (omegas.size() != static_cast<std::size_t>(grid_size()) || values.size() != omegas.size())
        throw ValidationError("SpectrumGrid: grid size mismatch");
    for (const auto& m : values)
        if (m.rows() != n || m.cols() != n) throw ValidationError("SpectrumGrid: matrix dimension mismatch");
}

double g_hat(double h, double omega) {
    if (!(h > 0.0)) throw ValidationError("g_hat: h must be > 0");
    if (omega == 0.0) return h;
    const double s = std::sin(omega * h / 2.0);
    return 4.0 * s * s / (omega * omega * h);
}

double g_hat_sampled(double h, double delta, double omega) {
    if (!(h > 0.0) || !(delta > 0.0)) throw ValidationError("g_hat_sampled: h and delta must be > 0");
    double acc = 1.0;
    for (int k = 1; k * delta < h; ++k)
        acc += 2.0 * (1.0 - k * delta / h) * std::cos(omega * k * delta);
    return delta * acc;
}

SpectrumGrid dft_lag_to_freq(const SampledMatrixFunction& f, SpectrumRole role) {
    f.validate();
    const int k = f.max_lag_index;
    const auto n = static_cast<std::size_t>(f.grid_size());

    SpectrumGrid out;
    out.n = f.n;
    out.delta = f.delta;
    out.max_index = k;
    out.role = role;
    out.omegas = frequency_grid(k, f.delta);
    out.values.assign(n, CMat::Zero(f.n, f.n));

    std::vector<Complex> buf(n);
    for (int r = 0; r < f.n; ++r) {
        for (int c = 0; c < f.n; ++c) {
            for (std::size_t m = 0; m < n; ++m)
                buf[m] = f.values[dft_to_math(m, k, n)](r, c);
            const auto freq = fft::dft(buf);
            for (std::size_t mi = 0; mi < n; ++mi)
                out.values[mi](r, c) = freq[math_to_dft(mi, k, n)] * f.delta;
        }
    }
    return out;
}

SampledMatrixFunction idft_freq_to_lag(const SpectrumGrid& s, double* imag_residue_rms) {
    s.validate();
    const int k = s.max_index;
    const auto n = static_cast<std::size_t>(s.grid_size());

    SampledMatrixFunction out;
    out.n = s.n;
    out.delta = s.delta;
    out.h = 0.0;
    out.max_lag_index = k;
    out.values.assign(n, Mat::Zero(s.n, s.n));

    double real_sq = 0.0, imag_sq = 0.0;
    std::vector<Complex> buf(n);
    for (int r = 0; r < s.n; ++r) {
        for (int c = 0; c < s.n; ++c) {
            for (std::size_t m = 0; m < n; ++m) buf[m] = s.values[dft_to_math(m, k, n)](r, c);
            const auto lag = fft::idft(buf);
            for (std::size_t mi = 0; mi < n; ++mi) {
                const Complex z = lag[math_to_dft(mi, k, n)] / s.delta;
                real_sq += z.real() * z.real();
                imag_sq += z.imag() * z.imag();
                out.values[mi](r, c) = z.real();
            }
        }
    }
    const double real_rms = std::sqrt(real_sq / static_cast<double>(n * s.n * s.n));
    const double imag_rms = std::sqrt(imag_sq / static_cast<double>(n * s.n * s.n));
    if (imag_residue_rms) *imag_residue_rms = imag_rms;
    if (imag_rms > 0.01 * real_rms && imag_rms > 0.0)
        throw NumericalError("idft_freq_to_lag: imaginary residue RMS exceeds 1% of the real part");
    return out;
}

std::vector<double> hilbert_phase(const std::vector<double>& log_magnitude, int pad_factor) {
    if (pad_factor < 1) throw ValidationError("hilbert_phase: pad_factor must be >= 1");
    for (double v : log_magnitude)
        if (!std::isfinite(v)) throw ValidationError("hilbert_phase: non-finite input");
    const std::size_t n = log_magnitude.size();
    if (n == 0) return {};

    const std::size_t np = n * static_cast<std::size_t>(pad_factor);
    const std::size_t lpad = (np - n) / 2;
    std::vector<Complex> buf(np, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) buf[lpad + i] = log_magnitude[i];

    auto freq = fft::dft(buf);
    const std::size_t half = np / 2;
    for (std::size_t m = 0; m < np; ++m) {
        if (m == 0 || (np % 2 == 0 && m == half)) {
            freq[m] = 0.0;
        } else if (m <= (np - 1) / 2) {
            freq[m] *= Complex(0.0, -1.0);
        } else {
            freq[m] *= Complex(0.0, 1.0);
        }
    }
    const auto back = fft::idft(freq);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = back[lpad + i].real();
    return out;
}

std::vector<Complex> minimal_phase_root(const std::vector<double>& e_diag, int pad_factor,
                                        double clip_floor_rel, int* clip_count) {
    if (e_diag.empty()) throw ValidationError("minimal_phase_root: empty input");
    double max_e = 0.0;
    for (double v : e_diag) {
        if (!std::isfinite(v)) throw ValidationError("minimal_phase_root: non-finite input");
        max_e = std::max(max_e, v);
    }
    if (!(max_e > 0.0))
        throw NumericalError("minimal_phase_root: spectrum is nonpositive everywhere; "
                             "invalid covariance input");
    const double floor = clip_floor_rel * max_e;
    int clipped = 0;
    std::vector<double> half_log(e_diag.size());
    for (std::size_t i = 0; i < e_diag.size(); ++i) {
        double v = e_diag[i];
        if (v < floor) {
            v = floor;
            ++clipped;
        }
        half_log[i] = 0.5 * std::log(v);
    }
    if (clip_count) *clip_count = clipped;

    const auto phase = hilbert_phase(half_log, pad_factor);
    std::vector<Complex> out(e_diag.size());
    for (std::size_t i = 0; i < e_diag.size(); ++i)
        out[i] = std::exp(Complex(half_log[i], -phase[i]));
    return out;
}

EstimatedKernel estimate_kernel_1d(const SampledMatrixFunction& cov, double lambda_bar) {
    cov.validate();
    if (cov.n != 1) throw ValidationError("estimate_kernel_1d: covariance must be 1-dimensional");
    if (!(lambda_bar > 0.0)) throw ValidationError("estimate_kernel_1d: lambda_bar must be > 0");
    if (!(cov.h > 0.0)) throw ValidationError("estimate_kernel_1d: covariance carries no bin scale h");

    const int k = cov.max_lag_index;
    const auto n = static_cast<std::size_t>(cov.grid_size());
    std::vector<double> lag(n);
    for (std::size_t i = 0; i < n; ++i) lag[i] = cov.values[i](0, 0);

    const auto v_freq = real_spectrum_of(lag, k, cov.delta);
    const auto omegas = frequency_grid(k, cov.delta);
    std::vector<double> denom(n);
    for (std::size_t i = 0; i < n; ++i) denom[i] = lambda_bar * g_hat_sampled(cov.h, cov.delta, omegas[i]);

    const auto channel = scalar_phi_hat(v_freq, denom);
    const auto rec = recover_lag(channel.phi_hat_freq, k, cov.delta);

    EstimatedKernel out;
    out.n = 1;
    out.delta = cov.delta;
    out.values.reserve(rec.causal.size());
    for (double v : rec.causal) {
        Mat m(1, 1);
        m(0, 0) = v;
        out.values.push_back(m);
    }
    out.clip_count = channel.clip_count;
    out.aliasing_top_decade = channel.aliasing_top_decade;
    out.neg_mass_ratio = rec.neg_mass_ratio;
    out.imag_residue_rms = rec.imag_residue_rms;
    out.lambda_bar = lambda_bar;
    out.h = cov.h;
    out.tau_max = cov.delta * k;
    return out;
}

EstimatedKernel estimate_kernel_2d_bisym(const SampledMatrixFunction& cov, double lambda_bar) {
    cov.validate();
    if (cov.n != 2) throw ValidationError("estimate_kernel_2d_bisym: covariance must be 2-dimensional");
    if (!(lambda_bar > 0.0)) throw ValidationError("estimate_kernel_2d_bisym: lambda_bar must be > 0");
    if (!(cov.h > 0.0)) throw ValidationError("estimate_kernel_2d_bisym: covariance carries no bin scale h");

    double scale = 0.0;
    for (const auto& m : cov.values) scale = std::max(scale, m.cwiseAbs().maxCoeff());
    for (const auto& m : cov.values) {
        if (std::abs(m(0, 0) - m(1, 1)) > 1e-9 * scale || std::abs(m(0, 1) - m(1, 0)) > 1e-9 * scale)
            throw ValidationError("estimate_kernel_2d_bisym: covariance is not bisymmetric; "
                                  "apply symmetrize_bisym first");
    }

    const int k = cov.max_lag_index;
    const auto n = static_cast<std::size_t>(cov.grid_size());
    std::vector<double> lag_sum(n), lag_diff(n);
    for (std::size_t i = 0; i < n; ++i) {
        lag_sum[i] = cov.values[i](0, 0) + cov.values[i](0, 1);
        lag_diff[i] = cov.values[i](0, 0) - cov.values[i](0, 1);
    }

    const auto omegas = frequency_grid(k, cov.delta);
    std::vector<double> denom(n);
    for (std::size_t i = 0; i < n; ++i) denom[i] = lambda_bar * g_hat_sampled(cov.h, cov.delta, omegas[i]);

    const auto chan_sum = scalar_phi_hat(real_spectrum_of(lag_sum, k, cov.delta), denom);
    const auto chan_diff = scalar_phi_hat(real_spectrum_of(lag_diff, k, cov.delta), denom);

    // back to the original basis: diag = (sum+diff)/2, anti = (sum-diff)/2
    std::vector<Complex> diag_hat(n), anti_hat(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag_hat[i] = 0.5 * (chan_sum.phi_hat_freq[i] + chan_diff.phi_hat_freq[i]);
        anti_hat[i] = 0.5 * (chan_sum.phi_hat_freq[i] - chan_diff.phi_hat_freq[i]);
    }
    const auto rec_d = recover_lag(diag_hat, k, cov.delta);
    const auto rec_a = recover_lag(anti_hat, k, cov.delta);

    EstimatedKernel out;
    out.n = 2;
    out.delta = cov.delta;
    out.values.reserve(rec_d.causal.size());
    for (std::size_t i = 0; i < rec_d.causal.size(); ++i) {
        Mat m(2, 2);
        m(0, 0) = m(1, 1) = rec_d.causal[i];
        m(0, 1) = m(1, 0) = rec_a.causal[i];
        out.values.push_back(m);
    }
    out.clip_count = chan_sum.clip_count + chan_diff.clip_count;
    out.aliasing_top_decade = std::max(chan_sum.aliasing_top_decade, chan_diff.aliasing_top_decade);
    out.neg_mass_ratio = std::max(rec_d.neg_mass_ratio, rec_a.neg_mass_ratio);
    out.imag_residue_rms = std::max(rec_d.imag_residue_rms, rec_a.imag_residue_rms);
    out.lambda_bar = lambda_bar;
    out.h = cov.h;
    out.tau_max = cov.delta * k;
    return out;
}

BisymmetryReport check_bisymmetry(const SampledMatrixFunction& cov) {
    cov.validate();
    if (cov.n != 2) throw ValidationError("check_bisymmetry: requires a 2-dimensional covariance");
    double scale_sq = 0.0, diag_sq = 0.0, cross_sq = 0.0;
    for (const auto& m : cov.values) {
        const double d = 0.5 * (m(0, 0) + m(1, 1));
        const double a = 0.5 * (m(0, 1) + m(1, 0));
        scale_sq += 2.0 * d * d + 2.0 * a * a;
        const double dd = m(0, 0) - m(1, 1);
        const double da = m(0, 1) - m(1, 0);
        diag_sq += dd * dd;
        cross_sq += da * da;
    }
    const auto lags = static_cast<double>(cov.values.size());
    const double scale = std::sqrt(scale_sq / (4.0 * lags));
    BisymmetryReport rep;
    if (scale > 0.0) {
        rep.diag_deviation = std::sqrt(diag_sq / lags) / scale;
        rep.cross_deviation = std::sqrt(cross_sq / lags) / scale;
    }
    return rep;
}

} // namespace hawkes
