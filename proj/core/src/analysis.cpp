#include "hawkes/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace hawkes {

namespace {

int checked_lag_count(const EstimatedKernel& est, double delta, double tau_max) {
    if (std::abs(est.delta - delta) > 1e-12 * std::max(delta, est.delta))
        throw ValidationError("l2_error: grid step mismatch");
    const int k = static_cast<int>(std::llround(tau_max / delta));
    if (k < 1 || std::abs(k * delta - tau_max) > 1e-9 * std::max(1.0, tau_max))
        throw ValidationError("l2_error: tau_max is not a multiple of delta");
    if (est.grid_points() < k + 1)
        throw ValidationError("l2_error: estimate grid shorter than tau_max");
    return k;
}

} // namespace

double l2_error(const EstimatedKernel& est, const KernelEntry& truth, double delta, double tau_max,
                int row, int col) {
    const int k_max = checked_lag_count(est, delta, tau_max);
    double acc = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        const double d = est.value(k, row, col) - kernel_value(truth, k * delta);
        acc += d * d;
    }
    return acc;
}

double relative_l2_error(const EstimatedKernel& est, const KernelEntry& truth, double delta,
                         double tau_max, int row, int col) {
    const int k_max = checked_lag_count(est, delta, tau_max);
    double norm = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        const double v = kernel_value(truth, k * delta);
        norm += v * v;
    }
    if (!(norm > 0.0)) throw ValidationError("relative_l2_error: reference kernel is zero on the grid");
    return std::sqrt(l2_error(est, truth, delta, tau_max, row, col) / norm);
}

void fit_loglog_slope(const std::vector<ConvergencePoint>& points, double& slope, double& intercept) {
    if (points.size() < 2) throw ValidationError("fit_loglog_slope: need at least two points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        if (!(p.horizon > 0.0) || !(p.e2 > 0.0))
            throw ValidationError("fit_loglog_slope: nonpositive T or e2");
        const double x = std::log(p.horizon);
        const double y = std::log(p.e2);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const auto n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw ValidationError("fit_loglog_slope: degenerate abscissae");
    slope = (n * sxy - sx * sy) / denom;
    intercept = (sy - slope * sx) / n;
}

ConvergenceStudy convergence_study(const KernelSpec& spec, const BackgroundRate& mu,
                                   const std::vector<double>& horizons,
                                   const std::vector<std::uint64_t>& seeds,
                                   const CovarianceConfig& cfg) {
    spec.validate();
    if (spec.n != 1) throw ValidationError("convergence_study: 1-dimensional specs only");
    ConvergenceStudy out;
    for (double horizon : horizons) {
        for (std::uint64_t seed : seeds) {
            SimConfig sim_cfg;
            sim_cfg.horizon = horizon;
            sim_cfg.seed = seed;
            const auto events = simulate(spec, mu, sim_cfg);
            const auto lam = estimate_mean_intensity(events);
            const auto cov = estimate_covariance(events, cfg);
            const auto est = estimate_kernel_1d(cov, lam.lambda_bar[0]);
            ConvergencePoint p;
            p.horizon = horizon;
            p.seed = seed;
            p.e2 = l2_error(est, spec.entry(0, 0), cfg.delta, cfg.tau_max);
            out.points.push_back(p);
        }
    }
    fit_loglog_slope(out.points, out.slope, out.intercept);
    return out;
}

PointwiseErrorSamples pointwise_error_samples(const KernelSpec& spec, const BackgroundRate& mu,
                                              const CovarianceConfig& cfg, double horizon,
                                              int n_seeds, const std::vector<double>& t_values,
                                              std::uint64_t seed_base) {
    spec.validate();
    if (spec.n != 1) throw ValidationError("pointwise_error_samples: 1-dimensional specs only");
    if (n_seeds < 2) throw ValidationError("pointwise_error_samples: need at least two seeds");

    std::vector<int> indices;
    for (double t : t_values) {
        const int k = static_cast<int>(std::llround(t / cfg.delta));
        if (std::abs(k * cfg.delta - t) > 1e-9 * std::max(1.0, t))
            throw ValidationError("pointwise_error_samples: t value not on the estimation grid");
        indices.push_back(k);
    }

    PointwiseErrorSamples out;
    out.t_values = t_values;
    out.errors.assign(t_values.size(), {});

    for (int s = 0; s < n_seeds; ++s) {
        SimConfig sim_cfg;
        sim_cfg.horizon = horizon;
        sim_cfg.seed = seed_base + static_cast<std::uint64_t>(s);
        const auto events = simulate(spec, mu, sim_cfg);
        const auto lam = estimate_mean_intensity(events);
        const auto cov = estimate_covariance(events, cfg);
        const auto est = estimate_kernel_1d(cov, lam.lambda_bar[0]);
        for (std::size_t i = 0; i < indices.size(); ++i) {
            const double truth = kernel_value(spec.entry(0, 0), t_values[i]);
            out.errors[i].push_back(est.value(indices[static_cast<std::size_t>(i)]) - truth);
        }
    }

    out.standardized.resize(out.errors.size());
    out.qq.resize(out.errors.size());
    for (std::size_t i = 0; i < out.errors.size(); ++i) {
        const auto& e = out.errors[i];
        const auto n = static_cast<double>(e.size());
        const double mean = std::accumulate(e.begin(), e.end(), 0.0) / n;
        double var = 0.0;
        for (double v : e) var += (v - mean) * (v - mean);
        var /= (n - 1.0);
        const double sd = std::sqrt(var);
        auto& st = out.standardized[i];
        st.reserve(e.size());
        for (double v : e) st.push_back(sd > 0.0 ? (v - mean) / sd : 0.0);

        auto sorted = st;
        std::sort(sorted.begin(), sorted.end());
        auto& pairs = out.qq[i];
        pairs.reserve(sorted.size());
        for (std::size_t r = 0; r < sorted.size(); ++r) {
            const double p = (static_cast<double>(r) + 0.5) / n;
            pairs.emplace_back(normal_quantile(p), sorted[r]);
        }
    }
    return out;
}

FitReport powerlaw_fit(const std::vector<double>& t, const std::vector<double>& phi, double t_lo,
                       double t_hi) {
    if (t.size() != phi.size()) throw ValidationError("powerlaw_fit: t/phi size mismatch");
    if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw ValidationError("powerlaw_fit: need 0 < t_lo < t_hi");

    FitReport rep;
    rep.t_lo = t_lo;
    rep.t_hi = t_hi;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi) continue;
        if (!(phi[i] > 0.0)) {
            ++rep.points_excluded;
            continue;
        }
        lx.push_back(std::log(t[i]));
        ly.push_back(std::log(phi[i]));
    }
    rep.points_used = static_cast<int>(lx.size());
    if (rep.points_used < 3)
        throw ValidationError("powerlaw_fit: fewer than 3 positive samples in the fit range");

    const auto n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw ValidationError("powerlaw_fit: degenerate abscissae");
    rep.beta = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - rep.beta * sx) / n;
    rep.alpha = std::exp(intercept);

    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + rep.beta * lx[i]);
        rss += r * r;
    }
    rep.residual_rms_log = std::sqrt(rss / n);
    return rep;
}

FitReport powerlaw_fit(const EstimatedKernel& kernel, double t_lo, double t_hi, int row, int col) {
    std::vector<double> t, phi;
    t.reserve(kernel.values.size());
    phi.reserve(kernel.values.size());
    for (int k = 0; k < kernel.grid_points(); ++k) {
        t.push_back(k * kernel.delta);
        phi.push_back(kernel.value(k, row, col));
    }
    return powerlaw_fit(t, phi, t_lo, t_hi);
}

DeltaSweep delta_sweep(const KernelSpec& spec, const BackgroundRate& mu, double horizon,
                       const std::vector<double>& deltas, double tau_max,
                       const std::vector<std::uint64_t>& seeds) {
    spec.validate();
    if (spec.n != 1) throw ValidationError("delta_sweep: 1-dimensional specs only");
    if (deltas.empty() || seeds.empty()) throw ValidationError("delta_sweep: empty deltas or seeds");

    DeltaSweep out;
    out.rows.resize(deltas.size());
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        out.rows[d].delta = deltas[d];
        const int k = static_cast<int>(std::floor(tau_max / deltas[d] + 1e-9));
        if (k < 1) throw ValidationError("delta_sweep: tau_max smaller than delta");
        out.rows[d].tau_max_effective = k * deltas[d];
    }

    for (std::uint64_t seed : seeds) {
        SimConfig sim_cfg;
        sim_cfg.horizon = horizon;
        sim_cfg.seed = seed;
        const auto events = simulate(spec, mu, sim_cfg); // one common sample per seed
        const auto lam = estimate_mean_intensity(events);
        for (std::size_t d = 0; d < deltas.size(); ++d) {
            CovarianceConfig cfg;
            cfg.h = deltas[d];
            cfg.delta = deltas[d];
            cfg.tau_max = out.rows[d].tau_max_effective;
            const auto cov = estimate_covariance(events, cfg);
            const auto est = estimate_kernel_1d(cov, lam.lambda_bar[0]);
            out.rows[d].e2 += l2_error(est, spec.entry(0, 0), cfg.delta, cfg.tau_max);
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (auto& row : out.rows) {
        row.e2 /= static_cast<double>(seeds.size());
        if (row.e2 < best) {
            best = row.e2;
            out.argmin_delta = row.delta;
        }
    }
    return out;
}

// Acklam's rational approximation, refined with one Halley step; absolute
// error well below 1e-9 on (0, 1).
double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw ValidationError("normal_quantile: p must be in (0, 1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement against the normal CDF expressed with erfc
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

} // namespace hawkes
