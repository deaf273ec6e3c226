#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hawkes {

namespace {

// Relative kernel floor below which old events stop contributing to the
// intensity of power-law/tabulated entries; the induced truncation error is
// bounded and reported through run metadata by callers that care.
constexpr double kHistoryFloor = 1e-8;

double next_uniform(std::mt19937_64& rng) {
    // (x + 0.5) / 2^53 is strictly inside (0, 1), so -log(1-u) is finite and
    // positive: candidate waits can never be zero.
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

enum class EntryKind { zero, exponential, generic };

struct EntryRuntime {
    EntryKind kind = EntryKind::zero;
    // exponential
    double alpha = 0.0;
    double beta = 0.0;
    double state = 0.0; // sum of alpha * exp(-beta (t - t_k)) at current time
    // generic (power-law / tabulated)
    const KernelEntry* entry = nullptr;
    double cutoff = 0.0;
    // tabulated envelope: running max from the right at grid nodes
    std::vector<double> envelope;
    double env_dt = 0.0;

    double envelope_value(double u) const {
        if (envelope.empty()) return kernel_value(*entry, u); // monotone family
        if (u < 0.0) u = 0.0;
        const double extent = env_dt * static_cast<double>(envelope.size() - 1);
        if (u >= extent) return u == extent ? envelope.back() : 0.0;
        const auto j = static_cast<std::size_t>(u / env_dt);
        const double frac = u / env_dt - static_cast<double>(j);
        const double lin = envelope[j] * (1.0 - frac) + envelope[j + 1] * frac;
        return std::max(lin, envelope[j + 1]);
    }
};

EntryRuntime make_runtime(const KernelEntry& e) {
    EntryRuntime rt;
    if (std::holds_alternative<ZeroKernel>(e)) {
        rt.kind = EntryKind::zero;
    } else if (const auto* k = std::get_if<ExponentialKernel>(&e)) {
        rt.kind = k->alpha == 0.0 ? EntryKind::zero : EntryKind::exponential;
        rt.alpha = k->alpha;
        rt.beta = k->beta;
    } else {
        rt.kind = EntryKind::generic;
        rt.entry = &e;
        rt.cutoff = kernel_history_cutoff(e, kHistoryFloor);
        if (const auto* tab = std::get_if<TabulatedKernel>(&e)) {
            rt.env_dt = tab->dt;
            rt.envelope.assign(tab->values.begin(), tab->values.end());
            for (std::size_t j = rt.envelope.size() - 1; j-- > 0;)
                rt.envelope[j] = std::max(tab->values[j], rt.envelope[j + 1]);
        }
    }
    return rt;
}

} // namespace

void SimConfig::validate() const {
    if (!(horizon > 0.0)) throw ValidationError("SimConfig: horizon must be > 0");
    if (max_events == 0) throw ValidationError("SimConfig: max_events must be > 0");
}

double default_burn_in(const KernelSpec& spec, WarningList* warnings) {
    bool all_exp_or_zero = true;
    double min_beta = std::numeric_limits<double>::infinity();
    double min_beta_diag = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.n; ++i) {
        for (int j = 0; j < spec.n; ++j) {
            const auto& e = spec.entry(i, j);
            if (std::holds_alternative<ZeroKernel>(e)) continue;
            if (const auto* k = std::get_if<ExponentialKernel>(&e)) {
                if (k->alpha == 0.0) continue;
                min_beta = std::min(min_beta, k->beta);
                if (i == j) min_beta_diag = std::min(min_beta_diag, k->beta);
            } else {
                all_exp_or_zero = false;
            }
        }
    }
    if (all_exp_or_zero && std::isfinite(min_beta)) {
        const double b = std::isfinite(min_beta_diag) ? min_beta_diag : min_beta;
        return 20.0 / b;
    }
    if (!all_exp_or_zero && warnings)
        warnings->push_back("burn_in defaulted to 0 for a non-exponential kernel; "
                            "set SimConfig::burn_in explicitly to control the stationary warm-up");
    return 0.0;
}

EventSeries simulate(const KernelSpec& spec, const BackgroundRate& mu, const SimConfig& cfg,
                     WarningList* warnings) {
    spec.validate();
    mu.validate();
    cfg.validate();
    if (mu.mu.size() != spec.n) throw ValidationError("simulate: mu dimension does not match kernel");
    const double rho = spectral_radius(spec);
    if (!(rho < 1.0))
        throw ValidationError("simulate: spectral radius " + std::to_string(rho) +
                              " >= 1, process not stationary");

    const double burn = cfg.burn_in >= 0.0 ? cfg.burn_in : default_burn_in(spec, warnings);
    const double t_final = burn + cfg.horizon;
    const int n = spec.n;

    std::vector<EntryRuntime> rt;
    rt.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rt.push_back(make_runtime(spec.entry(i, j)));
    auto at = [&](int i, int j) -> EntryRuntime& { return rt[static_cast<std::size_t>(i) * n + j]; };

    // History is only kept for columns feeding a power-law/tabulated entry.
    std::vector<char> needs_history(static_cast<std::size_t>(n), 0);
    std::vector<double> col_cutoff(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (at(i, j).kind == EntryKind::generic) {
                needs_history[static_cast<std::size_t>(j)] = 1;
                col_cutoff[static_cast<std::size_t>(j)] =
                    std::max(col_cutoff[static_cast<std::size_t>(j)], at(i, j).cutoff);
            }
    std::vector<std::vector<double>> hist(static_cast<std::size_t>(n));
    std::vector<std::size_t> hist_start(static_cast<std::size_t>(n), 0);

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::vector<double>> accepted(static_cast<std::size_t>(n));
    std::size_t total = 0;

    double t = 0.0;
    std::vector<double> lambda(static_cast<std::size_t>(n));
    std::vector<double> bound(static_cast<std::size_t>(n));

    auto eval_at = [&](double tc, double dt) {
        // decay exponential states to tc, then accumulate intensity and
        // thinning bound (envelope values for non-monotone entries)
        for (auto& e : rt)
            if (e.kind == EntryKind::exponential) e.state *= std::exp(-e.beta * dt);
        for (int i = 0; i < n; ++i) {
            lambda[static_cast<std::size_t>(i)] = mu.mu[i];
            bound[static_cast<std::size_t>(i)] = mu.mu[i];
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const auto& e = at(i, j);
                if (e.kind == EntryKind::exponential) {
                    lambda[static_cast<std::size_t>(i)] += e.state;
                    bound[static_cast<std::size_t>(i)] += e.state;
                } else if (e.kind == EntryKind::generic) {
                    const auto& h = hist[static_cast<std::size_t>(j)];
                    double lam = 0.0, bnd = 0.0;
                    for (std::size_t k = hist_start[static_cast<std::size_t>(j)]; k < h.size(); ++k) {
                        const double u = tc - h[k];
                        if (u > e.cutoff) continue;
                        const double kv = kernel_value(*e.entry, u);
                        lam += kv;
                        bnd += e.envelope.empty() ? kv : e.envelope_value(u);
                    }
                    lambda[static_cast<std::size_t>(i)] += lam;
                    bound[static_cast<std::size_t>(i)] += bnd;
                }
            }
        }
    };

    eval_at(0.0, 0.0);
    while (true) {
        double total_bound = 0.0;
        for (double b : bound) total_bound += b;
        const double w = -std::log(1.0 - next_uniform(rng)) / total_bound;
        double tc = t + w;
        if (tc >= t_final) break;
        if (tc <= t) tc = std::nextafter(t, std::numeric_limits<double>::infinity());

        for (std::size_t j = 0; j < hist.size(); ++j)
            while (hist_start[j] < hist[j].size() && tc - hist[j][hist_start[j]] > col_cutoff[j])
                ++hist_start[j];

        eval_at(tc, tc - t);
        t = tc;

        double total_lambda = 0.0;
        for (double l : lambda) total_lambda += l;
        const double mark = next_uniform(rng) * total_bound;
        if (mark > total_lambda) continue; // thinned out

        int comp = 0;
        double acc = lambda[0];
        while (comp + 1 < n && mark > acc) acc += lambda[static_cast<std::size_t>(++comp)];

        accepted[static_cast<std::size_t>(comp)].push_back(t);
        if (++total > cfg.max_events)
            throw NumericalError("simulate: max_events exceeded; the spec is likely too close to "
                                 "non-stationarity or the horizon too long");
        for (int i = 0; i < n; ++i) {
            auto& e = at(i, comp);
            if (e.kind == EntryKind::exponential) {
                e.state += e.alpha;
                bound[static_cast<std::size_t>(i)] += e.alpha;
                lambda[static_cast<std::size_t>(i)] += e.alpha;
            } else if (e.kind == EntryKind::generic) {
                const double jump = kernel_value(*e.entry, 0.0);
                bound[static_cast<std::size_t>(i)] += e.envelope.empty() ? jump : e.envelope_value(0.0);
                lambda[static_cast<std::size_t>(i)] += jump;
            }
        }
        if (needs_history[static_cast<std::size_t>(comp)])
            hist[static_cast<std::size_t>(comp)].push_back(t);
    }

    EventSeries out;
    out.n = n;
    out.t_start = 0.0;
    out.t_end = cfg.horizon;
    out.events.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& dst = out.events[static_cast<std::size_t>(i)];
        for (double te : accepted[static_cast<std::size_t>(i)])
            if (te >= burn) dst.push_back(te - burn);
    }
    return out;
}

Mat intensity_trace(const KernelSpec& spec, const BackgroundRate& mu, const EventSeries& events,
                    double grid_step) {
    spec.validate();
    mu.validate();
    events.validate();
    if (!(grid_step > 0.0)) throw ValidationError("intensity_trace: grid step must be > 0");
    if (mu.mu.size() != spec.n || events.n != spec.n)
        throw ValidationError("intensity_trace: dimension mismatch");

    const int n = spec.n;
    const auto n_points = static_cast<std::size_t>(std::floor(events.window_length() / grid_step)) + 1;
    Mat trace = Mat::Zero(static_cast<Eigen::Index>(n_points), n);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto& entry = spec.entry(i, j);
            if (std::holds_alternative<ZeroKernel>(entry)) continue;
            const auto& src = events.events[static_cast<std::size_t>(j)];
            if (const auto* k = std::get_if<ExponentialKernel>(&entry)) {
                // rolling decay across grid points, folding in events as passed
                double state = 0.0;
                double prev = events.t_start;
                std::size_t next_ev = 0;
                for (std::size_t g = 0; g < n_points; ++g) {
                    const double tg = events.t_start + static_cast<double>(g) * grid_step;
                    while (next_ev < src.size() && src[next_ev] < tg) {
                        state *= std::exp(-k->beta * (src[next_ev] - prev));
                        state += k->alpha;
                        prev = src[next_ev];
                        ++next_ev;
                    }
                    state *= std::exp(-k->beta * (tg - prev));
                    prev = tg;
                    trace(static_cast<Eigen::Index>(g), i) += state;
                }
            } else {
                const double cutoff = kernel_history_cutoff(entry, kHistoryFloor);
                std::size_t start = 0;
                for (std::size_t g = 0; g < n_points; ++g) {
                    const double tg = events.t_start + static_cast<double>(g) * grid_step;
                    while (start < src.size() && tg - src[start] > cutoff) ++start;
                    double lam = 0.0;
                    for (std::size_t k2 = start; k2 < src.size() && src[k2] < tg; ++k2)
                        lam += kernel_value(entry, tg - src[k2]);
                    trace(static_cast<Eigen::Index>(g), i) += lam;
                }
            }
        }
    }
    for (std::size_t g = 0; g < n_points; ++g)
        for (int i = 0; i < n; ++i) trace(static_cast<Eigen::Index>(g), i) += mu.mu[i];
    return trace;
}

} // namespace hawkes
