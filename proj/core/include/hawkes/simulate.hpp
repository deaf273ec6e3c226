#pragma once

#include "hawkes/events.hpp"
#include "hawkes/kernels.hpp"

#include <cstdint>
#include <string>

namespace hawkes {

struct SimConfig {
    double horizon = 0.0;       // T, seconds
    std::uint64_t seed = 0;
    double burn_in = -1.0;      // < 0 means "pick the default for the spec"
    std::size_t max_events = 50'000'000;

    void validate() const;
};

/// Default burn-in: 20 / min(diagonal beta) for specs whose diagonal is
/// exponential, otherwise 0 (with a warning pushed to `warnings`).
double default_burn_in(const KernelSpec& spec, WarningList* warnings = nullptr);

/// Identifier of the generator used by simulate(); stored in run metadata.
inline const char* rng_algorithm() { return "mt19937_64"; }

/// Ogata thinning simulation of a stationary path on [0, cfg.horizon].
/// Deterministic for fixed (spec, mu, cfg). Events falling in the burn-in
/// prefix are discarded; remaining timestamps are rebased to 0.
EventSeries simulate(const KernelSpec& spec, const BackgroundRate& mu, const SimConfig& cfg,
                     WarningList* warnings = nullptr);

/// lambda(t) = mu + sum over past events of phi(t - t_i), evaluated on a
/// uniform grid over the event window. Row g of the result is the intensity
/// vector at grid point g.
Mat intensity_trace(const KernelSpec& spec, const BackgroundRate& mu, const EventSeries& events,
                    double grid_step);

} // namespace hawkes
