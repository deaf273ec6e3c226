#pragma once

#include "hawkes/types.hpp"

#include <vector>

namespace hawkes {

/// Per-component sorted event timestamps over an observation window.
struct EventSeries {
    int n = 1;
    std::vector<std::vector<double>> events; // strictly increasing within a component
    double t_start = 0.0;
    double t_end = 0.0;

    double window_length() const { return t_end - t_start; }
    std::size_t total_events() const;

    /// Checks dimension, window, per-component strict ordering and bounds.
    /// Cross-component simultaneous timestamps are tolerated; the count of
    /// such collisions is appended to `warnings` when provided.
    void validate(WarningList* warnings = nullptr) const;
};

} // namespace hawkes
