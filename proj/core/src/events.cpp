#include "hawkes/events.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace hawkes {

std::size_t EventSeries::total_events() const {
    std::size_t s = 0;
    for (const auto& c : events) s += c.size();
    return s;
}

void EventSeries::validate(WarningList* warnings) const {
    if (n < 1) throw ValidationError("EventSeries: dimension must be >= 1");
    if (events.size() != static_cast<std::size_t>(n))
        throw ValidationError("EventSeries: component count does not match dimension");
    if (!(t_end >= t_start)) throw ValidationError("EventSeries: invalid window");
    for (int i = 0; i < n; ++i) {
        const auto& c = events[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (!std::isfinite(c[k]))
                throw ValidationError("EventSeries: non-finite timestamp in component " + std::to_string(i + 1));
            if (c[k] < t_start || c[k] > t_end)
                throw ValidationError("EventSeries: timestamp outside window in component " + std::to_string(i + 1));
            if (k > 0 && !(c[k] > c[k - 1]))
                throw ValidationError("EventSeries: timestamps not strictly increasing in component " +
                                      std::to_string(i + 1));
        }
    }
    if (warnings && n > 1) {
        std::size_t collisions = 0;
        std::multiset<double> seen;
        for (const auto& c : events)
            for (double t : c) seen.insert(t);
        for (auto it = seen.begin(); it != seen.end();) {
            auto cnt = seen.count(*it);
            if (cnt > 1) collisions += cnt - 1;
            std::advance(it, static_cast<long>(cnt));
        }
        if (collisions > 0)
            warnings->push_back("cross-component simultaneous timestamps: " + std::to_string(collisions));
    }
}

} // namespace hawkes
