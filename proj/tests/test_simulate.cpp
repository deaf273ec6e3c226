#include "hawkes/simulate.hpp"

#include "support/test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace hawkes;

namespace {

// Time-rescaling residuals: integrals of the traced intensity between
// consecutive events of one component, by trapezoid on a fine grid plus
// partial end segments. Independent of the simulator's internal state.
std::vector<double> rescaling_residuals(const Mat& trace, double step, const std::vector<double>& events,
                                        int component) {
    std::vector<double> out;
    auto lam_at = [&](double t) {
        const auto g = static_cast<Eigen::Index>(t / step);
        const auto gmax = trace.rows() - 1;
        if (g >= gmax) return trace(gmax, component);
        const double frac = t / step - static_cast<double>(g);
        return trace(g, component) * (1.0 - frac) + trace(g + 1, component) * frac;
    };
    for (std::size_t k = 1; k < events.size(); ++k) {
        const double a = events[k - 1];
        const double b = events[k];
        double acc = 0.0;
        // trapezoid over interior grid points; linear interpolation at the ends
        const auto ga = static_cast<Eigen::Index>(std::ceil(a / step));
        const auto gb = static_cast<Eigen::Index>(std::floor(b / step));
        if (ga > gb) {
            acc = 0.5 * (lam_at(a) + lam_at(b)) * (b - a);
        } else {
            acc += 0.5 * (lam_at(a) + trace(ga, component)) * (ga * step - a);
            for (Eigen::Index g = ga; g < gb; ++g)
                acc += 0.5 * (trace(g, component) + trace(g + 1, component)) * step;
            acc += 0.5 * (trace(gb, component) + lam_at(b)) * (b - gb * step);
        }
        out.push_back(acc);
    }
    return out;
}

} // namespace

TEST_CASE("simulation is deterministic in the seed") {
    const auto spec = KernelSpec::exponential_1d(1.0, 4.0);
    BackgroundRate mu{Vec::Ones(1)};
    SimConfig cfg;
    cfg.horizon = 200.0;
    cfg.seed = 42;
    const auto a = simulate(spec, mu, cfg);
    const auto b = simulate(spec, mu, cfg);
    REQUIRE(a.events[0].size() == b.events[0].size());
    CHECK(a.events[0] == b.events[0]);
    cfg.seed = 43;
    const auto c = simulate(spec, mu, cfg);
    CHECK(a.events[0] != c.events[0]);
}

TEST_CASE("non-stationary specs are rejected up front") {
    BackgroundRate mu{Vec::Ones(1)};
    SimConfig cfg;
    cfg.horizon = 10.0;
    CHECK_THROWS_AS(simulate(KernelSpec::exponential_1d(5.0, 4.0), mu, cfg), ValidationError);
}

TEST_CASE("max_events cap triggers a numerical error") {
    const auto spec = KernelSpec::exponential_1d(1.0, 4.0);
    BackgroundRate mu{Vec::Ones(1)};
    SimConfig cfg;
    cfg.horizon = 1000.0;
    cfg.max_events = 50;
    CHECK_THROWS_AS(simulate(spec, mu, cfg), NumericalError);
}

TEST_CASE("event count matches the stationary rate at long horizons" * doctest::timeout(120)) {
    const auto spec = KernelSpec::exponential_1d(1.0, 4.0);
    BackgroundRate mu{Vec::Ones(1)};
    SimConfig cfg;
    cfg.horizon = 1e5;
    cfg.seed = 12345;
    const auto events = simulate(spec, mu, cfg);
    const auto count = static_cast<double>(events.events[0].size());
    CHECK(count >= 1.30e5);
    CHECK(count <= 1.37e5);
    // empirical rate within 2% of 4/3
    CHECK(std::abs(count / 1e5 - 4.0 / 3.0) / (4.0 / 3.0) < 0.02);
}

TEST_CASE("zero kernel degenerates to a Poisson process (KS on gaps)") {
    const auto spec = KernelSpec::zero(1);
    BackgroundRate mu{(Vec(1) << 2.0).finished()};
    SimConfig cfg;
    cfg.horizon = 1000.0;
    cfg.seed = 99;
    const auto events = simulate(spec, mu, cfg);
    std::vector<double> gaps;
    for (std::size_t i = 1; i < events.events[0].size(); ++i)
        gaps.push_back(events.events[0][i] - events.events[0][i - 1]);
    REQUIRE(gaps.size() > 1000);
    const double d = testutil::ks_statistic(gaps, [](double x) { return testutil::exponential_cdf(x, 2.0); });
    CHECK(d < testutil::ks_critical_1pct(gaps.size()));
}

TEST_CASE("2D bisymmetric spec produces the expected jump counts" * doctest::timeout(120)) {
    const auto spec = KernelSpec::bisymmetric(ExponentialKernel{0.5, 8.0}, ExponentialKernel{1.0, 4.0});
    BackgroundRate mu{Vec::Ones(2)};
    SimConfig cfg;
    cfg.horizon = 41250.0; // about 60000 jumps per component at rate 16/11
    cfg.seed = 2024;
    const auto events = simulate(spec, mu, cfg);
    for (int i = 0; i < 2; ++i) {
        const auto count = static_cast<double>(events.events[static_cast<std::size_t>(i)].size());
        CHECK(count == doctest::Approx(60000.0).epsilon(0.05));
    }
}

TEST_CASE("intensity trace with no events is the background rate") {
    const auto spec = KernelSpec::exponential_1d(1.0, 4.0);
    BackgroundRate mu{(Vec(1) << 0.8).finished()};
    EventSeries ev;
    ev.n = 1;
    ev.events = {{}};
    ev.t_start = 0.0;
    ev.t_end = 10.0;
    const Mat trace = intensity_trace(spec, mu, ev, 0.5);
    for (Eigen::Index g = 0; g < trace.rows(); ++g) CHECK(trace(g, 0) == doctest::Approx(0.8));
}

TEST_CASE("intensity trace after a single event decays like the kernel") {
    const auto spec = KernelSpec::exponential_1d(0.9, 2.5);
    BackgroundRate mu{(Vec(1) << 1.0).finished()};
    EventSeries ev;
    ev.n = 1;
    ev.events = {{0.0}};
    ev.t_start = 0.0;
    ev.t_end = 4.0;
    const double step = 0.01;
    const Mat trace = intensity_trace(spec, mu, ev, step);
    for (Eigen::Index g = 1; g < trace.rows(); ++g) {
        const double t = static_cast<double>(g) * step;
        CHECK(trace(g, 0) == doctest::Approx(1.0 + 0.9 * std::exp(-2.5 * t)).epsilon(1e-9));
    }
    // at the event time itself the left limit applies
    CHECK(trace(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("time-rescaling residuals of a simulated path are exponential(1)" * doctest::timeout(120)) {
    const auto spec = KernelSpec::exponential_1d(1.0, 4.0);
    BackgroundRate mu{Vec::Ones(1)};
    SimConfig cfg;
    cfg.horizon = 2000.0;
    cfg.seed = 7;
    const auto events = simulate(spec, mu, cfg);
    const double step = 5e-4;
    const Mat trace = intensity_trace(spec, mu, events, step);
    const auto residuals = rescaling_residuals(trace, step, events.events[0], 0);
    REQUIRE(residuals.size() > 2000);
    const double d =
        testutil::ks_statistic(residuals, [](double x) { return testutil::exponential_cdf(x, 1.0); });
    CHECK(d < testutil::ks_critical_1pct(residuals.size()));
}

TEST_CASE("tabulated kernels simulate with a valid thinning bound") {
    // a non-monotone tabulated kernel exercises the envelope bound
    TabulatedKernel tab;
    tab.dt = 0.2;
    tab.values = {0.1, 0.6, 0.2, 0.5, 0.05, 0.0};
    KernelSpec spec;
    spec.n = 1;
    spec.entries = {tab};
    REQUIRE(spectral_radius(spec) < 1.0);
    BackgroundRate mu{Vec::Ones(1)};
    SimConfig cfg;
    cfg.horizon = 3000.0;
    cfg.seed = 11;
    WarningList warnings;
    const auto events = simulate(spec, mu, cfg, &warnings);
    // stationary rate mu/(1 - integral)
    const double lam = 1.0 / (1.0 - kernel_integral(KernelEntry{tab}));
    const auto count = static_cast<double>(events.events[0].size());
    CHECK(count / 3000.0 == doctest::Approx(lam).epsilon(0.1));
    // time-rescaling residuals validate the thinning bound for this family
    const double step = 1e-3;
    const Mat trace = intensity_trace(spec, mu, events, step);
    const auto residuals = rescaling_residuals(trace, step, events.events[0], 0);
    const double d =
        testutil::ks_statistic(residuals, [](double x) { return testutil::exponential_cdf(x, 1.0); });
    CHECK(d < testutil::ks_critical_1pct(residuals.size()));
}

TEST_CASE("default burn-in follows the slowest diagonal decay") {
    const auto spec = KernelSpec::bisymmetric(ExponentialKernel{0.5, 8.0}, ExponentialKernel{1.0, 4.0});
    CHECK(default_burn_in(spec) == doctest::Approx(20.0 / 8.0));
    WarningList warnings;
    CHECK(default_burn_in(KernelSpec::power_law_1d(1.0, -3.0, 1.0), &warnings) == 0.0);
    CHECK(warnings.size() == 1);
}
