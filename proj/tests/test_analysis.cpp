#include "hawkes/analysis.hpp"

#include "support/test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace hawkes;

namespace {

EstimatedKernel kernel_from_samples(const std::vector<double>& values, double delta) {
    EstimatedKernel k;
    k.n = 1;
    k.delta = delta;
    k.tau_max = delta * static_cast<double>(values.size() - 1);
    for (double v : values) {
        Mat m(1, 1);
        m(0, 0) = v;
        k.values.push_back(m);
    }
    return k;
}

} // namespace

TEST_CASE("l2_error is zero when the estimate equals the truth samples") {
    const double delta = 0.1;
    const KernelEntry truth{ExponentialKernel{0.8, 2.0}};
    std::vector<double> vals;
    for (int k = 0; k <= 20; ++k) vals.push_back(kernel_value(truth, k * delta));
    const auto est = kernel_from_samples(vals, delta);
    CHECK(l2_error(est, truth, delta, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("l2_error of a constant offset is K times the squared offset") {
    const double delta = 0.1, c = 0.05;
    const KernelEntry truth{ExponentialKernel{0.8, 2.0}};
    std::vector<double> vals;
    for (int k = 0; k <= 20; ++k) vals.push_back(kernel_value(truth, k * delta) + c);
    const auto est = kernel_from_samples(vals, delta);
    CHECK(l2_error(est, truth, delta, 2.0) == doctest::Approx(20.0 * c * c).epsilon(1e-12));
    // the t = 0 sample is excluded: distorting it changes nothing
    auto est2 = est;
    est2.values[0](0, 0) = 1e9;
    CHECK(l2_error(est2, truth, delta, 2.0) == doctest::Approx(20.0 * c * c).epsilon(1e-12));
}

TEST_CASE("l2_error rejects mismatched grids") {
    const KernelEntry truth{ExponentialKernel{1.0, 1.0}};
    const auto est = kernel_from_samples(std::vector<double>(11, 0.0), 0.1);
    CHECK_THROWS_AS(l2_error(est, truth, 0.2, 1.0), ValidationError);
    CHECK_THROWS_AS(l2_error(est, truth, 0.1, 0.35), ValidationError);
    CHECK_THROWS_AS(l2_error(est, truth, 0.1, 5.0), ValidationError);
}

TEST_CASE("log-log slope fit on equal errors is flat") {
    std::vector<ConvergencePoint> pts;
    for (double T : {1e3, 1e4, 1e5}) pts.push_back({T, 0.37, 0});
    double slope = 1.0, intercept = 0.0;
    fit_loglog_slope(pts, slope, intercept);
    CHECK(slope == doctest::Approx(0.0));
    CHECK(std::exp(intercept) == doctest::Approx(0.37));
}

TEST_CASE("log-log slope fit recovers an exact power law") {
    std::vector<ConvergencePoint> pts;
    for (double T : {1e3, 3e3, 1e4, 3e4, 1e5}) pts.push_back({T, 12.0 / T, 0});
    double slope = 0.0, intercept = 0.0;
    fit_loglog_slope(pts, slope, intercept);
    CHECK(slope == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("powerlaw_fit recovers exact log-linear data to machine precision") {
    const double delta = 0.05;
    std::vector<double> vals;
    for (int k = 0; k <= 400; ++k) {
        const double t = k * delta;
        vals.push_back(t > 0.0 ? 0.1 * std::pow(t, -1.05) : 0.0);
    }
    const auto est = kernel_from_samples(vals, delta);
    const auto rep = powerlaw_fit(est, 0.1, 10.0);
    CHECK(rep.alpha == doctest::Approx(0.1).epsilon(1e-10));
    CHECK(rep.beta == doctest::Approx(-1.05).epsilon(1e-10));
    CHECK(rep.residual_rms_log < 1e-12);
    CHECK(rep.points_excluded == 0);
}

TEST_CASE("powerlaw_fit reproduces the reference fit-report fixture") {
    // regression fixture: exact samples of 0.098624 * t^-1.05329 must come
    // back with the same report numbers
    const double delta = 0.1;
    std::vector<double> vals;
    for (int k = 0; k <= 1000; ++k) {
        const double t = k * delta;
        vals.push_back(t > 0.0 ? 0.098624 * std::pow(t, -1.05329) : 0.0);
    }
    const auto est = kernel_from_samples(vals, delta);
    const auto rep = powerlaw_fit(est, 0.2, 50.0);
    CHECK(rep.alpha == doctest::Approx(0.098624).epsilon(1e-9));
    CHECK(rep.beta == doctest::Approx(-1.05329).epsilon(1e-9));
}

TEST_CASE("powerlaw_fit flags exponential data with a large log residual") {
    const double delta = 0.05;
    std::vector<double> vals;
    for (int k = 0; k <= 400; ++k) vals.push_back(2.0 * std::exp(-1.5 * k * delta));
    const auto est = kernel_from_samples(vals, delta);
    const auto rep = powerlaw_fit(est, 0.5, 12.0); // a bit over a decade
    CHECK(rep.residual_rms_log > 0.1);
}

TEST_CASE("powerlaw_fit is exactly scale covariant") {
    const double delta = 0.05;
    std::vector<double> base;
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> noise(0.8, 1.2);
    for (int k = 0; k <= 200; ++k) {
        const double t = std::max(k * delta, 1e-9);
        base.push_back(0.3 * std::pow(t, -1.4) * noise(rng));
    }
    const auto rep1 = powerlaw_fit(kernel_from_samples(base, delta), 0.2, 8.0);
    std::vector<double> scaled;
    for (double v : base) scaled.push_back(7.5 * v);
    const auto rep2 = powerlaw_fit(kernel_from_samples(scaled, delta), 0.2, 8.0);
    CHECK(rep2.beta == doctest::Approx(rep1.beta).epsilon(1e-12));
    CHECK(rep2.alpha == doctest::Approx(7.5 * rep1.alpha).epsilon(1e-12));
    CHECK(rep2.residual_rms_log == doctest::Approx(rep1.residual_rms_log).epsilon(1e-9));
}

TEST_CASE("powerlaw_fit excludes nonpositive samples and requires three points") {
    std::vector<double> vals{0.0, 1.0, -0.5, 0.0, 0.2};
    const auto est = kernel_from_samples(vals, 1.0);
    CHECK_THROWS_AS(powerlaw_fit(est, 0.5, 4.5), ValidationError); // only 2 positive points
    vals = {0.0, 1.0, -0.5, 0.4, 0.2, 0.1};
    const auto rep = powerlaw_fit(kernel_from_samples(vals, 1.0), 0.5, 5.5);
    CHECK(rep.points_used == 4);
    CHECK(rep.points_excluded == 1);
}

TEST_CASE("normal quantile function matches reference values") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-8));
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-8));
    CHECK(normal_quantile(0.99) == doctest::Approx(2.326347874040841).epsilon(1e-8));
    CHECK(normal_quantile(1e-6) == doctest::Approx(-4.753424308822899).epsilon(1e-7));
    CHECK_THROWS_AS(normal_quantile(0.0), ValidationError);
}

TEST_CASE("delta_sweep on a single delta returns that delta as argmin" * doctest::timeout(300)) {
    const auto spec = KernelSpec::exponential_1d(1.0, 4.0);
    BackgroundRate mu{Vec::Ones(1)};
    const auto sweep = delta_sweep(spec, mu, 2000.0, {0.1}, 2.0, {1, 2});
    CHECK(sweep.argmin_delta == 0.1);
    CHECK(sweep.rows.size() == 1);
    CHECK(sweep.rows[0].e2 > 0.0);
}

TEST_CASE("delta_sweep adjusts tau_max to a multiple of each delta" * doctest::timeout(300)) {
    const auto spec = KernelSpec::exponential_1d(1.0, 4.0);
    BackgroundRate mu{Vec::Ones(1)};
    const auto sweep = delta_sweep(spec, mu, 1000.0, {0.1, 0.3}, 2.0, {5});
    CHECK(sweep.rows[0].tau_max_effective == doctest::Approx(2.0));
    CHECK(sweep.rows[1].tau_max_effective == doctest::Approx(1.8));
    for (const auto& row : sweep.rows) CHECK(row.e2 > 0.0);
}
