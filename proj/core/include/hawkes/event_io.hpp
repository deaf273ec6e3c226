#pragma once

#include "hawkes/covariance.hpp"
#include "hawkes/events.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hawkes {

/// Mid-price observations: strictly increasing timestamps, finite prices.
struct PriceSeries {
    std::vector<double> timestamps;
    std::vector<double> prices;
    double tick_size = 1.0;

    void validate() const;
};

/// Absolute-time observation window, e.g. one trading session.
struct DayWindow {
    std::string label;
    double start = 0.0;
    double end = 0.0;
};

struct WindowedSeries {
    std::string label;
    EventSeries events; // rebased so the window starts at t = 0
};

struct WindowDropReport {
    std::vector<std::string> dropped_labels;
    std::size_t min_events = 0;
};

// --- event CSV: header "component,timestamp", components 1..n ---
EventSeries parse_events(const std::string& path, int expected_dimension = 0,
                         WarningList* warnings = nullptr);
void write_events(const std::string& path, const EventSeries& events);

// --- price CSV: header "timestamp,price" ---
PriceSeries parse_prices(const std::string& path, WarningList* warnings = nullptr);

/// Up/down decomposition of a mid-price path: one component-1 event per
/// strict price increase, one component-2 event per strict decrease; jump
/// magnitudes are ignored.
EventSeries midprice_to_updown(const PriceSeries& prices, WarningList* warnings = nullptr);

/// One rebased series per window; windows with fewer than min_events events
/// are dropped and reported. Windows must be pairwise disjoint.
std::vector<WindowedSeries> window_and_split(const EventSeries& events,
                                             const std::vector<DayWindow>& windows,
                                             std::size_t min_events, WindowDropReport* report = nullptr);
std::vector<WindowedSeries> window_and_split(const PriceSeries& prices,
                                             const std::vector<DayWindow>& windows,
                                             std::size_t min_events, WindowDropReport* report = nullptr);

// --- kernel spec JSON: {"n":..,"entries":[[{"type":..},..],..],"mu":[..]} ---
struct KernelSpecFile {
    KernelSpec spec;
    BackgroundRate mu;
};
KernelSpecFile parse_kernel_spec_json(const std::string& text);
KernelSpecFile load_kernel_spec(const std::string& path);
std::string kernel_spec_to_json(const KernelSpec& spec, const BackgroundRate& mu);

// --- windows JSON: [{"label":..,"start":..,"end":..},..] ---
std::vector<DayWindow> load_windows(const std::string& path);

// --- covariance CSV "lag,v11,..,vnn" + JSON sidecar {h,delta,tau_max,n,lambda_bar} ---
void write_covariance(const std::string& csv_path, const std::string& sidecar_path,
                      const SampledMatrixFunction& cov, const Vec& lambda_bar);
struct CovarianceFile {
    SampledMatrixFunction cov;
    Vec lambda_bar;
};
CovarianceFile load_covariance(const std::string& csv_path, const std::string& sidecar_path);

// --- estimated kernel CSV "t,phi11[,phi12,..]" + JSON sidecar ---
void write_kernel(const std::string& csv_path, const std::string& sidecar_path,
                  const EstimatedKernel& kernel);
EstimatedKernel load_kernel(const std::string& csv_path, const std::string& sidecar_path);

/// write-temp-then-rename
void atomic_write_text(const std::string& path, const std::string& content);

/// FNV-1a hash of a file's bytes, as 16 hex digits (input fingerprints for
/// diagnostics and error messages).
std::string file_fingerprint(const std::string& path);

} // namespace hawkes
