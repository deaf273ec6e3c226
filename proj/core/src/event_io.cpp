#include "hawkes/event_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hawkes {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    return fields;
}

double parse_number(const std::string& s, const std::string& context, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(context + ": malformed number '" + s + "' at line " +
                              std::to_string(line_no));
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    return in;
}

KernelEntry entry_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "zero") return ZeroKernel{};
    if (type == "exp")
        return ExponentialKernel{j.at("alpha").get<double>(), j.at("beta").get<double>()};
    if (type == "powerlaw")
        return PowerLawKernel{j.at("alpha").get<double>(), j.at("beta").get<double>(),
                              j.at("gamma").get<double>()};
    if (type == "tabulated") {
        TabulatedKernel k;
        k.dt = j.at("dt").get<double>();
        k.values = j.at("values").get<std::vector<double>>();
        return k;
    }
    throw ValidationError("kernel spec: unknown entry type '" + type + "'");
}

json entry_to_json(const KernelEntry& e) {
    json j;
    if (std::holds_alternative<ZeroKernel>(e)) {
        j["type"] = "zero";
    } else if (const auto* k = std::get_if<ExponentialKernel>(&e)) {
        j["type"] = "exp";
        j["alpha"] = k->alpha;
        j["beta"] = k->beta;
    } else if (const auto* k2 = std::get_if<PowerLawKernel>(&e)) {
        j["type"] = "powerlaw";
        j["alpha"] = k2->alpha;
        j["beta"] = k2->beta;
        j["gamma"] = k2->gamma;
    } else if (const auto* k3 = std::get_if<TabulatedKernel>(&e)) {
        j["type"] = "tabulated";
        j["dt"] = k3->dt;
        j["values"] = k3->values;
    }
    return j;
}

} // namespace

void PriceSeries::validate() const {
    if (timestamps.size() != prices.size())
        throw ValidationError("PriceSeries: timestamp/price length mismatch");
    if (!(tick_size > 0.0)) throw ValidationError("PriceSeries: tick size must be > 0");
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        if (!std::isfinite(prices[i])) throw ValidationError("PriceSeries: non-finite price");
        if (i > 0 && !(timestamps[i] > timestamps[i - 1]))
            throw ValidationError("PriceSeries: timestamps must be strictly increasing");
    }
}

EventSeries parse_events(const std::string& path, int expected_dimension, WarningList* warnings) {
    auto in = open_or_throw(path);
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    std::vector<std::pair<int, double>> rows;
    int max_component = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (!saw_header) {
            saw_header = true;
            if (t == "component,timestamp") continue;
            // fall through: headerless files are accepted
        }
        const auto fields = split_csv_line(t);
        if (fields.size() != 2)
            throw ValidationError("parse_events: expected 'component,timestamp' at line " +
                                  std::to_string(line_no));
        const double comp_raw = parse_number(fields[0], "parse_events", line_no);
        const int comp = static_cast<int>(comp_raw);
        if (comp < 1 || comp != comp_raw)
            throw ValidationError("parse_events: component must be a positive integer at line " +
                                  std::to_string(line_no));
        if (expected_dimension > 0 && comp > expected_dimension)
            throw ValidationError("parse_events: component " + std::to_string(comp) +
                                  " exceeds declared dimension " + std::to_string(expected_dimension) +
                                  " at line " + std::to_string(line_no));
        const double ts = parse_number(fields[1], "parse_events", line_no);
        rows.emplace_back(comp, ts);
        max_component = std::max(max_component, comp);
    }
    if (rows.empty()) throw ValidationError("parse_events: no event rows in " + path);

    EventSeries out;
    out.n = expected_dimension > 0 ? expected_dimension : max_component;
    out.events.resize(static_cast<std::size_t>(out.n));
    bool was_sorted = true;
    for (const auto& [comp, ts] : rows) {
        auto& dst = out.events[static_cast<std::size_t>(comp - 1)];
        if (!dst.empty() && ts < dst.back()) was_sorted = false;
        dst.push_back(ts);
    }
    if (!was_sorted) {
        for (auto& c : out.events) std::sort(c.begin(), c.end());
        if (warnings) warnings->push_back("input events were out of order; sorted=true");
    }
    for (int i = 0; i < out.n; ++i) {
        const auto& c = out.events[static_cast<std::size_t>(i)];
        for (std::size_t k = 1; k < c.size(); ++k)
            if (c[k] == c[k - 1])
                throw ValidationError("parse_events: duplicate timestamp " + format_double(c[k]) +
                                      " in component " + std::to_string(i + 1));
    }
    double lo = rows.front().second, hi = rows.front().second;
    for (const auto& [comp, ts] : rows) {
        lo = std::min(lo, ts);
        hi = std::max(hi, ts);
    }
    out.t_start = lo;
    out.t_end = hi;
    out.validate(warnings);
    return out;
}

void write_events(const std::string& path, const EventSeries& events) {
    events.validate();
    std::string body = "component,timestamp\n";
    // merge components in time order for a readable file
    std::vector<std::size_t> cursor(events.events.size(), 0);
    while (true) {
        int best = -1;
        for (int i = 0; i < events.n; ++i) {
            const auto& c = events.events[static_cast<std::size_t>(i)];
            if (cursor[static_cast<std::size_t>(i)] >= c.size()) continue;
            if (best < 0 || c[cursor[static_cast<std::size_t>(i)]] <
                                events.events[static_cast<std::size_t>(best)][cursor[static_cast<std::size_t>(best)]])
                best = i;
        }
        if (best < 0) break;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%d,%.9f\n", best + 1,
                      events.events[static_cast<std::size_t>(best)][cursor[static_cast<std::size_t>(best)]]);
        body += buf;
        ++cursor[static_cast<std::size_t>(best)];
    }
    atomic_write_text(path, body);
}

PriceSeries parse_prices(const std::string& path, WarningList* warnings) {
    auto in = open_or_throw(path);
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    PriceSeries out;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (!saw_header) {
            saw_header = true;
            if (t == "timestamp,price") continue;
        }
        const auto fields = split_csv_line(t);
        if (fields.size() != 2)
            throw ValidationError("parse_prices: expected 'timestamp,price' at line " +
                                  std::to_string(line_no));
        out.timestamps.push_back(parse_number(fields[0], "parse_prices", line_no));
        out.prices.push_back(parse_number(fields[1], "parse_prices", line_no));
    }
    if (out.timestamps.empty()) throw ValidationError("parse_prices: no rows in " + path);
    bool sorted = std::is_sorted(out.timestamps.begin(), out.timestamps.end());
    if (!sorted) {
        std::vector<std::size_t> order(out.timestamps.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return out.timestamps[a] < out.timestamps[b]; });
        PriceSeries sorted_out;
        sorted_out.tick_size = out.tick_size;
        for (std::size_t i : order) {
            sorted_out.timestamps.push_back(out.timestamps[i]);
            sorted_out.prices.push_back(out.prices[i]);
        }
        out = std::move(sorted_out);
        if (warnings) warnings->push_back("input prices were out of order; sorted=true");
    }
    out.validate();
    return out;
}

EventSeries midprice_to_updown(const PriceSeries& prices, WarningList* warnings) {
    prices.validate();
    (void)warnings;
    EventSeries out;
    out.n = 2;
    out.events.resize(2);
    for (std::size_t i = 1; i < prices.prices.size(); ++i) {
        if (prices.prices[i] > prices.prices[i - 1])
            out.events[0].push_back(prices.timestamps[i]);
        else if (prices.prices[i] < prices.prices[i - 1])
            out.events[1].push_back(prices.timestamps[i]);
    }
    if (!prices.timestamps.empty()) {
        out.t_start = prices.timestamps.front();
        out.t_end = prices.timestamps.back();
    }
    return out;
}

namespace {

void check_windows(const std::vector<DayWindow>& windows) {
    if (windows.empty()) throw ValidationError("window_and_split: no windows");
    auto sorted = windows;
    std::sort(sorted.begin(), sorted.end(),
              [](const DayWindow& a, const DayWindow& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i].end > sorted[i].start))
            throw ValidationError("window_and_split: window '" + sorted[i].label + "' has start >= end");
        if (i > 0 && sorted[i].start < sorted[i - 1].end)
            throw ValidationError("window_and_split: overlapping windows '" + sorted[i - 1].label +
                                  "' and '" + sorted[i].label + "'");
    }
}

} // namespace

std::vector<WindowedSeries> window_and_split(const EventSeries& events,
                                             const std::vector<DayWindow>& windows,
                                             std::size_t min_events, WindowDropReport* report) {
    events.validate();
    check_windows(windows);
    if (report) report->min_events = min_events;
    std::vector<WindowedSeries> out;
    for (const auto& w : windows) {
        WindowedSeries day;
        day.label = w.label;
        day.events.n = events.n;
        day.events.t_start = 0.0;
        day.events.t_end = w.end - w.start;
        day.events.events.resize(static_cast<std::size_t>(events.n));
        std::size_t count = 0;
        for (int i = 0; i < events.n; ++i) {
            const auto& src = events.events[static_cast<std::size_t>(i)];
            auto lo = std::lower_bound(src.begin(), src.end(), w.start);
            auto hi = std::lower_bound(src.begin(), src.end(), w.end);
            for (auto it = lo; it != hi; ++it)
                day.events.events[static_cast<std::size_t>(i)].push_back(*it - w.start);
            count += static_cast<std::size_t>(hi - lo);
        }
        if (count < min_events) {
            if (report) report->dropped_labels.push_back(w.label);
            continue;
        }
        out.push_back(std::move(day));
    }
    return out;
}

std::vector<WindowedSeries> window_and_split(const PriceSeries& prices,
                                             const std::vector<DayWindow>& windows,
                                             std::size_t min_events, WindowDropReport* report) {
    prices.validate();
    check_windows(windows);
    if (report) report->min_events = min_events;
    std::vector<WindowedSeries> out;
    for (const auto& w : windows) {
        PriceSeries slice;
        slice.tick_size = prices.tick_size;
        for (std::size_t i = 0; i < prices.timestamps.size(); ++i) {
            if (prices.timestamps[i] < w.start || prices.timestamps[i] >= w.end) continue;
            slice.timestamps.push_back(prices.timestamps[i]);
            slice.prices.push_back(prices.prices[i]);
        }
        WindowedSeries day;
        day.label = w.label;
        day.events = slice.timestamps.empty() ? EventSeries{2, {{}, {}}, 0.0, 0.0}
                                              : midprice_to_updown(slice);
        // rebase to the window, not to the first tick
        for (auto& comp : day.events.events)
            for (auto& t : comp) t -= w.start;
        day.events.t_start = 0.0;
        day.events.t_end = w.end - w.start;
        if (day.events.total_events() < min_events) {
            if (report) report->dropped_labels.push_back(w.label);
            continue;
        }
        out.push_back(std::move(day));
    }
    return out;
}

KernelSpecFile parse_kernel_spec_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("kernel spec: invalid JSON: ") + e.what());
    }
    try {
        KernelSpecFile out;
        out.spec.n = j.at("n").get<int>();
        const auto& entries = j.at("entries");
        if (!entries.is_array() || entries.size() != static_cast<std::size_t>(out.spec.n))
            throw ValidationError("kernel spec: 'entries' must be an n x n grid");
        for (const auto& row : entries) {
            if (!row.is_array() || row.size() != static_cast<std::size_t>(out.spec.n))
                throw ValidationError("kernel spec: 'entries' must be an n x n grid");
            for (const auto& cell : row) out.spec.entries.push_back(entry_from_json(cell));
        }
        const auto mu = j.at("mu").get<std::vector<double>>();
        out.mu.mu = Eigen::Map<const Vec>(mu.data(), static_cast<Eigen::Index>(mu.size()));
        out.spec.validate();
        out.mu.validate();
        if (out.mu.mu.size() != out.spec.n)
            throw ValidationError("kernel spec: 'mu' length must equal n");
        return out;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("kernel spec: ") + e.what());
    }
}

KernelSpecFile load_kernel_spec(const std::string& path) {
    auto in = open_or_throw(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_kernel_spec_json(ss.str());
}

std::string kernel_spec_to_json(const KernelSpec& spec, const BackgroundRate& mu) {
    json j;
    j["n"] = spec.n;
    json rows = json::array();
    for (int i = 0; i < spec.n; ++i) {
        json row = json::array();
        for (int c = 0; c < spec.n; ++c) row.push_back(entry_to_json(spec.entry(i, c)));
        rows.push_back(row);
    }
    j["entries"] = rows;
    std::vector<double> muv(mu.mu.data(), mu.mu.data() + mu.mu.size());
    j["mu"] = muv;
    return j.dump(2) + "\n";
}

std::vector<DayWindow> load_windows(const std::string& path) {
    auto in = open_or_throw(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("windows file: invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw ValidationError("windows file: expected a JSON array");
    std::vector<DayWindow> out;
    for (const auto& item : j) {
        DayWindow w;
        w.label = item.value("label", "window-" + std::to_string(out.size()));
        try {
            w.start = item.at("start").get<double>();
            w.end = item.at("end").get<double>();
        } catch (const json::exception& e) {
            throw ValidationError(std::string("windows file: ") + e.what());
        }
        out.push_back(std::move(w));
    }
    return out;
}

void write_covariance(const std::string& csv_path, const std::string& sidecar_path,
                      const SampledMatrixFunction& cov, const Vec& lambda_bar) {
    cov.validate();
    std::string body = "lag";
    for (int r = 0; r < cov.n; ++r)
        for (int c = 0; c < cov.n; ++c)
            body += ",v" + std::to_string(r + 1) + std::to_string(c + 1);
    body += "\n";
    for (int k = -cov.max_lag_index; k <= cov.max_lag_index; ++k) {
        body += format_double(cov.lag(k + cov.max_lag_index));
        const Mat& m = cov.at_lag_index(k);
        for (int r = 0; r < cov.n; ++r)
            for (int c = 0; c < cov.n; ++c) body += "," + format_double(m(r, c));
        body += "\n";
    }
    atomic_write_text(csv_path, body);

    json side;
    side["h"] = cov.h;
    side["delta"] = cov.delta;
    side["tau_max"] = cov.delta * cov.max_lag_index;
    side["n"] = cov.n;
    std::vector<double> lam(lambda_bar.data(), lambda_bar.data() + lambda_bar.size());
    side["lambda_bar"] = lam;
    atomic_write_text(sidecar_path, side.dump(2) + "\n");
}

CovarianceFile load_covariance(const std::string& csv_path, const std::string& sidecar_path) {
    json side;
    {
        auto in = open_or_throw(sidecar_path);
        try {
            in >> side;
        } catch (const json::exception& e) {
            throw ValidationError(std::string("covariance sidecar: invalid JSON: ") + e.what());
        }
    }
    CovarianceFile out;
    try {
        out.cov.n = side.at("n").get<int>();
        out.cov.h = side.at("h").get<double>();
        out.cov.delta = side.at("delta").get<double>();
        const double tau_max = side.at("tau_max").get<double>();
        out.cov.max_lag_index = static_cast<int>(std::llround(tau_max / out.cov.delta));
        const auto lam = side.at("lambda_bar").get<std::vector<double>>();
        out.lambda_bar = Eigen::Map<const Vec>(lam.data(), static_cast<Eigen::Index>(lam.size()));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("covariance sidecar: ") + e.what());
    }

    auto in = open_or_throw(csv_path);
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    std::vector<Mat> values;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (!saw_header) {
            saw_header = true;
            if (t.rfind("lag", 0) == 0) continue;
        }
        const auto fields = split_csv_line(t);
        if (fields.size() != 1 + static_cast<std::size_t>(out.cov.n) * out.cov.n)
            throw ValidationError("covariance csv: wrong column count at line " + std::to_string(line_no));
        Mat m(out.cov.n, out.cov.n);
        std::size_t f = 1;
        for (int r = 0; r < out.cov.n; ++r)
            for (int c = 0; c < out.cov.n; ++c)
                m(r, c) = parse_number(fields[f++], "covariance csv", line_no);
        values.push_back(std::move(m));
    }
    out.cov.values = std::move(values);
    out.cov.validate();
    return out;
}

void write_kernel(const std::string& csv_path, const std::string& sidecar_path,
                  const EstimatedKernel& kernel) {
    std::string body = "t";
    for (int r = 0; r < kernel.n; ++r)
        for (int c = 0; c < kernel.n; ++c)
            body += ",phi" + std::to_string(r + 1) + std::to_string(c + 1);
    body += "\n";
    for (int k = 0; k < kernel.grid_points(); ++k) {
        body += format_double(k * kernel.delta);
        for (int r = 0; r < kernel.n; ++r)
            for (int c = 0; c < kernel.n; ++c) body += "," + format_double(kernel.value(k, r, c));
        body += "\n";
    }
    atomic_write_text(csv_path, body);

    json side;
    side["h"] = kernel.h;
    side["delta"] = kernel.delta;
    side["tau_max"] = kernel.tau_max;
    side["lambda_bar"] = kernel.lambda_bar;
    side["clip_count"] = kernel.clip_count;
    side["neg_mass_ratio"] = kernel.neg_mass_ratio;
    side["imag_residue_rms"] = kernel.imag_residue_rms;
    side["aliasing_top_decade"] = kernel.aliasing_top_decade;
    side["n"] = kernel.n;
    atomic_write_text(sidecar_path, side.dump(2) + "\n");
}

EstimatedKernel load_kernel(const std::string& csv_path, const std::string& sidecar_path) {
    json side;
    {
        auto in = open_or_throw(sidecar_path);
        try {
            in >> side;
        } catch (const json::exception& e) {
            throw ValidationError(std::string("kernel sidecar: invalid JSON: ") + e.what());
        }
    }
    EstimatedKernel out;
    try {
        out.n = side.at("n").get<int>();
        out.h = side.at("h").get<double>();
        out.delta = side.at("delta").get<double>();
        out.tau_max = side.at("tau_max").get<double>();
        out.lambda_bar = side.at("lambda_bar").get<double>();
        out.clip_count = side.at("clip_count").get<int>();
        out.neg_mass_ratio = side.at("neg_mass_ratio").get<double>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("kernel sidecar: ") + e.what());
    }

    auto in = open_or_throw(csv_path);
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (!saw_header) {
            saw_header = true;
            if (t.rfind("t,", 0) == 0) continue;
        }
        const auto fields = split_csv_line(t);
        if (fields.size() != 1 + static_cast<std::size_t>(out.n) * out.n)
            throw ValidationError("kernel csv: wrong column count at line " + std::to_string(line_no));
        Mat m(out.n, out.n);
        std::size_t f = 1;
        for (int r = 0; r < out.n; ++r)
            for (int c = 0; c < out.n; ++c) m(r, c) = parse_number(fields[f++], "kernel csv", line_no);
        out.values.push_back(std::move(m));
    }
    return out;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write file: " + tmp.string());
        out << content;
        if (!out) throw ValidationError("short write: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string file_fingerprint(const std::string& path) {
    auto in = open_or_throw(path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

} // namespace hawkes
