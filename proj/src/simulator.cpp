#include "oppnet/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <set>
#include <thread>

namespace oppnet {

ContactTrace load_trace(const TraceSource& source, std::uint64_t seed) {
    if (const auto* path = std::get_if<std::string>(&source)) return parse_trace_file(*path);
    return generate_synthetic(std::get<SyntheticParams>(source), seed);
}

std::pair<std::uint32_t, std::uint32_t> RunConfig::effective_fit_range() const {
    return fit_range.value_or(std::make_pair(overlay.d_min, overlay.d_max));
}

nlohmann::ordered_json to_json(const OverlayConfig& c) {
    return {{"delta", c.delta},   {"cmin", c.c_min}, {"omega", c.omega},
            {"lambda", c.lambda_mag}, {"dmin", c.d_min}, {"dmax", c.d_max}};
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j = to_json(c.overlay);
    j["seed"] = c.seed;
    j["snapshots"] = c.snapshot_intervals;
    const auto [lo, hi] = c.effective_fit_range();
    j["fit_range"] = {lo, hi};
    j["diameter_samples"] = c.diameter_samples;
    if (!c.source) {
        j["trace"] = nullptr;
    } else if (const auto* path = std::get_if<std::string>(&*c.source)) {
        j["trace"] = {{"kind", "file"}, {"path", *path}};
    } else {
        const auto& p = std::get<SyntheticParams>(*c.source);
        j["trace"] = {{"kind", "synthetic"},
                      {"nodes", p.num_nodes},
                      {"intervals", p.num_intervals},
                      {"events_per_interval", p.events_per_interval},
                      {"activity_shape", p.activity_shape}};
    }
    return j;
}

RunResult run(const ContactTrace& trace, const RunConfig& config) {
    config.overlay.validate();
    for (const auto t : config.snapshot_intervals)
        if (t >= trace.num_intervals())
            throw ConfigError("snapshot interval " + std::to_string(t) +
                              " outside trace of length " +
                              std::to_string(trace.num_intervals()));
    const std::set<Interval> wanted(config.snapshot_intervals.begin(),
                                    config.snapshot_intervals.end());

    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    result.config = config;
    result.series.reserve(trace.num_intervals());

    OverlayEngine engine(config.overlay, trace.node_count(), config.seed);
    for (Interval t = 0; t < trace.num_intervals(); ++t) {
        result.series.push_back(engine.step(trace.events_at(t)));
        if (wanted.contains(t)) result.snapshots.push_back(engine.snapshot());
    }
    result.final_snapshot = engine.snapshot();
    result.activation_order.assign(engine.activation_order().begin(),
                                   engine.activation_order().end());
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

namespace {

nlohmann::ordered_json snapshot_to_json(const OverlaySnapshot& s) {
    nlohmann::ordered_json j;
    j["interval"] = s.interval ? nlohmann::ordered_json(*s.interval) : nlohmann::ordered_json();
    j["node_count"] = s.node_count;
    auto& edges = j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : s.edges) edges.push_back({e.src, e.dst, e.established_at});
    j["desired_degree"] = s.desired_degree;
    return j;
}

} // namespace

std::string run_result_json(const RunResult& r) {
    nlohmann::ordered_json j;
    j["config"] = to_json(r.config);
    j["final"] = snapshot_to_json(r.final_snapshot);
    auto& snaps = j["snapshots"] = nlohmann::ordered_json::array();
    for (const auto& s : r.snapshots) snaps.push_back(snapshot_to_json(s));
    auto& series = j["series"] = nlohmann::ordered_json::array();
    for (const auto& s : r.series)
        series.push_back({s.interval, s.activated, s.adds, s.expiries, s.replacements, s.edges,
                          s.mean_degree});
    j["activation_order"] = r.activation_order;
    return j.dump();
}

SnapshotReport analyze_snapshot(const OverlaySnapshot& snapshot, std::uint32_t fit_lo,
                                std::uint32_t fit_hi, std::uint32_t x_min,
                                std::size_t diameter_samples, std::uint64_t seed) {
    SnapshotReport rep;
    const auto out = active_degrees(snapshot, DegreeKind::Out);
    rep.out_hist = DegreeHistogram(out);
    rep.in_hist = degree_histogram(snapshot, DegreeKind::In);

    try {
        rep.lsq.fit = loglog_lsq_fit(rep.out_hist, fit_lo, fit_hi);
    } catch (const AnalysisError& e) {
        rep.lsq.error = e.what();
    }
    try {
        rep.mle.fit = mle_powerlaw_fit(out, x_min);
    } catch (const AnalysisError& e) {
        rep.mle.error = e.what();
    }

    rep.component_sizes = weakly_connected_components(snapshot);
    if (!rep.component_sizes.empty() && diameter_samples > 0)
        rep.diameter = estimate_diameter(snapshot, diameter_samples, seed);

    if (!out.empty()) {
        const auto below = std::count_if(out.begin(), out.end(),
                                         [&](std::uint32_t d) { return d < x_min; });
        rep.fraction_below_dmin = static_cast<double>(below) / static_cast<double>(out.size());

        const auto all_out = snapshot.out_degrees();
        std::size_t reached = 0;
        for (std::size_t i = 0; i < all_out.size(); ++i)
            if (snapshot.active[i] && all_out[i] == snapshot.desired_degree[i]) ++reached;
        rep.fraction_at_desired = static_cast<double>(reached) / static_cast<double>(out.size());
    }
    return rep;
}

std::uint64_t edge_list_hash(const OverlaySnapshot& snapshot) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto feed = [&](std::uint32_t v) {
        for (int k = 0; k < 4; ++k) {
            h ^= (v >> (8 * k)) & 0xFFu;
            h *= 0x100000001B3ULL;
        }
    };
    for (const auto& e : snapshot.edges) {
        feed(e.src);
        feed(e.dst);
        feed(e.established_at);
    }
    return h;
}

RunDigest digest_run(const RunResult& result) {
    RunDigest d;
    const auto& snap = result.final_snapshot;
    d.edge_count = snap.edges.size();
    d.active_nodes = snap.active_count();
    d.mean_degree = d.active_nodes == 0 ? 0.0
                                        : static_cast<double>(d.edge_count) /
                                              static_cast<double>(d.active_nodes);
    d.edge_hash = edge_list_hash(snap);
    const auto [lo, hi] = result.config.effective_fit_range();
    d.report = analyze_snapshot(snap, lo, hi, result.config.overlay.d_min,
                                result.config.diameter_samples, result.config.seed);
    d.wall_seconds = result.wall_seconds;
    return d;
}

SweepResult run_sweep(const ContactTrace& trace, const RunConfig& base, const SweepGrid& grid,
                      unsigned jobs) {
    auto or_base = [](const auto& values, auto base_value) {
        using T = decltype(base_value);
        return values.empty() ? std::vector<T>{base_value}
                              : std::vector<T>(values.begin(), values.end());
    };
    const auto deltas = or_base(grid.delta, base.overlay.delta);
    const auto d_mins = or_base(grid.d_min, base.overlay.d_min);
    const auto d_maxs = or_base(grid.d_max, base.overlay.d_max);
    const auto lambdas = or_base(grid.lambda_mag, base.overlay.lambda_mag);
    const auto omegas = or_base(grid.omega, base.overlay.omega);
    const auto c_mins = or_base(grid.c_min, base.overlay.c_min);

    SweepResult out;
    std::vector<OverlayConfig> configs;
    for (const auto delta : deltas)
        for (const auto d_min : d_mins)
            for (const auto d_max : d_maxs)
                for (const auto lambda : lambdas)
                    for (const auto omega : omegas)
                        for (const auto c_min : c_mins) {
                            OverlayConfig c{delta, c_min, omega, lambda, d_min, d_max};
                            try {
                                c.validate();
                            } catch (const ConfigError& e) {
                                out.warnings.push_back("skipping " + to_json(c).dump() + ": " +
                                                       e.what());
                                continue;
                            }
                            configs.push_back(c);
                        }
    if (configs.empty()) throw ConfigError("sweep grid has no valid points");

    out.points.resize(configs.size());
    auto run_point = [&](std::size_t k) {
        RunConfig cfg = base;
        cfg.overlay = configs[k];
        // An explicit fit range only makes sense for the base d_min/d_max.
        if (!grid.d_min.empty() || !grid.d_max.empty()) cfg.fit_range.reset();
        cfg.snapshot_intervals.clear();
        const auto result = run(trace, cfg);
        out.points[k] = SweepPoint{configs[k], digest_run(result)};
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, configs.size()));
    if (workers == 1) {
        for (std::size_t k = 0; k < configs.size(); ++k) run_point(k);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k; (k = next.fetch_add(1)) < configs.size();) {
                    try {
                        run_point(k);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace oppnet
