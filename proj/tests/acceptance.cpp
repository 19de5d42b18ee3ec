// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit on any
// failure. Independent oracles live in oracles.hpp.

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "oppnet/io.hpp"
#include "oppnet/simulator.hpp"

using namespace oppnet;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double peak_rss_mb() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return static_cast<double>(u.ru_maxrss) / 1024.0;  // ru_maxrss is in KiB on Linux
}

struct Verdict {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Verdict()>& check) {
    Verdict v;
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << "AC" << id << ' ' << title << ": " << v.detail
              << std::endl;
}

std::string fmt(double x, int digits = 3) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << x;
    return s.str();
}

// Heterogeneous trace used by the shaping, monotonicity, residue and
// determinism criteria: five contact draws per node per interval.
constexpr std::uint64_t kShapingSeed = 2024;
const SyntheticParams kShapingTrace{2000, 200, 10000, 1.5};

RunConfig defaults_with_seed(std::uint64_t seed) {
    RunConfig c;
    c.seed = seed;
    c.diameter_samples = 16;
    return c;  // OverlayConfig defaults: delta 5, lambda 2.5, d in [5, 100], cmin 1, omega 0.25
}

Verdict window_oracle() {
    const auto start = Clock::now();
    std::uint64_t checked = 0, mismatches = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto trace = oracle::random_trace(seed * 7919, 20, 50, 15);
        const auto contacts = oracle::contact_set(trace);
        const std::uint32_t delta = 1 + static_cast<std::uint32_t>((seed - 1) % 5);
        ContactWindow w({delta}, trace.node_count());
        for (Interval t = 0; t < trace.num_intervals(); ++t) {
            w.advance(trace.events_at(t));
            for (NodeId i = 0; i < trace.node_count(); ++i)
                for (NodeId j = 0; j < trace.node_count(); ++j) {
                    if (i == j) continue;
                    ++checked;
                    if (w.contact_count(i, j) != oracle::window_count(contacts, t, delta, i, j))
                        ++mismatches;
                }
        }
    }
    const double secs = seconds_since(start);
    return {mismatches == 0 && secs < 5.0,
            std::to_string(checked) + " (t,i,j) counts, " + std::to_string(mismatches) +
                " mismatches, " + fmt(secs) + " s (limit 5 s)"};
}

Verdict sampler_fidelity() {
    const auto start = Clock::now();
    const DegreeDistribution dist(5, 100, 2.5);
    Engine e(derive_seed(7, 0));
    constexpr std::size_t draws = 1'000'000;
    std::vector<std::uint64_t> hits(96, 0);
    for (std::size_t k = 0; k < draws; ++k) ++hits[dist.sample(e) - 5];

    // Analytic pmf computed independently of the sampler's tables.
    double z = 0.0;
    for (int d = 5; d <= 100; ++d) z += std::pow(d, -2.5);
    double tv = 0.0;
    for (int d = 5; d <= 100; ++d)
        tv += std::abs(static_cast<double>(hits[d - 5]) / draws - std::pow(d, -2.5) / z);
    tv *= 0.5;
    const double secs = seconds_since(start);
    return {tv <= 0.005 && secs < 2.0,
            "TV " + fmt(tv, 5) + " (limit 0.005) over 1e6 draws, " + fmt(secs) + " s (limit 2 s)"};
}

Verdict invariant_suite() {
    const auto start = Clock::now();
    std::size_t cap_violations = 0, stale_links = 0, omega0_replacements = 0, unreachable_links = 0;
    std::size_t omega0_runs = 0, unreachable_runs = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Engine pick(seed * 104729);
        const auto trace = oracle::random_trace(seed * 31, 30, 40, 25);
        OverlayConfig c;
        c.delta = 1 + static_cast<std::uint32_t>(uniform_index(pick, 6));
        c.d_min = 1 + static_cast<std::uint32_t>(uniform_index(pick, 4));
        c.d_max = c.d_min + static_cast<std::uint32_t>(uniform_index(pick, 8));
        c.lambda_mag = 2.0 + uniform01(pick);
        switch (seed % 5) {
        case 0: c.omega = 0.0; break;
        case 1: c.omega = 1.0; break;
        default: c.omega = uniform01(pick);
        }
        c.c_min = seed % 4 == 3 ? c.delta + 1 + static_cast<std::uint32_t>(uniform_index(pick, 3))
                                : 1 + static_cast<std::uint32_t>(uniform_index(pick, c.delta));
        omega0_runs += c.omega == 0.0;
        unreachable_runs += c.c_min > c.delta;

        OverlayEngine engine(c, trace.node_count(), seed);
        std::size_t replacements = 0;
        for (Interval t = 0; t < trace.num_intervals(); ++t) {
            const auto s = engine.step(trace.events_at(t));
            replacements += s.replacements;
            for (NodeId i = 0; i < trace.node_count(); ++i) {
                const auto& node = engine.node(i);
                if (node.neighbors.size() > node.desired_degree) ++cap_violations;
                for (const auto& n : node.neighbors)
                    if (engine.window().contact_count(i, n.peer) == 0) ++stale_links;
            }
            if (c.c_min > c.delta) unreachable_links += s.edges;
        }
        if (c.omega == 0.0) omega0_replacements += replacements;
    }
    const double secs = seconds_since(start);
    const bool ok = cap_violations == 0 && stale_links == 0 && omega0_replacements == 0 &&
                    unreachable_links == 0 && omega0_runs > 0 && unreachable_runs > 0 &&
                    secs < 10.0;
    return {ok, "50 runs (" + std::to_string(omega0_runs) + " with omega 0, " +
                    std::to_string(unreachable_runs) + " with cmin > delta): cap violations " +
                    std::to_string(cap_violations) + ", stale links " +
                    std::to_string(stale_links) + ", omega-0 replacements " +
                    std::to_string(omega0_replacements) + ", links under cmin > delta " +
                    std::to_string(unreachable_links) + ", " + fmt(secs) + " s (limit 10 s)"};
}

Verdict naive_equivalence() {
    std::size_t equal = 0, nonempty = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Engine pick(seed * 15485863);
        const auto trace = oracle::random_trace(seed * 2654435761ULL, 10, 12, 12);
        const oracle::NaiveParams p{
            1 + static_cast<std::uint32_t>(uniform_index(pick, 4)),
            1 + static_cast<std::uint32_t>(uniform_index(pick, 2)),
            seed % 4 == 0 ? 1.0 : uniform01(pick),
            2.0 + uniform01(pick),
            1 + static_cast<std::uint32_t>(uniform_index(pick, 2)),
            3 + static_cast<std::uint32_t>(uniform_index(pick, 3))};
        RunConfig c;
        c.overlay = {p.delta, p.c_min, p.omega, p.lambda_mag, p.d_min, p.d_max};
        c.seed = seed;
        const auto result = run(trace, c);
        std::vector<std::tuple<NodeId, NodeId, Interval>> got;
        for (const auto& e : result.final_snapshot.edges)
            got.emplace_back(e.src, e.dst, e.established_at);
        const auto expected = oracle::naive_run(trace, p, seed);
        equal += got == expected;
        nonempty += !expected.empty();
    }
    return {equal == 20 && nonempty > 0, std::to_string(equal) + "/20 final edge sets equal (" +
                                             std::to_string(nonempty) + " nonempty)"};
}

struct ShapingRun {
    ContactTrace trace;
    RunResult result;
    SnapshotReport report;
    double seconds;
};

ShapingRun shaping_run(std::uint32_t delta) {
    const auto start = Clock::now();
    auto trace = generate_synthetic(kShapingTrace, kShapingSeed);
    auto config = defaults_with_seed(kShapingSeed);
    config.overlay.delta = delta;
    auto result = run(trace, config);
    auto report = analyze_snapshot(result.final_snapshot, 5, 100, 5, config.diameter_samples,
                                   config.seed);
    return {std::move(trace), std::move(result), std::move(report), seconds_since(start)};
}

} // namespace

int main() {
    std::cout << "acceptance suite" << std::endl;

    report(1, "window oracle equivalence", window_oracle);
    report(2, "sampler fidelity", sampler_fidelity);
    report(3, "algorithm invariants", invariant_suite);
    report(4, "reference implementation equivalence", naive_equivalence);

    std::optional<ShapingRun> base;
    report(5, "scale-free shaping", [&]() -> Verdict {
        base = shaping_run(5);
        const auto& r = base->report;
        if (!r.lsq.fit) return {false, "log-log fit failed: " + r.lsq.error};
        if (!r.mle.fit) return {false, "MLE fit failed: " + r.mle.error};
        const double slope = r.lsq.fit->exponent, r2 = *r.lsq.fit->r_squared;
        const double alpha = r.mle.fit->exponent;
        const bool ok = slope >= -3.2 && slope <= -1.8 && r2 >= 0.85 && alpha >= 1.8 &&
                        alpha <= 3.2 && base->seconds < 60.0;
        return {ok, "N 2000, T 200, " + std::to_string(base->trace.event_count()) +
                        " events; slope " + fmt(slope) + " in [-3.2, -1.8], r2 " + fmt(r2) +
                        " >= 0.85, alpha " + fmt(alpha) + " in [1.8, 3.2], " +
                        std::to_string(r.lsq.fit->points) + " bins, " + fmt(base->seconds, 2) +
                        " s (limit 60 s)"};
    });

    report(6, "delta monotonicity", [&]() -> Verdict {
        if (!base) return {false, "criterion 5 run unavailable"};
        const double m1 = shaping_run(1).report.out_hist.mean();
        const double m5 = base->report.out_hist.mean();
        const double m10 = shaping_run(10).report.out_hist.mean();
        return {m1 <= m5 && m5 <= m10, "mean degree " + fmt(m1) + " (delta 1) <= " + fmt(m5) +
                                           " (delta 5) <= " + fmt(m10) + " (delta 10)"};
    });

    report(7, "sub-dmin residue", [&]() -> Verdict {
        if (!base) return {false, "criterion 5 run unavailable"};
        const double f = base->report.fraction_below_dmin;
        return {f > 0.0, "fraction of nodes with degree < 5: " + fmt(f, 4)};
    });

    report(8, "determinism", [&]() -> Verdict {
        if (!base) return {false, "criterion 5 run unavailable"};
        const auto again = shaping_run(5);
        const std::pair<std::uint32_t, std::uint32_t> range{5, 100};
        const bool hist_same =
            histogram_csv(base->report.out_hist) == histogram_csv(again.report.out_hist);
        const bool fit_same =
            fit_json(base->report, range, 5) == fit_json(again.report, range, 5);
        return {hist_same && fit_same, std::string("histogram CSV ") +
                                           (hist_same ? "identical" : "differs") + ", fit JSON " +
                                           (fit_same ? "identical" : "differs")};
    });
    base.reset();

    report(9, "scale", [&]() -> Verdict {
        const auto start = Clock::now();
        const SyntheticParams p{22341, 500, 5 * 22341, 1.5};
        const auto trace = generate_synthetic(p, kShapingSeed);
        auto config = defaults_with_seed(kShapingSeed);
        config.overlay.delta = 10;
        const auto result = run(trace, config);
        const auto rep = analyze_snapshot(result.final_snapshot, 5, 100, 5,
                                          config.diameter_samples, config.seed);
        const double secs = seconds_since(start);
        const double mb = peak_rss_mb();
        return {secs < 600.0 && mb < 4096.0,
                "N 22341, T 500, delta 10, " + std::to_string(trace.event_count()) + " events, " +
                    std::to_string(result.final_snapshot.edges.size()) + " links; " +
                    fmt(secs, 1) + " s (limit 600 s), peak RSS " + fmt(mb, 0) +
                    " MB (limit 4096 MB)"};
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
