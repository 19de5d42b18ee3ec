#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oppnet/analytics.hpp"
#include "oppnet/overlay.hpp"
#include "oppnet/trace.hpp"

#include <nlohmann/json.hpp>

namespace oppnet {

/// Where a run's contacts come from: a CSV file or a synthetic generator.
using TraceSource = std::variant<std::string, SyntheticParams>;

/// Synthetic traces are drawn with the run seed.
ContactTrace load_trace(const TraceSource& source, std::uint64_t seed);

struct RunConfig {
    OverlayConfig overlay;
    std::uint64_t seed = 0;
    /// Extra snapshots to keep; the final snapshot is always kept.
    std::vector<Interval> snapshot_intervals;
    std::optional<TraceSource> source;
    /// Log-log fit range; defaults to [d_min, d_max].
    std::optional<std::pair<std::uint32_t, std::uint32_t>> fit_range;
    std::size_t diameter_samples = 32;

    std::pair<std::uint32_t, std::uint32_t> effective_fit_range() const;
};

nlohmann::ordered_json to_json(const OverlayConfig& config);
nlohmann::ordered_json to_json(const RunConfig& config);

struct RunResult {
    OverlaySnapshot final_snapshot;
    std::vector<OverlaySnapshot> snapshots;  ///< ascending by interval
    std::vector<IntervalSummary> series;     ///< one per trace interval
    std::vector<NodeId> activation_order;
    RunConfig config;
    double wall_seconds = 0.0;
};

/// Steps the overlay through every interval of the trace in order.
RunResult run(const ContactTrace& trace, const RunConfig& config);

/// Deterministic serialization of everything in the result except wall time.
std::string run_result_json(const RunResult& result);

/// A fit that either succeeded or failed with a reason.
struct FitOutcome {
    std::optional<FitResult> fit;
    std::string error;
};

/// Degree statistics and graph metrics of one snapshot.
struct SnapshotReport {
    DegreeHistogram out_hist;
    DegreeHistogram in_hist;
    FitOutcome lsq;
    FitOutcome mle;
    std::vector<std::size_t> component_sizes;
    std::optional<DiameterEstimate> diameter;
    double fraction_below_dmin = 0.0;
    double fraction_at_desired = 0.0;
};

/// Fits use out-degree over [fit_lo, fit_hi] (LSQ) and x_min = d_min (MLE).
SnapshotReport analyze_snapshot(const OverlaySnapshot& snapshot, std::uint32_t fit_lo,
                                std::uint32_t fit_hi, std::uint32_t x_min,
                                std::size_t diameter_samples, std::uint64_t seed);

/// Parameter grid; an empty list means "keep the base value".
struct SweepGrid {
    std::vector<std::uint32_t> delta;
    std::vector<std::uint32_t> d_min;
    std::vector<std::uint32_t> d_max;
    std::vector<double> lambda_mag;
    std::vector<double> omega;
    std::vector<std::uint32_t> c_min;
};

struct RunDigest {
    std::uint64_t edge_count = 0;
    std::size_t active_nodes = 0;
    double mean_degree = 0.0;
    std::uint64_t edge_hash = 0;  ///< FNV-1a over the final edge list
    SnapshotReport report;
    double wall_seconds = 0.0;
};

struct SweepPoint {
    OverlayConfig overlay;
    RunDigest digest;
};

struct SweepResult {
    std::vector<SweepPoint> points;  ///< in grid order (delta slowest)
    std::vector<std::string> warnings;
};

/// Cartesian product of the grid; every point reuses the base seed.
/// Points with d_min > d_max are skipped with a warning. `jobs` > 1 runs
/// points concurrently; output order never depends on completion order.
SweepResult run_sweep(const ContactTrace& trace, const RunConfig& base, const SweepGrid& grid,
                      unsigned jobs = 1);

RunDigest digest_run(const RunResult& result);
std::uint64_t edge_list_hash(const OverlaySnapshot& snapshot);

} // namespace oppnet
