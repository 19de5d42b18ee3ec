#pragma once

// Artifact formats shared by the CLI and the Python module.
//
//   histogram.csv   degree,count,pmf,ccdf
//   edges.csv       src,dst,established_at        (external ids)
//   nodes.csv       node,desired_degree,out_degree,in_degree  (active nodes)
//   node_map.csv    dense,external
//   series.csv      interval,activated,adds,expiries,replacements,edges,mean_degree
//   fit.json        {"degree_kind", "fits": [lsq, mle]}
//   snapshot.json   {"interval", "node_count", "edge_count", "desired_degrees"}

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oppnet/simulator.hpp"

namespace oppnet {

/// Shortest round-trip decimal form.
std::string format_double(double value);

std::string histogram_csv(const DegreeHistogram& hist);
std::string edges_csv(const OverlaySnapshot& snapshot, std::span<const std::uint64_t> ids);
std::string nodes_csv(const OverlaySnapshot& snapshot, std::span<const std::uint64_t> ids);
std::string node_map_csv(std::span<const std::uint64_t> ids);
std::string series_csv(std::span<const IntervalSummary> series);

nlohmann::ordered_json fit_to_json(const FitOutcome& outcome, FitMethod method,
                                   std::pair<std::uint32_t, std::uint32_t> requested);
/// fit.json body for a report; `fit_range` is the requested LSQ range.
std::string fit_json(const SnapshotReport& report, std::pair<std::uint32_t, std::uint32_t> fit_range,
                     std::uint32_t x_min);
nlohmann::ordered_json graph_metrics_json(const SnapshotReport& report);
std::string snapshot_summary_json(const OverlaySnapshot& snapshot,
                                  std::span<const std::uint64_t> ids);

/// A snapshot rebuilt from saved CSV artifacts, with its id table.
struct SavedSnapshot {
    OverlaySnapshot snapshot;
    std::vector<std::uint64_t> ids;
};

/// Reads edges.csv and, when given, nodes.csv. Without nodes.csv the active
/// set is the edge endpoints, so isolated nodes are lost.
SavedSnapshot read_saved_snapshot(const std::filesystem::path& edges,
                                  const std::optional<std::filesystem::path>& nodes);

/// Writes via a sibling temp file and rename, so readers never see a
/// partially written artifact.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

} // namespace oppnet
