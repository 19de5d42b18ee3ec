#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oppnet/random.hpp"
#include "oppnet/trace.hpp"
#include "oppnet/window.hpp"

namespace oppnet {

/// Parameters of the link-management algorithm.
struct OverlayConfig {
    std::uint32_t delta = 5;  ///< window length, trace intervals
    std::uint32_t c_min = 1;  ///< in-window contact intervals needed for a link
    double omega = 0.25;      ///< replacement probability once the table is full
    double lambda_mag = 2.5;  ///< desired degree follows d^(-lambda_mag)
    std::uint32_t d_min = 5;
    std::uint32_t d_max = 100;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    /// Non-fatal remarks, e.g. an exponent outside the usual [2, 3] band.
    std::vector<std::string> warnings() const;

    friend bool operator==(const OverlayConfig&, const OverlayConfig&) = default;
};

/// Truncated discrete power law on [d_min, d_max]: P(d) = d^(-lambda) / Z.
class DegreeDistribution {
public:
    DegreeDistribution(std::uint32_t d_min, std::uint32_t d_max, double lambda_mag);
    explicit DegreeDistribution(const OverlayConfig& config)
        : DegreeDistribution(config.d_min, config.d_max, config.lambda_mag) {}

    /// 0 outside the support.
    double pmf(std::int64_t d) const;
    double normalizer() const noexcept { return normalizer_; }

    /// Inverse-CDF draw over the precomputed cumulative table.
    std::uint32_t sample(Engine& engine) const;

    std::uint32_t d_min() const noexcept { return d_min_; }
    std::uint32_t d_max() const noexcept { return d_max_; }

private:
    std::uint32_t d_min_;
    std::uint32_t d_max_;
    double normalizer_ = 0.0;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

inline double degree_pmf(const OverlayConfig& config, std::int64_t d) {
    return DegreeDistribution(config).pmf(d);
}

struct NeighborEntry {
    NodeId peer = 0;
    Interval established_at = 0;

    friend bool operator==(const NeighborEntry&, const NeighborEntry&) = default;
};

/// One node's view: its target table size and its directed neighbor table.
struct NodeState {
    bool active = false;
    Interval activated_at = 0;
    std::uint32_t desired_degree = 0;
    std::vector<NeighborEntry> neighbors; ///< sorted by peer
    Engine rng;

    bool has_neighbor(NodeId j) const;
    std::size_t degree() const noexcept { return neighbors.size(); }
};

/// Per-node random stream, independent of processing order.
inline Engine node_engine(std::uint64_t global_seed, NodeId node) {
    return Engine(derive_seed(global_seed, node));
}

/// First appearance of node `i`: seeds its stream and samples its desired
/// degree. Throws std::logic_error if the node is already active.
void activate_node(NodeState& state, NodeId i, Interval t, const DegreeDistribution& dist,
                   std::uint64_t global_seed);

/// Removes neighbors with no contact left in the window. Returns them in
/// ascending order.
std::vector<NodeId> expire_links(NodeState& state, const ContactWindow& window, NodeId i);

struct Replacement {
    NodeId evicted = 0;
    NodeId added = 0;

    friend bool operator==(const Replacement&, const Replacement&) = default;
};

struct ChangeLog {
    std::vector<NodeId> adds;               ///< links created while below target
    std::vector<Replacement> replacements;  ///< evict-then-add pairs
};

/// Eligible non-neighbors are visited strongest contact first (ties by id).
/// Below target they are added; at target, with probability omega, one of
/// the weakest current neighbors (uniformly) is swapped out for them.
ChangeLog process_candidates(NodeState& state, const ContactWindow& window, NodeId i,
                             Interval t, const OverlayConfig& config);

struct IntervalSummary {
    Interval interval = 0;
    std::uint32_t activated = 0;
    std::uint64_t adds = 0;          ///< all insertions, replacement ones included
    std::uint64_t expiries = 0;
    std::uint64_t replacements = 0;  ///< evictions caused by replacement
    std::uint64_t edges = 0;         ///< total table entries after the step
    double mean_degree = 0.0;        ///< over active nodes, after the step

    friend bool operator==(const IntervalSummary&, const IntervalSummary&) = default;
};

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    Interval established_at = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable picture of all neighbor tables after some interval.
struct OverlaySnapshot {
    std::optional<Interval> interval;
    std::uint32_t node_count = 0;
    std::vector<bool> active;
    std::vector<std::uint32_t> desired_degree;  ///< 0 for inactive nodes
    std::vector<Edge> edges;                    ///< sorted by (src, dst)

    std::vector<std::uint32_t> out_degrees() const;
    std::vector<std::uint32_t> in_degrees() const;
    std::size_t active_count() const;

    friend bool operator==(const OverlaySnapshot&, const OverlaySnapshot&) = default;
};

/// Full algorithm state for one run: window, node registry and parameters.
class OverlayEngine {
public:
    OverlayEngine(const OverlayConfig& config, std::uint32_t node_count, std::uint64_t seed);

    /// Processes interval next_interval(): advances the window, activates
    /// nodes seen for the first time, then expires and fills every active
    /// node's table in ascending id order.
    IntervalSummary step(std::span<const ContactEvent> interval_events);

    Interval next_interval() const noexcept { return window_.next_interval(); }

    OverlaySnapshot snapshot() const;

    const ContactWindow& window() const noexcept { return window_; }
    const NodeState& node(NodeId i) const { return nodes_.at(i); }
    std::span<const NodeState> nodes() const noexcept { return nodes_; }
    const OverlayConfig& config() const noexcept { return config_; }
    /// Nodes in the order they were activated.
    std::span<const NodeId> activation_order() const noexcept { return activation_order_; }

    /// Per-node change logs of the latest step, indexed by node.
    std::span<const ChangeLog> last_changes() const noexcept { return last_changes_; }

private:
    OverlayConfig config_;
    DegreeDistribution dist_;
    std::uint64_t seed_;
    ContactWindow window_;
    std::vector<NodeState> nodes_;
    std::vector<NodeId> activation_order_;
    std::vector<NodeId> active_ids_;
    std::vector<ChangeLog> last_changes_;
    std::uint64_t edge_count_ = 0;
};

} // namespace oppnet
