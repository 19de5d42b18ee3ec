#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "oppnet/error.hpp"

namespace oppnet {

/// Dense node index in [0, node_count). Trace files may use arbitrary
/// nonnegative ids; those are remapped on parse and kept in `external_ids`.
using NodeId = std::uint32_t;

/// Index of a trace interval, the unit of time everywhere in the library.
using Interval = std::uint32_t;

/// A meeting between two nodes during one trace interval. Undirected; the
/// normalized form has a < b.
struct ContactEvent {
    Interval interval = 0;
    NodeId a = 0;
    NodeId b = 0;

    friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
    friend auto operator<=>(const ContactEvent&, const ContactEvent&) = default;
};

/// Interval-indexed contact log.
///
/// Events are sorted by (interval, a, b), with a < b and no duplicate pair
/// inside an interval. `external_ids[n]` is the id node n carried in the
/// source file (identity for synthetic traces); it is strictly increasing, so
/// dense order and file-id order agree.
class ContactTrace {
public:
    ContactTrace() = default;

    /// Builds a trace from raw events over dense ids, normalizing them.
    /// Throws DataError on self contacts, out-of-range ids or intervals.
    ContactTrace(std::uint32_t node_count, Interval num_intervals,
                 std::vector<ContactEvent> events,
                 std::vector<std::uint64_t> external_ids = {});

    std::uint32_t node_count() const noexcept { return node_count_; }
    Interval num_intervals() const noexcept { return num_intervals_; }
    std::size_t event_count() const noexcept { return events_.size(); }

    std::span<const ContactEvent> events() const noexcept { return events_; }
    std::span<const ContactEvent> events_at(Interval t) const;

    std::span<const std::uint64_t> external_ids() const noexcept { return external_ids_; }
    std::uint64_t external_id(NodeId n) const { return external_ids_.at(n); }

    friend bool operator==(const ContactTrace&, const ContactTrace&) = default;

private:
    std::uint32_t node_count_ = 0;
    Interval num_intervals_ = 0;
    std::vector<ContactEvent> events_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint64_t> external_ids_;
};

/// Sorts, orients (a < b) and de-duplicates events in place.
void normalize_events(std::vector<ContactEvent>& events);

enum class TraceFormat { Csv };

/// Parses `interval,node_a,node_b` lines. `#` lines and blank lines are
/// skipped; CRLF is accepted. Errors carry the 1-based line number.
ContactTrace parse_trace(std::istream& input, TraceFormat format = TraceFormat::Csv);
ContactTrace parse_trace_file(const std::string& path, TraceFormat format = TraceFormat::Csv);

/// Writes the trace back in the CSV layout using external ids.
void write_trace(std::ostream& out, const ContactTrace& trace);

struct SyntheticParams {
    std::uint32_t num_nodes = 0;
    Interval num_intervals = 0;
    std::uint32_t events_per_interval = 0;
    double activity_shape = 1.5;

    void validate() const;
};

/// Heterogeneous-activity trace. Every node gets a Pareto(shape, scale 1)
/// weight; each draw picks i with probability proportional to w_i and then
/// j != i proportional to w_j. Duplicate draws inside an interval collapse.
ContactTrace generate_synthetic(const SyntheticParams& params, std::uint64_t seed);

struct TraceStats {
    std::uint32_t node_count = 0;
    Interval interval_count = 0;
    std::size_t event_count = 0;
    std::size_t events_per_interval_min = 0;
    double events_per_interval_mean = 0.0;
    std::size_t events_per_interval_max = 0;
    /// external id -> number of events the node takes part in; nodes without
    /// events are absent.
    std::map<std::uint64_t, std::size_t> contacts_per_node;
};

TraceStats trace_stats(const ContactTrace& trace);
std::string trace_stats_json(const TraceStats& stats);

} // namespace oppnet
